// Copyright 2026 The provtrack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "provtrack/attribute_value.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "provtrack/error.h"

namespace provtrack {

AttributeValue::AttributeValue(std::string value)
    : value_(std::move(value)), type_(kXsdString) {}

AttributeValue::AttributeValue(std::int64_t value)
    : value_(value), type_(kXsdLong) {}

AttributeValue::AttributeValue(double value)
    : value_(value), type_(kXsdDouble) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument,
                "attribute value must be a finite number");
  }
}

AttributeValue::AttributeValue(bool value)
    : value_(value), type_(kXsdBoolean) {}

AttributeValue AttributeValue::date_time(std::string iso8601) {
  std::int64_t ms = 0;
  if (!parse_timestamp_ms(iso8601, &ms)) {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed xsd:dateTime '" + iso8601 + "'");
  }
  AttributeValue v(std::move(iso8601));
  v.type_ = kXsdDateTime;
  return v;
}

AttributeValue AttributeValue::date_time_ms(std::int64_t epoch_ms) {
  return date_time(format_timestamp_ms(epoch_ms));
}

AttributeValue AttributeValue::from_typed_text(const std::string& text,
                                               const std::string& type,
                                               bool* known_type) {
  *known_type = true;
  if (type == kXsdString) return AttributeValue(text);
  if (type == kXsdLong) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::kParse, "malformed xsd:long '" + text + "'");
    }
    return AttributeValue(v);
  }
  if (type == kXsdDouble) {
    double v = 0;
    if (!parse_double(text, &v)) {
      throw Error(ErrorCode::kParse, "malformed xsd:double '" + text + "'");
    }
    return AttributeValue(v);
  }
  if (type == kXsdBoolean) {
    if (text == "true") return AttributeValue(true);
    if (text == "false") return AttributeValue(false);
    throw Error(ErrorCode::kParse, "malformed xsd:boolean '" + text + "'");
  }
  if (type == kXsdDateTime) {
    std::int64_t ms = 0;
    if (!parse_timestamp_ms(text, &ms)) {
      throw Error(ErrorCode::kParse, "malformed xsd:dateTime '" + text + "'");
    }
    AttributeValue v(text);
    v.type_ = kXsdDateTime;
    return v;
  }
  *known_type = false;
  AttributeValue v(text);
  v.type_ = type;
  return v;
}

std::string AttributeValue::text() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return v ? "true" : "false";
        }
      },
      value_);
}

double AttributeValue::as_number() const {
  if (is_long()) return static_cast<double>(as_long());
  if (is_double()) return as_double();
  throw Error(ErrorCode::kInvalidArgument,
              "attribute value of type " + type_ + " is not numeric");
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

bool parse_double(std::string_view text, double* out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(*out);
}

std::string format_timestamp_ms(std::int64_t epoch_ms) {
  std::int64_t secs = epoch_ms / 1000;
  std::int64_t ms = epoch_ms % 1000;
  if (ms < 0) {
    ms += 1000;
    secs -= 1;
  }
  std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

bool parse_timestamp_ms(std::string_view text, std::int64_t* out) {
  // Strict canonical form only: YYYY-MM-DDTHH:MM:SS.mmmZ
  if (text.size() != 24) return false;
  auto digits = [&](std::size_t pos, std::size_t n, int* v) {
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + n, *v);
    return ec == std::errc() && ptr == text.data() + pos + n;
  };
  if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != '.' || text[23] != 'Z') {
    return false;
  }
  int year, mon, day, hour, min, sec, ms;
  if (!digits(0, 4, &year) || !digits(5, 2, &mon) || !digits(8, 2, &day) ||
      !digits(11, 2, &hour) || !digits(14, 2, &min) || !digits(17, 2, &sec) ||
      !digits(20, 3, &ms)) {
    return false;
  }
  if (mon < 1 || mon > 12 || day < 1 || day > 31 || hour > 23 || min > 59 ||
      sec > 60) {
    return false;
  }
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = mon - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = min;
  tm.tm_sec = sec;
  std::int64_t secs = timegm(&tm);
  *out = secs * 1000 + ms;
  return format_timestamp_ms(*out) == text;
}

}  // namespace provtrack
