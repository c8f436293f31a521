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

#ifndef PROVTRACK_ATTRIBUTE_VALUE_H_
#define PROVTRACK_ATTRIBUTE_VALUE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace provtrack {

inline constexpr std::string_view kXsdString = "xsd:string";
inline constexpr std::string_view kXsdLong = "xsd:long";
inline constexpr std::string_view kXsdDouble = "xsd:double";
inline constexpr std::string_view kXsdBoolean = "xsd:boolean";
inline constexpr std::string_view kXsdDateTime = "xsd:dateTime";

// A typed PROV attribute value. The datatype tag is inferred from the
// variant unless given explicitly; the only explicit override accepted from
// callers is xsd:dateTime on a string. Unknown tags only arise from parsing
// foreign documents and are kept verbatim on a string value.
class AttributeValue {
 public:
  using Variant = std::variant<std::string, std::int64_t, double, bool>;

  AttributeValue() : AttributeValue(std::string()) {}
  AttributeValue(std::string value);
  AttributeValue(const char* value) : AttributeValue(std::string(value)) {}
  AttributeValue(std::int64_t value);
  AttributeValue(int value) : AttributeValue(std::int64_t{value}) {}
  // Throws kInvalidArgument for NaN or infinities.
  AttributeValue(double value);
  AttributeValue(bool value);

  static AttributeValue date_time(std::string iso8601);
  static AttributeValue date_time_ms(std::int64_t epoch_ms);

  // Rebuilds a value from its serialized `$` text and datatype tag. Returns
  // false in `known_type` when the tag is not one of the xsd tags above; the
  // value is then kept as a string carrying the original tag.
  static AttributeValue from_typed_text(const std::string& text,
                                        const std::string& type,
                                        bool* known_type);

  const Variant& value() const { return value_; }
  const std::string& type() const { return type_; }

  // Text form used in the `$` field of PROV-JSON typed values.
  std::string text() const;

  bool is_string() const { return std::holds_alternative<std::string>(value_); }
  bool is_long() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_double() const { return std::holds_alternative<double>(value_); }
  bool is_bool() const { return std::holds_alternative<bool>(value_); }

  const std::string& as_string() const { return std::get<std::string>(value_); }
  std::int64_t as_long() const { return std::get<std::int64_t>(value_); }
  double as_double() const { return std::get<double>(value_); }
  bool as_bool() const { return std::get<bool>(value_); }
  // Numeric view of long or double values; throws otherwise.
  double as_number() const;

  friend bool operator==(const AttributeValue&, const AttributeValue&) = default;

 private:
  Variant value_;
  std::string type_;
};

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
bool parse_double(std::string_view text, double* out);

// UTC epoch milliseconds <-> `YYYY-MM-DDTHH:MM:SS.mmmZ`.
std::string format_timestamp_ms(std::int64_t epoch_ms);
bool parse_timestamp_ms(std::string_view text, std::int64_t* out);

}  // namespace provtrack

#endif  // PROVTRACK_ATTRIBUTE_VALUE_H_
