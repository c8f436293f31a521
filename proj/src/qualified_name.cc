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

#include "provtrack/qualified_name.h"

#include <cctype>

#include "provtrack/error.h"

namespace provtrack {

namespace {

constexpr std::string_view kLocalKeep = "_.:-";
constexpr char kHex[] = "0123456789ABCDEF";

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

bool is_escaped_local(std::string_view local) {
  if (local.empty()) return false;
  for (std::size_t i = 0; i < local.size(); ++i) {
    char c = local[i];
    if (is_alnum(c) || kLocalKeep.find(c) != std::string_view::npos) continue;
    if (c == '%' && i + 2 < local.size() && hex_value(local[i + 1]) >= 0 &&
        hex_value(local[i + 2]) >= 0) {
      i += 2;
      continue;
    }
    return false;
  }
  return true;
}

}  // namespace

bool is_valid_prefix(std::string_view prefix) {
  if (prefix.empty()) return false;
  char first = prefix.front();
  if (!((first >= 'a' && first <= 'z') || (first >= 'A' && first <= 'Z')))
    return false;
  // NCName subset: letters first, then letters, digits, '_', '-' or '.'.
  for (char c : prefix) {
    if (!is_alnum(c) && c != '_' && c != '-' && c != '.') return false;
  }
  return true;
}

std::string percent_escape(std::string_view raw, std::string_view keep) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (is_alnum(c) || keep.find(c) != std::string_view::npos) {
      out.push_back(c);
    } else {
      auto byte = static_cast<unsigned char>(c);
      out.push_back('%');
      out.push_back(kHex[byte >> 4]);
      out.push_back(kHex[byte & 0xF]);
    }
  }
  return out;
}

std::string percent_unescape(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] == '%' && i + 2 < escaped.size()) {
      int hi = hex_value(escaped[i + 1]);
      int lo = hex_value(escaped[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(escaped[i]);
  }
  return out;
}

QualifiedName::QualifiedName(std::string_view prefix,
                             std::string_view raw_local) {
  if (!is_valid_prefix(prefix)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid namespace prefix '" + std::string(prefix) + "'");
  }
  if (raw_local.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "empty local name for prefix '" + std::string(prefix) + "'");
  }
  prefix_ = prefix;
  local_ = percent_escape(raw_local, kLocalKeep);
}

QualifiedName QualifiedName::parse(std::string_view rendered) {
  auto colon = rendered.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "qualified name without prefix: '" + std::string(rendered) +
                    "'");
  }
  std::string_view prefix = rendered.substr(0, colon);
  std::string_view local = rendered.substr(colon + 1);
  if (!is_valid_prefix(prefix) || !is_escaped_local(local)) {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed qualified name '" + std::string(rendered) + "'");
  }
  QualifiedName name;
  name.prefix_ = prefix;
  name.local_ = local;
  return name;
}

std::string QualifiedName::unescaped_local() const {
  return percent_unescape(local_);
}

QualifiedName QualifiedName::with_prefix(std::string_view prefix) const {
  if (!is_valid_prefix(prefix)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid namespace prefix '" + std::string(prefix) + "'");
  }
  QualifiedName name = *this;
  name.prefix_ = prefix;
  return name;
}

}  // namespace provtrack
