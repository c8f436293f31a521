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

#ifndef PROVTRACK_QUALIFIED_NAME_H_
#define PROVTRACK_QUALIFIED_NAME_H_

#include <compare>
#include <string>
#include <string_view>

namespace provtrack {

// A `prefix:local` name. The local part is stored in escaped form: any byte
// outside [A-Za-z0-9_.:-] is written as %XX (uppercase hex), so arbitrary
// user strings (metric keys, labels) map onto legal identifiers.
class QualifiedName {
 public:
  QualifiedName() = default;

  // Escapes `raw_local`. Throws kInvalidArgument on an empty or malformed
  // prefix, or an empty local part.
  QualifiedName(std::string_view prefix, std::string_view raw_local);

  // Parses a rendered `prefix:local` string. The local part must already be
  // in escaped form.
  static QualifiedName parse(std::string_view rendered);

  const std::string& prefix() const { return prefix_; }
  const std::string& local() const { return local_; }
  // Local part with escapes decoded.
  std::string unescaped_local() const;
  std::string str() const { return prefix_ + ":" + local_; }

  QualifiedName with_prefix(std::string_view prefix) const;

  bool empty() const { return prefix_.empty(); }

  friend auto operator<=>(const QualifiedName&, const QualifiedName&) = default;

 private:
  std::string prefix_;
  std::string local_;
};

bool is_valid_prefix(std::string_view prefix);

// Percent-escapes every byte of `raw` not in [A-Za-z0-9] or `keep`.
std::string percent_escape(std::string_view raw, std::string_view keep);
std::string percent_unescape(std::string_view escaped);

}  // namespace provtrack

#endif  // PROVTRACK_QUALIFIED_NAME_H_
