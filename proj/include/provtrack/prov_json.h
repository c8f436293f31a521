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

#ifndef PROVTRACK_PROV_JSON_H_
#define PROVTRACK_PROV_JSON_H_

#include <string>
#include <string_view>
#include <vector>

#include "provtrack/error.h"
#include "provtrack/prov_document.h"

namespace provtrack {

struct Issue {
  std::string code;
  std::string message;
  std::string id;

  friend bool operator==(const Issue&, const Issue&) = default;
};

// Error codes: "dangling-reference", "undeclared-prefix", "kind-mismatch",
// "duplicate-attribute", "reserved-attribute", "invalid-time".
// Warning codes: "empty-document", "activity-without-association".
struct ValidationReport {
  std::vector<Issue> errors;
  std::vector<Issue> warnings;

  bool ok() const { return errors.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const ProvDocument& doc);

class InvalidDocumentError : public Error {
 public:
  explicit InvalidDocumentError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Canonical PROV-JSON: sections in fixed order, ids sorted, every attribute
// value as a {"$", "type"} object, 2-space indentation, trailing newline.
// Throws InvalidDocumentError when validate() reports errors.
std::string serialize(const ProvDocument& doc);

// Throws ParseError on malformed JSON, Error(kDuplicateRecord) on repeated
// record or relation ids, Error(kParse) on structurally unusable content.
// Non-fatal findings (unknown datatype tags, collapsed duplicate attribute
// keys, unsupported value shapes) are appended to `warnings` when given.
ProvDocument parse(std::string_view text, std::vector<Issue>* warnings = nullptr);

ProvDocument read_document(const std::string& path,
                           std::vector<Issue>* warnings = nullptr);
void write_document(const ProvDocument& doc, const std::string& path);

}  // namespace provtrack

#endif  // PROVTRACK_PROV_JSON_H_
