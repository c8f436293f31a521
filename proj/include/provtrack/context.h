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

#ifndef PROVTRACK_CONTEXT_H_
#define PROVTRACK_CONTEXT_H_

#include <compare>
#include <string>
#include <string_view>

namespace provtrack {

// Phase label partitioning logged data. The three built-in phases have the
// canonical text forms "training", "validation" and "evaluation"; any other
// non-empty label is a custom context and keeps its case.
class Context {
 public:
  enum class Kind { kTraining, kValidation, kEvaluation, kCustom };

  static Context training() { return Context(Kind::kTraining, "training"); }
  static Context validation() { return Context(Kind::kValidation, "validation"); }
  static Context evaluation() { return Context(Kind::kEvaluation, "evaluation"); }
  // Throws kInvalidArgument on an empty label. A label equal to a built-in
  // canonical form yields that built-in context.
  static Context custom(std::string_view label);
  static Context from_string(std::string_view text) { return custom(text); }

  Kind kind() const { return kind_; }
  const std::string& str() const { return label_; }

  friend bool operator==(const Context& a, const Context& b) {
    return a.label_ == b.label_;
  }
  friend auto operator<=>(const Context& a, const Context& b) {
    return a.label_ <=> b.label_;
  }

 private:
  Context(Kind kind, std::string label) : kind_(kind), label_(std::move(label)) {}

  Kind kind_;
  std::string label_;
};

}  // namespace provtrack

#endif  // PROVTRACK_CONTEXT_H_
