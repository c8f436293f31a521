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

#include "provtrack/context.h"

#include "provtrack/error.h"

namespace provtrack {

Context Context::custom(std::string_view label) {
  if (label.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "context label must not be empty");
  }
  if (label == "training") return training();
  if (label == "validation") return validation();
  if (label == "evaluation") return evaluation();
  return Context(Kind::kCustom, std::string(label));
}

}  // namespace provtrack
