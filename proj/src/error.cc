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

#include "provtrack/error.h"

namespace provtrack {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDuplicateRecord: return "duplicate-record";
    case ErrorCode::kDuplicateParam: return "duplicate-param";
    case ErrorCode::kIllegalState: return "illegal-state";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInvalidDocument: return "invalid-document";
    case ErrorCode::kExport: return "export";
    case ErrorCode::kToolUnavailable: return "tool-unavailable";
  }
  return "unknown";
}

}  // namespace provtrack
