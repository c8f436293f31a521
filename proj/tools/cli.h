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

#ifndef PROVTRACK_TOOLS_CLI_H_
#define PROVTRACK_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace provtrack::cli {

// Exit statuses shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kFindings = 1;   // differences, validation errors, bad input
inline constexpr int kIoError = 2;    // unreadable or malformed files, usage
inline constexpr int kNoTool = 3;     // external layout tool missing

// Runs `provtrack <args...>` in-process. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace provtrack::cli

#endif  // PROVTRACK_TOOLS_CLI_H_
