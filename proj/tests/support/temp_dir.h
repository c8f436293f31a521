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

#ifndef PROVTRACK_TESTS_SUPPORT_TEMP_DIR_H_
#define PROVTRACK_TESTS_SUPPORT_TEMP_DIR_H_

#include <filesystem>
#include <string>

namespace provtrack::testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

// Writes an executable shell script and returns its path.
std::filesystem::path write_script(const std::filesystem::path& path,
                                   const std::string& body);

// A stand-in for Graphviz `dot -Tsvg in -o out`: emits a small SVG naming
// the input's node count, and fails on input lacking a closing brace.
std::filesystem::path write_fake_dot(const std::filesystem::path& dir);

}  // namespace provtrack::testing

#endif  // PROVTRACK_TESTS_SUPPORT_TEMP_DIR_H_
