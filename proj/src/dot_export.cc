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

#include <fcntl.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <tuple>
#include <vector>

#include "provtrack/error.h"
#include "provtrack/graph_export.h"

extern char** environ;

namespace provtrack {

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string node_id(RecordKind kind, const QualifiedName& id) {
  return dot_quote(std::string(record_kind_name(kind)) + "/" + id.str());
}

std::string_view shape_for(RecordKind kind) {
  switch (kind) {
    case RecordKind::kEntity:
      return "ellipse";
    case RecordKind::kActivity:
      return "box";
    case RecordKind::kAgent:
      return "house";
  }
  return "ellipse";
}

std::optional<std::string> find_executable(const std::string& name) {
  auto runnable = [](const std::string& path) {
    struct stat st {};
    return stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) &&
           access(path.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string::npos) {
    if (runnable(name)) return name;
    return std::nullopt;
  }
  const char* path_env = std::getenv("PATH");
  if (!path_env) return std::nullopt;
  std::stringstream dirs(path_env);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) dir = ".";
    std::string candidate = dir + "/" + name;
    if (runnable(candidate)) return candidate;
  }
  return std::nullopt;
}

// Scratch file removed on scope exit.
class TempFile {
 public:
  explicit TempFile(const char* suffix) {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "provtrack-XXXXXX").string() +
        suffix;
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    int fd = mkstemps(buf.data(), static_cast<int>(std::strlen(suffix)));
    if (fd < 0) throw Error(ErrorCode::kIo, "cannot create temporary file");
    close(fd);
    path_ = buf.data();
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

  std::string read() const {
    std::ifstream in(path_, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

 private:
  std::string path_;
};

}  // namespace

std::string to_dot(const ProvDocument& doc) {
  std::vector<const ProvRecord*> records;
  for (const auto& r : doc.records()) records.push_back(&r);
  std::sort(records.begin(), records.end(), [](auto* a, auto* b) {
    return std::make_tuple(a->id.str(), a->kind) <
           std::make_tuple(b->id.str(), b->kind);
  });
  std::vector<const Relation*> relations;
  for (const auto& r : doc.relations()) relations.push_back(&r);
  std::sort(relations.begin(), relations.end(), [](auto* a, auto* b) {
    return std::make_tuple(a->id.str(), a->kind) <
           std::make_tuple(b->id.str(), b->kind);
  });

  std::ostringstream out;
  out << "digraph provenance {\n";
  out << "  rankdir=BT;\n";
  for (const ProvRecord* r : records) {
    out << "  " << node_id(r->kind, r->id) << " [label=" << dot_quote(r->id.str())
        << ", shape=" << shape_for(r->kind) << "];\n";
  }
  for (const Relation* r : relations) {
    out << "  " << node_id(relation_subject_kind(r->kind), r->subject) << " -> "
        << node_id(relation_object_kind(r->kind), r->object)
        << " [label=" << dot_quote(relation_kind_name(r->kind)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::optional<std::string> to_svg(std::string_view dot_text,
                                  const std::string& executable) {
  auto tool = find_executable(executable);
  if (!tool) return std::nullopt;

  TempFile input(".dot");
  TempFile output(".svg");
  TempFile errors(".err");
  {
    std::ofstream in(input.path(), std::ios::binary);
    in.write(dot_text.data(), static_cast<std::streamsize>(dot_text.size()));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null",
                                   O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO,
                                   errors.path().c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0600);
  std::vector<std::string> args = {*tool, "-Tsvg", input.path(), "-o",
                                   output.path()};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  int rc = posix_spawn(&pid, tool->c_str(), &actions, nullptr, argv.data(),
                       environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) return std::nullopt;

  int status = 0;
  if (waitpid(pid, &status, 0) < 0) {
    throw Error(ErrorCode::kExport, "lost track of " + *tool);
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw Error(ErrorCode::kExport,
                *tool + " failed: " + errors.read());
  }
  return output.read();
}

}  // namespace provtrack
