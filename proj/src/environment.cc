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

#include "provtrack/environment.h"

#include <sys/utsname.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

extern char** environ;

namespace provtrack {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool looks_secret(std::string_view name) {
  std::string n = upper(name);
  for (std::string_view marker : {"KEY", "TOKEN", "SECRET", "PASSWORD"}) {
    if (n.find(marker) != std::string::npos) return true;
  }
  return false;
}

// libfoo.so.1.2.3 -> ("libfoo", "1.2.3"); libfoo-2.1.so -> ("libfoo-2.1", "")
std::pair<std::string, std::string> split_soname(const std::string& file) {
  auto pos = file.find(".so");
  if (pos == std::string::npos) return {file, ""};
  std::string name = file.substr(0, pos);
  std::string rest = file.substr(pos + 3);
  if (!rest.empty() && rest.front() == '.') rest.erase(0, 1);
  return {name, rest};
}

Dependencies mapped_shared_libraries() {
  std::ifstream maps("/proc/self/maps");
  std::set<std::pair<std::string, std::string>> found;
  std::string line;
  while (std::getline(maps, line)) {
    auto slash = line.rfind('/');
    if (slash == std::string::npos) continue;
    std::string file = line.substr(slash + 1);
    if (file.find(".so") == std::string::npos) continue;
    found.insert(split_soname(file));
  }
  return Dependencies(found.begin(), found.end());
}

}  // namespace

SystemEnvironmentProbe::SystemEnvironmentProbe()
    : prober_(mapped_shared_libraries) {}

EnvironmentVariables SystemEnvironmentProbe::variables() const {
  EnvironmentVariables vars;
  for (char** e = environ; e && *e; ++e) {
    std::string_view entry(*e);
    auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    vars.emplace(entry.substr(0, eq), entry.substr(eq + 1));
  }
  return vars;
}

std::string SystemEnvironmentProbe::hostname() const {
  char buf[256] = {};
  if (gethostname(buf, sizeof(buf) - 1) != 0) return "";
  return buf;
}

std::string SystemEnvironmentProbe::os() const {
  utsname info{};
  if (uname(&info) != 0) return "unknown";
  return std::string(info.sysname) + " " + info.release + " " + info.machine;
}

std::int64_t SystemEnvironmentProbe::pid() const { return getpid(); }

std::string SystemEnvironmentProbe::command_line() const {
  std::ifstream in("/proc/self/cmdline", std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string raw = buf.str();
  while (!raw.empty() && raw.back() == '\0') raw.pop_back();
  std::replace(raw.begin(), raw.end(), '\0', ' ');
  return raw;
}

std::optional<Dependencies> SystemEnvironmentProbe::dependencies() const {
  if (!prober_) return std::nullopt;
  return prober_();
}

const std::vector<std::string>& default_environment_allowlist() {
  static const std::vector<std::string> kAllowlist = {
      "CUDA",   "NVIDIA",    "NCCL_",    "OMP_",     "MKL_",
      "OPENBLAS_", "SLURM_", "OMPI_",    "PMI_",     "RANK",
      "LOCAL_RANK", "WORLD_SIZE", "MASTER_ADDR", "MASTER_PORT",
      "PYTHON", "CONDA_",    "VIRTUAL_ENV", "TORCH", "HF_",
      "PATH",   "LD_LIBRARY_PATH", "HOSTNAME", "USER", "LANG"};
  return kAllowlist;
}

const std::vector<std::string>& rank_variables() {
  static const std::vector<std::string> kVars = {"SLURM_PROCID",
                                                 "OMPI_COMM_WORLD_RANK",
                                                 "RANK", "LOCAL_RANK"};
  return kVars;
}

std::int64_t resolve_rank(std::optional<std::int64_t> explicit_rank,
                          const EnvironmentVariables& env,
                          std::vector<std::string>* warnings) {
  if (explicit_rank) return *explicit_rank;
  for (const auto& name : rank_variables()) {
    auto it = env.find(name);
    if (it == env.end()) continue;
    const std::string& text = it->second;
    std::int64_t value = -1;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty() &&
        value >= 0) {
      return value;
    }
    if (warnings) {
      warnings->push_back("ignoring unparsable " + name + "='" + text + "'");
    }
  }
  return 0;
}

EnvironmentSnapshot capture_environment(const EnvironmentProbe& probe,
                                        const std::vector<std::string>& allowlist,
                                        std::vector<std::string>* warnings) {
  EnvironmentSnapshot snap;
  for (const auto& [name, value] : probe.variables()) {
    bool allowed = std::any_of(allowlist.begin(), allowlist.end(),
                               [&](const std::string& prefix) {
                                 return name.rfind(prefix, 0) == 0;
                               });
    if (!allowed) continue;
    snap.variables.emplace_back(
        name, looks_secret(name) ? std::string(kRedacted) : value);
  }
  std::sort(snap.variables.begin(), snap.variables.end());
  snap.hostname = probe.hostname();
  snap.os = probe.os();
  snap.pid = probe.pid();
  snap.command_line = probe.command_line();
  if (auto deps = probe.dependencies()) {
    snap.dependencies = std::move(*deps);
  } else {
    snap.dependencies_missing = true;
    if (warnings) {
      warnings->push_back("no dependency prober available; "
                          "dependency list left empty");
    }
  }
  return snap;
}

}  // namespace provtrack
