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

#ifndef PROVTRACK_ENVIRONMENT_H_
#define PROVTRACK_ENVIRONMENT_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "provtrack/run_data.h"

namespace provtrack {

using EnvironmentVariables = std::map<std::string, std::string>;
using Dependencies = std::vector<std::pair<std::string, std::string>>;

// Read-only view of the process environment. The system implementation
// reads the real process; tests substitute FixedEnvironmentProbe.
class EnvironmentProbe {
 public:
  virtual ~EnvironmentProbe() = default;
  virtual EnvironmentVariables variables() const = 0;
  virtual std::string hostname() const = 0;
  virtual std::string os() const = 0;
  virtual std::int64_t pid() const = 0;
  virtual std::string command_line() const = 0;
  // nullopt when no dependency prober is available.
  virtual std::optional<Dependencies> dependencies() const = 0;
};

class SystemEnvironmentProbe : public EnvironmentProbe {
 public:
  using DependencyProber = std::function<Dependencies()>;

  // Without a prober, shared libraries mapped into the process are listed.
  SystemEnvironmentProbe();
  explicit SystemEnvironmentProbe(DependencyProber prober)
      : prober_(std::move(prober)) {}

  EnvironmentVariables variables() const override;
  std::string hostname() const override;
  std::string os() const override;
  std::int64_t pid() const override;
  std::string command_line() const override;
  std::optional<Dependencies> dependencies() const override;

 private:
  DependencyProber prober_;
};

struct FixedEnvironmentProbe : EnvironmentProbe {
  EnvironmentVariables vars;
  std::string host = "localhost";
  std::string os_tag = "linux";
  std::int64_t process_id = 1;
  std::string cmdline;
  std::optional<Dependencies> deps = Dependencies{};

  EnvironmentVariables variables() const override { return vars; }
  std::string hostname() const override { return host; }
  std::string os() const override { return os_tag; }
  std::int64_t pid() const override { return process_id; }
  std::string command_line() const override { return cmdline; }
  std::optional<Dependencies> dependencies() const override { return deps; }
};

// Variable-name prefixes kept by default: accelerator, threading, launcher,
// and interpreter settings that influence a training run.
const std::vector<std::string>& default_environment_allowlist();

// Launcher variables consulted by resolve_rank(), in precedence order.
const std::vector<std::string>& rank_variables();

// Explicit rank wins; otherwise the first defined launcher variable that
// parses as a nonnegative integer; otherwise 0. Unparsable variables are
// skipped with a message appended to `warnings`.
std::int64_t resolve_rank(std::optional<std::int64_t> explicit_rank,
                          const EnvironmentVariables& env,
                          std::vector<std::string>* warnings = nullptr);

// Keeps variables whose name starts with an allowlisted prefix and redacts
// values of names containing KEY, TOKEN, SECRET or PASSWORD. Never throws
// for probe gaps; a missing dependency prober sets dependencies_missing and
// appends a warning.
EnvironmentSnapshot capture_environment(
    const EnvironmentProbe& probe,
    const std::vector<std::string>& allowlist = default_environment_allowlist(),
    std::vector<std::string>* warnings = nullptr);

inline constexpr std::string_view kRedacted = "[redacted]";

}  // namespace provtrack

#endif  // PROVTRACK_ENVIRONMENT_H_
