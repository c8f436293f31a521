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

#ifndef PROVTRACK_SRC_RUN_STATE_H_
#define PROVTRACK_SRC_RUN_STATE_H_

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "provtrack/run.h"

namespace provtrack {

struct RunHandle::State {
  mutable std::mutex mu;

  RunConfig config;
  RunServices services;
  std::int64_t run_id = 0;
  std::int64_t rank = 0;
  std::filesystem::path run_dir;
  bool active = true;
  bool sink = false;
  std::int64_t started_at_ms = 0;
  std::optional<std::int64_t> ended_at_ms;

  std::vector<std::pair<std::string, AttributeValue>> params;
  std::set<std::string> param_keys;
  std::vector<DatasetDescriptor> datasets;
  std::map<std::pair<std::string, Context>, std::size_t> series_index;
  std::vector<std::unique_ptr<MetricSeries>> series;  // creation order
  std::vector<ArtifactRecord> artifacts;
  std::vector<ArtifactRecord> model_versions;
  std::optional<ModelDescriptor> final_model;
  std::set<std::string> artifact_paths;
  EnvironmentSnapshot environment;
  EnergyAccumulator energy;
  std::vector<std::string> warnings;

  std::int64_t now() const { return services.clock->now_ms(); }

  void warn(std::string message);

  // Callers hold `mu` for all of the following.
  void require_active(const char* operation) const;
  void append_sample(const std::string& key, const Context& context,
                     std::int64_t step, double value);
  // Records a file already placed inside the run directory.
  ArtifactRecord record_file(const std::string& label,
                             const std::filesystem::path& absolute,
                             std::optional<Context> context,
                             std::optional<std::int64_t> step,
                             std::int64_t timestamp_ms);
  RunSnapshot snapshot() const;
  void release();  // gives up the process-wide active-run slot
};

}  // namespace provtrack

#endif  // PROVTRACK_SRC_RUN_STATE_H_
