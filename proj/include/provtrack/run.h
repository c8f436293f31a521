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

#ifndef PROVTRACK_RUN_H_
#define PROVTRACK_RUN_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provtrack/attribute_value.h"
#include "provtrack/clock.h"
#include "provtrack/context.h"
#include "provtrack/environment.h"
#include "provtrack/metric_series.h"
#include "provtrack/run_data.h"
#include "provtrack/telemetry.h"

namespace provtrack {

struct RunConfig {
  std::string user_namespace;
  std::string experiment_name = "default";
  std::filesystem::path save_dir = "prov";
  bool collect_all_processes = false;
  // Use kNeverSpill to keep every sample in memory until end_run().
  std::size_t save_after_n_logs = 100;
  std::optional<std::int64_t> rank;
};

// Collaborators a run draws on. Null members fall back to the system
// implementations; tests inject frozen clocks and scripted providers.
struct RunServices {
  std::shared_ptr<const Clock> clock;
  std::shared_ptr<TelemetryProvider> telemetry;
  std::shared_ptr<const EnvironmentProbe> environment;
  std::vector<std::string> environment_allowlist = default_environment_allowlist();
  // Layout tool used when end_run() is asked for an SVG.
  std::string dot_executable = "dot";
  // Receives warnings as they happen; stderr when unset.
  std::function<void(const std::string&)> warning_sink;
};

// File names inside a run directory.
std::string run_directory_name(std::string_view experiment, std::int64_t run_id);
std::string document_file_name(std::string_view experiment, std::int64_t run_id,
                               std::int64_t rank);

// 1 + the largest run id found among `save_dir/<experiment>_<id>`
// directories, or 0 when there are none.
std::int64_t next_run_id(const std::filesystem::path& save_dir,
                         std::string_view experiment);

struct EndRunResult {
  // Empty for runs that only discard (nonzero rank without
  // collect_all_processes).
  std::filesystem::path document;
  std::optional<std::filesystem::path> dot;
  std::optional<std::filesystem::path> svg;
};

// Live state of one experiment run. At most one handle per process is
// active at a time. All methods are safe to call from several threads;
// they are serialized internally. Every logging call on an ended handle
// throws Error(kIllegalState).
//
// A handle whose resolved rank is nonzero while collect_all_processes is
// false is a sink: it accepts and discards every call and never touches
// the filesystem.
class RunHandle {
 public:
  RunHandle(RunHandle&&) noexcept;
  RunHandle& operator=(RunHandle&&) noexcept;
  ~RunHandle();

  std::int64_t run_id() const;
  std::int64_t rank() const;
  const RunConfig& config() const;
  const std::filesystem::path& run_dir() const;
  bool active() const;
  bool is_sink() const;
  std::int64_t started_at_ms() const;
  std::vector<std::string> warnings() const;

  // Throws kDuplicateParam when `key` was already logged.
  void log_param(const std::string& key, const AttributeValue& value);

  // Appends to the (key, context) series, spilling its buffer to
  // `metrics/<context>_<key>.tsv` when it reaches save_after_n_logs.
  // Throws kInvalidArgument for non-finite values or negative steps.
  void log_metric(const std::string& key, double value, const Context& context,
                  std::int64_t step);

  // Copies the file under `artifacts/` (or `artifacts/<context>/`) and
  // records its size and SHA-256. Missing files throw kIo.
  ArtifactRecord log_artifact(const std::string& label,
                              const std::filesystem::path& path,
                              std::optional<Context> context = std::nullopt,
                              std::optional<std::int64_t> step = std::nullopt,
                              std::optional<std::int64_t> timestamp_ms = std::nullopt);

  // Records the final model. A second call throws kDuplicateParam. With
  // `log_as_artifact` the descriptor is also saved as a JSON artifact.
  void log_model(const std::string& label, const ModelDescriptor& descriptor,
                 bool log_as_artifact = false);

  // Writes `artifacts/<label>/<label>_step<step>`.
  ArtifactRecord save_model_version(const std::string& label,
                                    std::string_view blob,
                                    const Context& context, std::int64_t step,
                                    std::optional<std::int64_t> timestamp_ms = std::nullopt);

  // Throws kDuplicateParam on a repeated dataset label.
  void log_dataset(const DatasetDescriptor& descriptor);

  // Logs seconds elapsed since start_run() as a metric named `label`.
  void log_current_execution_time(const std::string& label,
                                  const Context& context, std::int64_t step);

  // One system sample fanned out to memory_usage, disk_usage (percent of
  // total), gpu_memory_usage (bytes), gpu_usage and cpu_usage (percent).
  // Provider failures are recorded as warnings and log nothing.
  void log_system_metrics(const Context& context, std::int64_t step);

  // One energy sample integrated into the run's accumulator, then logged
  // as cpu_power_W, gpu_power_W, energy_kWh and emissions_gCO2eq.
  void log_carbon_metrics(const Context& context, std::int64_t step);

  void set_carbon_intensity(double g_per_kwh);
  double carbon_intensity() const;
  double cumulative_energy_kwh() const;

  // Flushes every series, builds and writes
  // `provgraph_<experiment>_<run_id>_rank<rank>.json`, plus `.dot` with
  // `create_graph` and `.svg` with `create_svg` when the layout tool is
  // available (otherwise a warning). Deactivates the handle.
  EndRunResult end_run(bool create_graph = false, bool create_svg = false);

  std::optional<SeriesSummary> series_summary(const std::string& key,
                                              const Context& context) const;
  // Spilled and buffered counts of one series, for inspection.
  std::optional<std::pair<std::size_t, std::size_t>> series_counts(
      const std::string& key, const Context& context) const;
  std::size_t series_count() const;

  // Current state as plain data (series summaries reflect all samples
  // logged so far).
  RunSnapshot snapshot() const;

  struct State;  // opaque

 private:
  friend RunHandle start_run(const RunConfig& config, RunServices services);

  explicit RunHandle(std::unique_ptr<State> state);

  std::unique_ptr<State> state_;
};

// Starts a run. Throws kIllegalState when another run is active in this
// process, kInvalidArgument for a bad config, kIo when the run directory
// cannot be created.
RunHandle start_run(const RunConfig& config, RunServices services = {});

}  // namespace provtrack

#endif  // PROVTRACK_RUN_H_
