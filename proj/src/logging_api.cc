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

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "provtrack/digest.h"
#include "provtrack/error.h"
#include "provtrack/qualified_name.h"
#include "run_state.h"

namespace provtrack {

namespace {

constexpr std::string_view kPathKeep = "_.-";

ArtifactRecord discarded(const std::string& label) {
  ArtifactRecord record;
  record.label = label;
  return record;
}

RunHandle::State& live(const std::unique_ptr<RunHandle::State>& state) {
  if (!state) throw Error(ErrorCode::kIllegalState, "moved-from run handle");
  return *state;
}

void write_bytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::string descriptor_json(const ModelDescriptor& d) {
  nlohmann::ordered_json j;
  j["label"] = d.label;
  j["total_parameters"] = d.total_parameters;
  j["memory_bytes"] = d.memory_bytes;
  if (d.gradient_memory_bytes) j["gradient_memory_bytes"] = *d.gradient_memory_bytes;
  j["layers"] = nlohmann::ordered_json::array();
  for (const auto& l : d.layers) {
    j["layers"].push_back({{"name", l.name},
                           {"kind", l.kind},
                           {"input_shape", l.input_shape},
                           {"output_shape", l.output_shape},
                           {"dtype", l.dtype}});
  }
  return j.dump(2) + "\n";
}

}  // namespace

void RunHandle::State::append_sample(const std::string& key,
                                     const Context& context, std::int64_t step,
                                     double value) {
  if (key.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "metric key must not be empty");
  }
  MetricSample sample{step, now(), value};
  auto index_key = std::make_pair(key, context);
  auto it = series_index.find(index_key);
  if (it == series_index.end()) {
    // Validate before the series exists so a rejected first sample leaves
    // no trace.
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "metric '" + key + "' value must be finite");
    }
    if (step < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "metric '" + key + "' step must be nonnegative");
    }
    series.push_back(std::make_unique<MetricSeries>(
        key, context, run_dir / "metrics" / spill_file_name(key, context),
        config.save_after_n_logs));
    it = series_index.emplace(index_key, series.size() - 1).first;
  }
  series[it->second]->append(sample);
}

ArtifactRecord RunHandle::State::record_file(const std::string& label,
                                             const std::filesystem::path& absolute,
                                             std::optional<Context> context,
                                             std::optional<std::int64_t> step,
                                             std::int64_t timestamp_ms) {
  ArtifactRecord record;
  record.label = label;
  record.path = std::filesystem::relative(absolute, run_dir).generic_string();
  record.context = std::move(context);
  record.step = step;
  record.timestamp_ms = timestamp_ms;
  record.size_bytes = std::filesystem::file_size(absolute);
  record.content_hash = sha256_file(absolute);
  return record;
}

void RunHandle::log_param(const std::string& key, const AttributeValue& value) {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("log_param");
  if (s.sink) return;
  if (key.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "parameter key must not be empty");
  }
  if (!s.param_keys.insert(key).second) {
    throw Error(ErrorCode::kDuplicateParam,
                "parameter '" + key + "' was already logged");
  }
  s.params.emplace_back(key, value);
}

void RunHandle::log_metric(const std::string& key, double value,
                           const Context& context, std::int64_t step) {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("log_metric");
  if (s.sink) return;
  s.append_sample(key, context, step, value);
}

ArtifactRecord RunHandle::log_artifact(const std::string& label,
                                       const std::filesystem::path& path,
                                       std::optional<Context> context,
                                       std::optional<std::int64_t> step,
                                       std::optional<std::int64_t> timestamp_ms) {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("log_artifact");
  if (s.sink) return discarded(label);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kIo, "artifact " + path.string() + " is not a readable file");
  }
  std::filesystem::path dir = s.run_dir / "artifacts";
  if (context) dir /= percent_escape(context->str(), kPathKeep);
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string());

  // Repeated logs of the same file name keep every copy.
  std::filesystem::path name = path.filename();
  std::filesystem::path dest = dir / name;
  for (int n = 1; s.artifact_paths.count(dest.string()); ++n) {
    dest = dir / (name.stem().string() + "." + std::to_string(n) +
                  name.extension().string());
  }
  std::filesystem::copy_file(path, dest,
                             std::filesystem::copy_options::overwrite_existing, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot copy " + path.string() + ": " + ec.message());
  }
  s.artifact_paths.insert(dest.string());
  ArtifactRecord record = s.record_file(label.empty() ? name.string() : label, dest,
                                        std::move(context), step,
                                        timestamp_ms.value_or(s.now()));
  s.artifacts.push_back(record);
  return record;
}

void RunHandle::log_model(const std::string& label,
                          const ModelDescriptor& descriptor,
                          bool log_as_artifact) {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("log_model");
  if (s.sink) return;
  if (s.final_model) {
    throw Error(ErrorCode::kDuplicateParam,
                "final model '" + s.final_model->label + "' was already logged");
  }
  ModelDescriptor model = descriptor;
  if (!label.empty()) model.label = label;
  if (model.label.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "model label must not be empty");
  }
  if (log_as_artifact) {
    std::filesystem::path dest =
        s.run_dir / "artifacts" / (percent_escape(model.label, kPathKeep) + ".json");
    write_bytes(dest, descriptor_json(model));
    s.artifact_paths.insert(dest.string());
    s.artifacts.push_back(
        s.record_file(model.label, dest, std::nullopt, std::nullopt, s.now()));
  }
  s.final_model = std::move(model);
}

ArtifactRecord RunHandle::save_model_version(const std::string& label,
                                             std::string_view blob,
                                             const Context& context,
                                             std::int64_t step,
                                             std::optional<std::int64_t> timestamp_ms) {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("save_model_version");
  if (s.sink) return discarded(label);
  if (label.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "model version label must not be empty");
  }
  if (step < 0) {
    throw Error(ErrorCode::kInvalidArgument, "step must be nonnegative");
  }
  std::string escaped = percent_escape(label, kPathKeep);
  std::filesystem::path dir = s.run_dir / "artifacts" / escaped;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string());
  std::filesystem::path dest = dir / (escaped + "_step" + std::to_string(step));
  write_bytes(dest, blob);
  ArtifactRecord record =
      s.record_file(label, dest, context, step, timestamp_ms.value_or(s.now()));
  s.model_versions.push_back(record);
  return record;
}

void RunHandle::log_dataset(const DatasetDescriptor& descriptor) {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("log_dataset");
  if (s.sink) return;
  if (descriptor.label.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset label must not be empty");
  }
  for (const auto& d : s.datasets) {
    if (d.label == descriptor.label) {
      throw Error(ErrorCode::kDuplicateParam,
                  "dataset '" + descriptor.label + "' was already logged");
    }
  }
  s.datasets.push_back(descriptor);
}

void RunHandle::log_current_execution_time(const std::string& label,
                                           const Context& context,
                                           std::int64_t step) {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("log_current_execution_time");
  if (s.sink) return;
  double seconds = static_cast<double>(s.now() - s.started_at_ms) / 1000.0;
  s.append_sample(label, context, step, seconds);
}

std::optional<SeriesSummary> RunHandle::series_summary(const std::string& key,
                                                       const Context& context) const {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  auto it = s.series_index.find({key, context});
  if (it == s.series_index.end()) return std::nullopt;
  const MetricSeries& series = *s.series[it->second];
  SeriesSummary summary = series.summary();
  summary.series_file =
      (std::filesystem::path("metrics") / series.spill_path().filename()).generic_string();
  return summary;
}

std::optional<std::pair<std::size_t, std::size_t>> RunHandle::series_counts(
    const std::string& key, const Context& context) const {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  auto it = s.series_index.find({key, context});
  if (it == s.series_index.end()) return std::nullopt;
  const MetricSeries& series = *s.series[it->second];
  return std::make_pair(series.spilled_count(), series.buffered().size());
}

std::size_t RunHandle::series_count() const {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  return s.series.size();
}

}  // namespace provtrack
