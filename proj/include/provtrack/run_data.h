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

#ifndef PROVTRACK_RUN_DATA_H_
#define PROVTRACK_RUN_DATA_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "provtrack/attribute_value.h"
#include "provtrack/context.h"
#include "provtrack/metric_series.h"

namespace provtrack {

struct ArtifactRecord {
  std::string label;
  // Copy inside the run directory, relative to it.
  std::string path;
  std::optional<Context> context;
  std::optional<std::int64_t> step;
  std::int64_t timestamp_ms = 0;
  std::uint64_t size_bytes = 0;
  // Lowercase hex SHA-256 of the file bytes.
  std::string content_hash;

  friend bool operator==(const ArtifactRecord&, const ArtifactRecord&) = default;
};

struct LayerInfo {
  std::string name;
  std::string kind;
  std::vector<std::int64_t> input_shape;
  std::vector<std::int64_t> output_shape;
  std::string dtype;

  friend bool operator==(const LayerInfo&, const LayerInfo&) = default;
};

struct ModelDescriptor {
  std::string label;
  std::uint64_t total_parameters = 0;
  std::uint64_t memory_bytes = 0;
  std::optional<std::uint64_t> gradient_memory_bytes;
  std::vector<LayerInfo> layers;

  friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;
};

struct DatasetDescriptor {
  std::string label;
  std::optional<std::uint64_t> num_samples;
  std::optional<std::uint64_t> batch_size;
  std::optional<std::uint64_t> num_batches;
  std::optional<std::string> source;

  friend bool operator==(const DatasetDescriptor&, const DatasetDescriptor&) = default;
};

struct EnvironmentSnapshot {
  // Sorted by name; secret-looking values already redacted.
  std::vector<std::pair<std::string, std::string>> variables;
  // (name, version) pairs from the dependency prober.
  std::vector<std::pair<std::string, std::string>> dependencies;
  std::string hostname;
  std::string os;
  std::int64_t pid = 0;
  std::string command_line;
  // Set when no dependency prober was available.
  bool dependencies_missing = false;

  friend bool operator==(const EnvironmentSnapshot&, const EnvironmentSnapshot&) = default;
};

// Everything a finished run contributes to its provenance document.
struct RunSnapshot {
  std::string user_namespace;
  std::string experiment_name;
  std::int64_t run_id = 0;
  std::int64_t rank = 0;
  std::int64_t started_at_ms = 0;
  std::optional<std::int64_t> ended_at_ms;
  std::vector<std::pair<std::string, AttributeValue>> params;
  std::vector<DatasetDescriptor> datasets;
  std::vector<SeriesSummary> series;
  std::vector<ArtifactRecord> artifacts;
  // Log order; successive entries with the same label form a chain.
  std::vector<ArtifactRecord> model_versions;
  std::optional<ModelDescriptor> final_model;
  EnvironmentSnapshot environment;
};

}  // namespace provtrack

#endif  // PROVTRACK_RUN_DATA_H_
