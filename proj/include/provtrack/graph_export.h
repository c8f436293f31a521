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

#ifndef PROVTRACK_GRAPH_EXPORT_H_
#define PROVTRACK_GRAPH_EXPORT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "provtrack/context.h"
#include "provtrack/metric_series.h"
#include "provtrack/prov_document.h"
#include "provtrack/run_data.h"

namespace provtrack {

// Vocabulary prefix for attributes and types this library emits.
inline constexpr std::string_view kVocabPrefix = "prov4ml";
inline constexpr std::string_view kVocabIri = "urn:prov4ml:";

// `prov:type` values marking the role of each record.
namespace record_types {
inline constexpr const char* kRun = "prov4ml:Run";
inline constexpr const char* kParameter = "prov4ml:Parameter";
inline constexpr const char* kDataset = "prov4ml:Dataset";
inline constexpr const char* kMetric = "prov4ml:Metric";
inline constexpr const char* kArtifact = "prov4ml:Artifact";
inline constexpr const char* kModelVersion = "prov4ml:ModelVersion";
inline constexpr const char* kModel = "prov4ml:Model";
inline constexpr const char* kEnvironment = "prov4ml:Environment";
inline constexpr const char* kRunSummary = "prov4ml:RunSummary";
inline constexpr const char* kCollection = "prov:Collection";
}  // namespace record_types

// Maps a finished run onto a PROV document:
//   run                  -> activity, associated with the user agent
//   params, datasets,
//   environment          -> entities used by the run
//   metric summaries,
//   artifacts, model
//   versions, final model -> entities generated by the run
//   successive versions of one label form a wasDerivedFrom chain, and the
//   final model derives from the most recently saved version.
// The result always validates and is a pure function of `run`.
ProvDocument build_provenance(const RunSnapshot& run);

// Rendered id of the run activity build_provenance() creates.
QualifiedName run_activity_id(const RunSnapshot& run);

// One node per record (ellipse entity, box activity, house agent) and one
// labelled edge per relation, each in sorted id order.
std::string to_dot(const ProvDocument& doc);

// Renders DOT text with `dot -Tsvg`. Returns nullopt when the executable
// cannot be found; throws Error(kExport) with the tool's stderr when it
// fails. `executable` is looked up on PATH unless it contains a slash.
std::optional<std::string> to_svg(std::string_view dot_text,
                                  const std::string& executable = "dot");

std::filesystem::path series_path(const std::filesystem::path& run_dir,
                                  std::string_view key, const Context& context);

// Writes `step,timestamp,value` rows in log order. Throws kNotFound for an
// unknown series. Without `output` the CSV lands next to the spill file.
std::filesystem::path export_metric_csv(
    const std::filesystem::path& run_dir, std::string_view key,
    const Context& context,
    std::optional<std::filesystem::path> output = std::nullopt);

struct PlotSeries {
  std::string name;
  std::vector<MetricSample> samples;
};

// Self-contained SVG line chart on a fixed 800x500 viewBox, one polyline
// per series against step. Exactly two series with disjoint value ranges
// get independent left and right y-axes; otherwise all share one.
// Throws kInvalidArgument for an empty list.
std::string render_plot_svg(const std::vector<PlotSeries>& series);

std::filesystem::path plot_metrics(
    const std::filesystem::path& run_dir,
    const std::vector<std::pair<std::string, Context>>& series_list,
    const std::filesystem::path& output);

}  // namespace provtrack

#endif  // PROVTRACK_GRAPH_EXPORT_H_
