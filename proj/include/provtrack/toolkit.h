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

#ifndef PROVTRACK_TOOLKIT_H_
#define PROVTRACK_TOOLKIT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "provtrack/attribute_value.h"
#include "provtrack/context.h"
#include "provtrack/metric_series.h"
#include "provtrack/prov_document.h"

namespace provtrack {

// One merge input. `name` only shows up in error messages and in the
// summary entity's prov4ml:source attribute.
struct MergeInput {
  std::string name;
  ProvDocument document;
};

// Unions the inputs into one document and links them with a
// prov:Collection entity. Each input gets a prov4ml:RunSummary entity
// generated by its run activity, and the collection has one hadMember edge
// per summary. Prefixes of input k >= 1 that clash with an earlier binding
// are renamed `<prefix>_r<k>`.
//
// `collection_id` may be a bare local name (placed in the `user` prefix)
// or `prefix:local`. By default it is `<experiment>_run<id>_collection`
// taken from the first input's run activity. Throws kInvalidArgument when
// the id already occurs in an input or an input has no identifiable run
// activity. The output carries no timestamps of its own, so identical
// inputs always merge to identical bytes.
ProvDocument merge_documents(const std::vector<MergeInput>& inputs,
                             const std::optional<std::string>& collection_id = {});

// Reads, parses and validates every file first. Parse errors name the file;
// inputs with validation errors throw kInvalidDocument.
ProvDocument merge_files(const std::vector<std::filesystem::path>& paths,
                         const std::optional<std::string>& collection_id = {});

struct ParamChange {
  std::string key;
  AttributeValue left;
  AttributeValue right;
  friend bool operator==(const ParamChange&, const ParamChange&) = default;
};

// Summary fields compared by diff.
struct MetricStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double last = 0.0;
  friend bool operator==(const MetricStats&, const MetricStats&) = default;
};

struct MetricDiff {
  std::string key;
  Context context = Context::training();
  std::optional<MetricStats> left;
  std::optional<MetricStats> right;
  // right.last - left.last, when both sides exist.
  std::optional<double> delta_of_last;
  // Only set by full-series comparison: summaries agree but samples differ.
  bool samples_differ = false;
  friend bool operator==(const MetricDiff&, const MetricDiff&) = default;
};

struct RunDiff {
  std::vector<std::string> params_added;    // only in right
  std::vector<std::string> params_removed;  // only in left
  std::vector<ParamChange> params_changed;
  std::vector<MetricDiff> metrics;
  std::vector<std::string> artifacts_only_left;
  std::vector<std::string> artifacts_only_right;
  std::vector<std::string> artifacts_hash_mismatch;

  bool empty() const;
  friend bool operator==(const RunDiff&, const RunDiff&) = default;
};

// Run contents as seen by diff, read back from a run's PROV-JSON document.
struct RunView {
  std::filesystem::path run_dir;
  std::vector<std::pair<std::string, AttributeValue>> params;  // sorted by key
  std::vector<std::pair<std::pair<std::string, Context>, MetricStats>> metrics;
  std::vector<std::pair<std::string, std::string>> artifacts;  // path -> hash
};

// The lowest-rank `provgraph_*.json` in `run_dir`. Throws kNotFound when
// the directory or the document is missing.
std::filesystem::path find_run_document(const std::filesystem::path& run_dir);

RunView load_run_view(const std::filesystem::path& run_dir);

RunDiff diff_views(const RunView& left, const RunView& right,
                   bool full_series = false);
RunDiff diff_runs(const std::filesystem::path& left,
                  const std::filesystem::path& right, bool full_series = false);

std::string render_diff_text(const RunDiff& diff);
std::string render_diff_json(const RunDiff& diff);

}  // namespace provtrack

#endif  // PROVTRACK_TOOLKIT_H_
