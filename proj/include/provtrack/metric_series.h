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

#ifndef PROVTRACK_METRIC_SERIES_H_
#define PROVTRACK_METRIC_SERIES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "provtrack/context.h"

namespace provtrack {

inline constexpr std::size_t kNeverSpill = std::numeric_limits<std::size_t>::max();

struct MetricSample {
  std::int64_t step = 0;
  std::int64_t timestamp_ms = 0;
  double value = 0.0;

  friend bool operator==(const MetricSample&, const MetricSample&) = default;
};

struct SeriesSummary {
  std::string key;
  Context context = Context::training();
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double last = 0.0;
  // Spill file, relative to the run directory.
  std::string series_file;

  friend bool operator==(const SeriesSummary&, const SeriesSummary&) = default;
};

// Spill file name for a (key, context) pair: `<context>_<key>.tsv`. The
// context is escaped including '_' so the first underscore always separates
// the two parts.
std::string spill_file_name(std::string_view key, const Context& context);

// One TSV line: `step\ttimestamp\tvalue\n`.
std::string format_sample_line(const MetricSample& sample);

// Reads a spill file back in file order. Throws kNotFound if it does not
// exist and kParse on a malformed line.
std::vector<MetricSample> read_spill_file(const std::filesystem::path& path);

// Append-only samples for one (key, context) pair. Samples are buffered in
// memory and appended to the spill file whenever the buffer reaches the
// threshold, so after every append() the buffer holds fewer than
// `threshold` samples. Not internally synchronized; the owning run
// serializes access.
class MetricSeries {
 public:
  MetricSeries(std::string key, Context context,
               std::filesystem::path spill_path, std::size_t threshold);

  // Throws kInvalidArgument for non-finite values or negative steps,
  // kIo when a triggered flush fails.
  void append(const MetricSample& sample);
  // Appends the whole buffer to the spill file in a single write. A flush
  // of an empty buffer still creates the file.
  void flush();

  const std::string& key() const { return key_; }
  const Context& context() const { return context_; }
  const std::filesystem::path& spill_path() const { return spill_path_; }
  std::size_t spilled_count() const { return spilled_count_; }
  const std::vector<MetricSample>& buffered() const { return buffer_; }
  std::size_t total_count() const { return spilled_count_ + buffer_.size(); }

  // `series_file` is left empty; the caller knows the run-relative path.
  SeriesSummary summary() const;

 private:
  std::string key_;
  Context context_;
  std::filesystem::path spill_path_;
  std::size_t threshold_;
  std::vector<MetricSample> buffer_;
  std::size_t spilled_count_ = 0;
  double min_ = 0.0;
  double max_ = 0.0;
  double last_ = 0.0;
};

}  // namespace provtrack

#endif  // PROVTRACK_METRIC_SERIES_H_
