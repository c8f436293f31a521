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

#include "provtrack/metric_series.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "provtrack/attribute_value.h"
#include "provtrack/error.h"
#include "provtrack/qualified_name.h"

namespace provtrack {

std::string spill_file_name(std::string_view key, const Context& context) {
  return percent_escape(context.str(), ".-") + "_" +
         percent_escape(key, "_.-") + ".tsv";
}

std::string format_sample_line(const MetricSample& sample) {
  std::string line = std::to_string(sample.step);
  line += '\t';
  line += std::to_string(sample.timestamp_ms);
  line += '\t';
  line += format_double(sample.value);
  line += '\n';
  return line;
}

std::vector<MetricSample> read_spill_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kNotFound, "no series file " + path.string());
  }
  std::vector<MetricSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto bad = [&] {
      return Error(ErrorCode::kParse, path.string() + ":" +
                                          std::to_string(line_no) +
                                          ": malformed sample line");
    };
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw bad();
    MetricSample s;
    const char* begin = line.data();
    auto r1 = std::from_chars(begin, begin + t1, s.step);
    auto r2 = std::from_chars(begin + t1 + 1, begin + t2, s.timestamp_ms);
    if (r1.ec != std::errc() || r1.ptr != begin + t1 ||
        r2.ec != std::errc() || r2.ptr != begin + t2 ||
        !parse_double(std::string_view(line).substr(t2 + 1), &s.value)) {
      throw bad();
    }
    samples.push_back(s);
  }
  return samples;
}

MetricSeries::MetricSeries(std::string key, Context context,
                           std::filesystem::path spill_path,
                           std::size_t threshold)
    : key_(std::move(key)),
      context_(std::move(context)),
      spill_path_(std::move(spill_path)),
      threshold_(std::max<std::size_t>(threshold, 1)) {}

void MetricSeries::append(const MetricSample& sample) {
  if (!std::isfinite(sample.value)) {
    throw Error(ErrorCode::kInvalidArgument,
                "metric '" + key_ + "' value must be finite");
  }
  if (sample.step < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "metric '" + key_ + "' step must be nonnegative");
  }
  if (total_count() == 0) {
    min_ = max_ = sample.value;
  } else {
    min_ = std::min(min_, sample.value);
    max_ = std::max(max_, sample.value);
  }
  last_ = sample.value;
  buffer_.push_back(sample);
  if (buffer_.size() >= threshold_) flush();
}

void MetricSeries::flush() {
  std::string chunk;
  for (const auto& s : buffer_) chunk += format_sample_line(s);
  std::ofstream out(spill_path_, std::ios::binary | std::ios::app);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open " + spill_path_.string());
  }
  out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed: " + spill_path_.string());
  }
  spilled_count_ += buffer_.size();
  buffer_.clear();
}

SeriesSummary MetricSeries::summary() const {
  SeriesSummary s;
  s.key = key_;
  s.context = context_;
  s.count = total_count();
  s.min = min_;
  s.max = max_;
  s.last = last_;
  return s;
}

}  // namespace provtrack
