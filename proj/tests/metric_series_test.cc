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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "provtrack/error.h"
#include "provtrack/metric_series.h"
#include "temp_dir.h"

namespace provtrack {
namespace {

using testing::read_file;
using testing::TempDir;

MetricSample sample(std::int64_t step, double value, std::int64_t ts = 1000) {
  return {step, ts, value};
}

TEST(SpillFileNameTest, EscapesUnderscoreInContext) {
  EXPECT_EQ(spill_file_name("loss", Context::training()), "training_loss.tsv");
  EXPECT_EQ(spill_file_name("a_b", Context::validation()), "validation_a_b.tsv");
  std::string custom = spill_file_name("k", Context::custom("my_ctx"));
  EXPECT_EQ(custom.find('_'), custom.rfind("_k.tsv"));
}

TEST(SpillFileNameTest, DistinctPairsGetDistinctFiles) {
  EXPECT_NE(spill_file_name("b_c", Context::custom("a")),
            spill_file_name("c", Context::custom("a_b")));
  EXPECT_NE(spill_file_name("x/y", Context::training()),
            spill_file_name("x_y", Context::training()));
}

TEST(FormatSampleLineTest, TabSeparated) {
  EXPECT_EQ(format_sample_line({3, 1700000000000, 0.25}), "3\t1700000000000\t0.25\n");
  EXPECT_EQ(format_sample_line({0, 0, 1e-300}), "0\t0\t1e-300\n");
}

TEST(MetricSeriesTest, SpillsAtThreshold) {
  TempDir dir;
  MetricSeries series("loss", Context::training(), dir / "training_loss.tsv", 100);
  for (int i = 0; i < 250; ++i) series.append(sample(i, i * 0.5));
  EXPECT_EQ(series.spilled_count(), 200u);
  EXPECT_EQ(series.buffered().size(), 50u);
  EXPECT_EQ(read_spill_file(series.spill_path()).size(), 200u);

  series.flush();
  EXPECT_EQ(series.spilled_count(), 250u);
  EXPECT_TRUE(series.buffered().empty());
  auto samples = read_spill_file(series.spill_path());
  ASSERT_EQ(samples.size(), 250u);
  for (int i = 0; i < 250; ++i) {
    EXPECT_EQ(samples[i].step, i);
    EXPECT_EQ(samples[i].value, i * 0.5);
  }
}

TEST(MetricSeriesTest, ThresholdOneWritesEverySample) {
  TempDir dir;
  MetricSeries series("k", Context::training(), dir / "s.tsv", 1);
  series.append(sample(0, 1.0));
  EXPECT_EQ(series.spilled_count(), 1u);
  EXPECT_TRUE(series.buffered().empty());
}

TEST(MetricSeriesTest, NeverSpillKeepsEverythingBuffered) {
  TempDir dir;
  MetricSeries series("k", Context::training(), dir / "s.tsv", kNeverSpill);
  for (int i = 0; i < 500; ++i) series.append(sample(i, 1.0));
  EXPECT_EQ(series.spilled_count(), 0u);
  EXPECT_FALSE(std::filesystem::exists(dir / "s.tsv"));
  series.flush();
  EXPECT_EQ(read_spill_file(dir / "s.tsv").size(), 500u);
}

TEST(MetricSeriesTest, EmptyFlushCreatesFile) {
  TempDir dir;
  MetricSeries series("k", Context::training(), dir / "s.tsv", 10);
  series.flush();
  EXPECT_TRUE(std::filesystem::exists(dir / "s.tsv"));
  EXPECT_EQ(read_file(dir / "s.tsv"), "");
}

TEST(MetricSeriesTest, RejectsBadSamples) {
  TempDir dir;
  MetricSeries series("k", Context::training(), dir / "s.tsv", 10);
  for (double bad : {std::numeric_limits<double>::quiet_NaN(),
                     std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()}) {
    try {
      series.append(sample(0, bad));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    }
  }
  EXPECT_THROW(series.append(sample(-1, 1.0)), Error);
  EXPECT_EQ(series.total_count(), 0u);
}

TEST(MetricSeriesTest, SummaryTracksAllSamples) {
  TempDir dir;
  MetricSeries series("k", Context::validation(), dir / "s.tsv", 3);
  for (double v : {4.0, -2.0, 9.0, 1.0, 3.5}) series.append(sample(0, v));
  SeriesSummary s = series.summary();
  EXPECT_EQ(s.key, "k");
  EXPECT_EQ(s.context, Context::validation());
  EXPECT_EQ(s.count, 5u);
  EXPECT_EQ(s.min, -2.0);
  EXPECT_EQ(s.max, 9.0);
  EXPECT_EQ(s.last, 3.5);
  EXPECT_TRUE(s.series_file.empty());
}

TEST(MetricSeriesTest, UnwritableSpillPathThrowsIo) {
  TempDir dir;
  MetricSeries series("k", Context::training(), dir / "missing" / "s.tsv", 1);
  try {
    series.append(sample(0, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(ReadSpillFileTest, MissingAndMalformed) {
  TempDir dir;
  try {
    read_spill_file(dir / "none.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  testing::write_file(dir / "bad.tsv", "1\t2\n");
  try {
    read_spill_file(dir / "bad.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

// Property: the spill threshold changes when bytes reach disk, never which
// bytes. Every threshold leaves an identical file once flushed, and the
// buffer never reaches the threshold between appends.
TEST(MetricSeriesProperty, FlushEquivalenceAcrossThresholds) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> length(0, 300);
  std::uniform_real_distribution<double> value(-1e6, 1e6);
  const std::size_t thresholds[] = {1, 7, 100, kNeverSpill};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<MetricSample> samples(length(rng));
    std::int64_t step = 0;
    for (auto& s : samples) {
      step += static_cast<std::int64_t>(rng() % 3);
      s = {step, 1700000000000 + static_cast<std::int64_t>(rng() % 100000), value(rng)};
    }
    TempDir dir;
    std::string reference;
    for (std::size_t t : thresholds) {
      auto path = dir / ("t" + std::to_string(t == kNeverSpill ? 0 : t) + ".tsv");
      MetricSeries series("k", Context::training(), path, t);
      for (const auto& s : samples) {
        series.append(s);
        ASSERT_LT(series.buffered().size(), t);
        ASSERT_EQ(series.spilled_count() + series.buffered().size(), series.total_count());
      }
      series.flush();
      std::string bytes = read_file(path);
      if (t == 1) {
        reference = bytes;
        ASSERT_EQ(read_spill_file(path), samples);
      } else {
        ASSERT_EQ(bytes, reference) << "threshold " << t;
      }
    }
  }
}

}  // namespace
}  // namespace provtrack
