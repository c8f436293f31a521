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

#include <unistd.h>

#include <gtest/gtest.h>

#include "provtrack/environment.h"

namespace provtrack {
namespace {

struct RankCase {
  std::optional<std::int64_t> explicit_rank;
  EnvironmentVariables env;
  std::int64_t expected;
  std::size_t warnings;
};

TEST(ResolveRankTest, Table) {
  const RankCase cases[] = {
      {std::nullopt, {}, 0, 0},
      {2, {{"RANK", "7"}}, 2, 0},
      {std::nullopt, {{"RANK", "7"}}, 7, 0},
      {std::nullopt, {{"LOCAL_RANK", "1"}, {"RANK", "3"}}, 3, 0},
      {std::nullopt, {{"SLURM_PROCID", "4"}, {"RANK", "3"}}, 4, 0},
      {std::nullopt, {{"OMPI_COMM_WORLD_RANK", "6"}, {"LOCAL_RANK", "1"}}, 6, 0},
      {std::nullopt, {{"RANK", "abc"}, {"LOCAL_RANK", "2"}}, 2, 1},
      {std::nullopt, {{"RANK", "-1"}}, 0, 1},
      {std::nullopt, {{"RANK", ""}}, 0, 1},
      {std::nullopt, {{"RANK", "3 "}}, 0, 1},
      {std::nullopt, {{"WORLD_SIZE", "8"}}, 0, 0},
  };
  for (const auto& c : cases) {
    std::vector<std::string> warnings;
    EXPECT_EQ(resolve_rank(c.explicit_rank, c.env, &warnings), c.expected);
    EXPECT_EQ(warnings.size(), c.warnings);
  }
}

TEST(CaptureEnvironmentTest, AllowlistAndRedaction) {
  FixedEnvironmentProbe probe;
  probe.vars = {{"CUDA_VISIBLE_DEVICES", "0,1"},
                {"HOME", "/root"},
                {"OMP_NUM_THREADS", "8"},
                {"AWS_REGION", "eu"}};
  EnvironmentSnapshot snap = capture_environment(probe);
  ASSERT_EQ(snap.variables.size(), 2u);
  EXPECT_EQ(snap.variables[0].first, "CUDA_VISIBLE_DEVICES");
  EXPECT_EQ(snap.variables[1].first, "OMP_NUM_THREADS");

  probe.vars = {{"HF_TOKEN", "hf_abc"},
                {"WANDB_API_KEY", "k"},
                {"MASTER_PASSWORD", "p"},
                {"TORCH_SECRET_SAUCE", "s"},
                {"TORCH_HOME", "/t"}};
  snap = capture_environment(probe, {"HF_", "MASTER", "TORCH", "WANDB"});
  ASSERT_EQ(snap.variables.size(), 5u);
  for (const auto& [name, value] : snap.variables) {
    if (name == "TORCH_HOME") {
      EXPECT_EQ(value, "/t");
    } else {
      EXPECT_EQ(value, kRedacted) << name;
    }
  }
}

TEST(CaptureEnvironmentTest, VariablesAreSorted) {
  FixedEnvironmentProbe probe;
  probe.vars = {{"Z", "1"}, {"A", "2"}, {"M", "3"}};
  EnvironmentSnapshot snap = capture_environment(probe, {""});
  ASSERT_EQ(snap.variables.size(), 3u);
  EXPECT_TRUE(std::is_sorted(snap.variables.begin(), snap.variables.end()));
}

TEST(CaptureEnvironmentTest, MissingProberFlagsAndWarns) {
  FixedEnvironmentProbe probe;
  probe.deps.reset();
  std::vector<std::string> warnings;
  EnvironmentSnapshot snap = capture_environment(probe, {}, &warnings);
  EXPECT_TRUE(snap.dependencies_missing);
  EXPECT_TRUE(snap.dependencies.empty());
  EXPECT_EQ(warnings.size(), 1u);

  probe.deps = Dependencies{{"libz", "1.3"}};
  warnings.clear();
  snap = capture_environment(probe, {}, &warnings);
  EXPECT_FALSE(snap.dependencies_missing);
  EXPECT_EQ(snap.dependencies, (Dependencies{{"libz", "1.3"}}));
  EXPECT_TRUE(warnings.empty());
}

TEST(CaptureEnvironmentTest, CopiesHostFacts) {
  FixedEnvironmentProbe probe;
  probe.host = "node7";
  probe.os_tag = "Linux";
  probe.process_id = 99;
  probe.cmdline = "train --fast";
  EnvironmentSnapshot snap = capture_environment(probe);
  EXPECT_EQ(snap.hostname, "node7");
  EXPECT_EQ(snap.os, "Linux");
  EXPECT_EQ(snap.pid, 99);
  EXPECT_EQ(snap.command_line, "train --fast");
}

TEST(SystemEnvironmentProbeTest, ReadsThisProcess) {
  SystemEnvironmentProbe probe;
  EXPECT_EQ(probe.pid(), static_cast<std::int64_t>(getpid()));
  EXPECT_FALSE(probe.os().empty());
  EXPECT_NE(probe.command_line().find("environment_test"), std::string::npos);
  EXPECT_TRUE(probe.dependencies().has_value());

  SystemEnvironmentProbe custom([] { return Dependencies{{"x", "1"}}; });
  EXPECT_EQ(*custom.dependencies(), (Dependencies{{"x", "1"}}));
}

}  // namespace
}  // namespace provtrack
