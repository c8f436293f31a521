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

#ifndef PROVTRACK_TESTS_SUPPORT_DEMO_RUN_H_
#define PROVTRACK_TESTS_SUPPORT_DEMO_RUN_H_

#include <filesystem>
#include <string>
#include <vector>

#include "provtrack/run.h"

namespace provtrack::testing {

inline constexpr std::int64_t kDemoStartMs = 1700000000000;  // 2023-11-14
inline constexpr int kDemoEpochs = 3;
inline constexpr int kDemoBatches = 8;

// Deterministic loss for global batch `k`.
double demo_loss(int k);

// Services with a frozen manual clock, scripted telemetry and a fixed
// environment, so the run's document does not depend on the host.
RunServices demo_services(std::shared_ptr<ManualClock> clock,
                          const std::string& dot_executable = "dot");

// Replays the MNIST-style training loop: params, dataset, per-batch loss,
// carbon and system metrics, one model version per epoch, final model.
// Returns the end_run() result (graph and SVG requested).
EndRunResult run_mnist_demo(const std::filesystem::path& save_dir,
                            const std::string& dot_executable = "dot");

// Simulates a distributed job: each rank runs a short loop against its own
// node-local `save_dir/node<r>` with collect_all_processes set, so every
// rank gets run id 0. Returns the per-rank document paths in rank order.
std::vector<std::filesystem::path> run_distributed_demo(
    const std::filesystem::path& save_dir, int ranks);

}  // namespace provtrack::testing

#endif  // PROVTRACK_TESTS_SUPPORT_DEMO_RUN_H_
