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

#include "provtrack/error.h"
#include "run_state.h"

namespace provtrack {

namespace {

RunHandle::State& live(const std::unique_ptr<RunHandle::State>& state) {
  if (!state) throw Error(ErrorCode::kIllegalState, "moved-from run handle");
  return *state;
}

double percent(std::uint64_t used, std::uint64_t total) {
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(used) / static_cast<double>(total);
}

}  // namespace

void RunHandle::log_system_metrics(const Context& context, std::int64_t step) {
  namespace keys = telemetry_keys;
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("log_system_metrics");
  if (s.sink) return;
  if (step < 0) throw Error(ErrorCode::kInvalidArgument, "step must be nonnegative");

  SystemSample sample;
  try {
    sample = s.services.telemetry->sample_system();
  } catch (const std::exception& e) {
    s.warn(std::string("system sample unavailable: ") + e.what());
    return;
  }
  if (std::string problem = check_sample(sample); !problem.empty()) {
    s.warn("discarding implausible system sample: " + problem);
    return;
  }
  s.append_sample(keys::kMemoryUsage, context, step,
                  percent(sample.memory_used_bytes, sample.memory_total_bytes));
  s.append_sample(keys::kDiskUsage, context, step,
                  percent(sample.disk_used_bytes, sample.disk_total_bytes));
  if (sample.gpu_memory_used_bytes) {
    s.append_sample(keys::kGpuMemoryUsage, context, step,
                    static_cast<double>(*sample.gpu_memory_used_bytes));
  }
  if (sample.gpu_utilization_percent) {
    s.append_sample(keys::kGpuUsage, context, step, *sample.gpu_utilization_percent);
  }
  s.append_sample(keys::kCpuUsage, context, step, sample.cpu_utilization_percent);
}

void RunHandle::log_carbon_metrics(const Context& context, std::int64_t step) {
  namespace keys = telemetry_keys;
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("log_carbon_metrics");
  if (s.sink) return;
  if (step < 0) throw Error(ErrorCode::kInvalidArgument, "step must be nonnegative");

  EnergySample sample;
  try {
    sample = s.services.telemetry->sample_energy();
  } catch (const std::exception& e) {
    s.warn(std::string("energy sample unavailable: ") + e.what());
    return;
  }
  if (std::string problem = check_sample(sample); !problem.empty()) {
    s.warn("discarding implausible energy sample: " + problem);
    return;
  }
  sample.sample_time_ms = s.now();
  s.energy.add(sample);
  s.append_sample(keys::kCpuPower, context, step, sample.cpu_power_watts);
  if (sample.gpu_power_watts) {
    s.append_sample(keys::kGpuPower, context, step, *sample.gpu_power_watts);
  }
  s.append_sample(keys::kEnergy, context, step, s.energy.cumulative_energy_kwh());
  s.append_sample(keys::kEmissions, context, step, s.energy.emissions_g());
}

void RunHandle::set_carbon_intensity(double g_per_kwh) {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("set_carbon_intensity");
  s.energy.set_carbon_intensity(g_per_kwh);
}

double RunHandle::carbon_intensity() const {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  return s.energy.carbon_intensity();
}

double RunHandle::cumulative_energy_kwh() const {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  return s.energy.cumulative_energy_kwh();
}

}  // namespace provtrack
