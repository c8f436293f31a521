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

#ifndef PROVTRACK_TELEMETRY_H_
#define PROVTRACK_TELEMETRY_H_

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace provtrack {

struct SystemSample {
  std::uint64_t memory_used_bytes = 0;
  std::uint64_t memory_total_bytes = 0;
  std::uint64_t disk_used_bytes = 0;
  std::uint64_t disk_total_bytes = 0;
  std::optional<std::uint64_t> gpu_memory_used_bytes;
  std::optional<double> gpu_utilization_percent;
  double cpu_utilization_percent = 0.0;
};

struct EnergySample {
  double cpu_power_watts = 0.0;
  std::optional<double> gpu_power_watts;
  std::optional<double> ram_power_watts;
  // Stamped by the run from its clock when the sample is taken.
  std::int64_t sample_time_ms = 0;

  double total_watts() const {
    return cpu_power_watts + gpu_power_watts.value_or(0.0) +
           ram_power_watts.value_or(0.0);
  }
};

// Returns an empty string when the sample is plausible, otherwise why not.
std::string check_sample(const SystemSample& s);
std::string check_sample(const EnergySample& s);

// Metric keys fanned out by the telemetry directives.
namespace telemetry_keys {
inline constexpr const char* kMemoryUsage = "memory_usage";
inline constexpr const char* kDiskUsage = "disk_usage";
inline constexpr const char* kGpuMemoryUsage = "gpu_memory_usage";
inline constexpr const char* kGpuUsage = "gpu_usage";
inline constexpr const char* kCpuUsage = "cpu_usage";
inline constexpr const char* kCpuPower = "cpu_power_W";
inline constexpr const char* kGpuPower = "gpu_power_W";
inline constexpr const char* kEnergy = "energy_kWh";
inline constexpr const char* kEmissions = "emissions_gCO2eq";
}  // namespace telemetry_keys

// Source of system and energy counters. Implementations may throw to signal
// that a sample is unavailable; callers treat that as a skipped sample.
class TelemetryProvider {
 public:
  virtual ~TelemetryProvider() = default;
  virtual SystemSample sample_system() = 0;
  virtual EnergySample sample_energy() = 0;
};

// Replays fixed scripts. Each call returns the next scripted sample and the
// last one repeats once the script is exhausted. An empty script makes the
// corresponding call throw.
class ScriptedTelemetryProvider : public TelemetryProvider {
 public:
  ScriptedTelemetryProvider(std::vector<SystemSample> system,
                            std::vector<EnergySample> energy)
      : system_(std::move(system)), energy_(std::move(energy)) {}

  SystemSample sample_system() override;
  EnergySample sample_energy() override;

 private:
  std::mutex mu_;
  std::vector<SystemSample> system_;
  std::vector<EnergySample> energy_;
  std::size_t system_next_ = 0;
  std::size_t energy_next_ = 0;
};

// Best-effort counters for Linux: /proc/meminfo, /proc/stat, statvfs on the
// run directory, RAPL package energy under /sys/class/powercap, and
// nvidia-smi for GPU figures when it is installed.
class SystemTelemetryProvider : public TelemetryProvider {
 public:
  explicit SystemTelemetryProvider(std::filesystem::path disk_path = ".");

  SystemSample sample_system() override;
  // Throws when no CPU power source is readable.
  EnergySample sample_energy() override;

 private:
  struct CpuTimes {
    std::uint64_t busy = 0;
    std::uint64_t total = 0;
  };
  struct Rapl {
    std::uint64_t energy_uj = 0;
    std::int64_t at_ns = 0;
  };

  std::filesystem::path disk_path_;
  std::optional<CpuTimes> last_cpu_;
  std::optional<Rapl> last_rapl_;
};

inline constexpr double kDefaultCarbonIntensity = 475.0;  // gCO2eq per kWh

// Left-point rectangle integration of power over the gaps between samples.
// Emissions are derived from cumulative energy and the current intensity.
class EnergyAccumulator {
 public:
  // Integrates total power of the previous sample over the elapsed time and
  // remembers `sample`. The first sample integrates nothing; a clock that
  // moves backwards contributes nothing.
  void add(const EnergySample& sample);

  // Throws kInvalidArgument unless g_per_kwh > 0.
  void set_carbon_intensity(double g_per_kwh);

  double cumulative_energy_kwh() const { return energy_kwh_; }
  double carbon_intensity() const { return intensity_; }
  double emissions_g() const { return energy_kwh_ * intensity_; }
  const std::optional<EnergySample>& last_sample() const { return last_; }

 private:
  double energy_kwh_ = 0.0;
  double intensity_ = kDefaultCarbonIntensity;
  std::optional<EnergySample> last_;
};

}  // namespace provtrack

#endif  // PROVTRACK_TELEMETRY_H_
