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

#include "provtrack/telemetry.h"

#include <sys/statvfs.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "provtrack/error.h"

namespace provtrack {

namespace {

bool valid_percent(double p) { return std::isfinite(p) && p >= 0.0 && p <= 100.0; }
bool valid_power(double w) { return std::isfinite(w) && w >= 0.0; }

std::int64_t monotonic_ns() {
  using namespace std::chrono;
  return duration_cast<nanoseconds>(steady_clock::now().time_since_epoch())
      .count();
}

// First line of `command` output, or nullopt when it cannot run.
std::optional<std::string> run_first_line(const char* command) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command, "r"), pclose);
  if (!pipe) return std::nullopt;
  char buf[512];
  if (!fgets(buf, sizeof(buf), pipe.get())) return std::nullopt;
  std::string line(buf);
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) {
    line.pop_back();
  }
  if (line.empty()) return std::nullopt;
  return line;
}

struct GpuReading {
  std::uint64_t memory_used_bytes = 0;
  double utilization_percent = 0.0;
  std::optional<double> power_watts;
};

std::optional<GpuReading> read_nvidia_smi() {
  auto line = run_first_line(
      "nvidia-smi --query-gpu=memory.used,utilization.gpu,power.draw "
      "--format=csv,noheader,nounits 2>/dev/null");
  if (!line) return std::nullopt;
  double mem_mib = 0, util = 0, power = 0;
  int n = std::sscanf(line->c_str(), "%lf, %lf, %lf", &mem_mib, &util, &power);
  if (n < 2) return std::nullopt;
  GpuReading r;
  r.memory_used_bytes = static_cast<std::uint64_t>(mem_mib * 1024.0 * 1024.0);
  r.utilization_percent = util;
  if (n == 3) r.power_watts = power;
  return r;
}

}  // namespace

std::string check_sample(const SystemSample& s) {
  if (s.memory_used_bytes > s.memory_total_bytes) return "memory used > total";
  if (s.disk_used_bytes > s.disk_total_bytes) return "disk used > total";
  if (!valid_percent(s.cpu_utilization_percent)) return "cpu percent out of range";
  if (s.gpu_utilization_percent && !valid_percent(*s.gpu_utilization_percent)) {
    return "gpu percent out of range";
  }
  return "";
}

std::string check_sample(const EnergySample& s) {
  if (!valid_power(s.cpu_power_watts)) return "negative or non-finite cpu power";
  if (s.gpu_power_watts && !valid_power(*s.gpu_power_watts)) {
    return "negative or non-finite gpu power";
  }
  if (s.ram_power_watts && !valid_power(*s.ram_power_watts)) {
    return "negative or non-finite ram power";
  }
  return "";
}

SystemSample ScriptedTelemetryProvider::sample_system() {
  std::lock_guard<std::mutex> lock(mu_);
  if (system_.empty()) {
    throw Error(ErrorCode::kNotFound, "no scripted system samples");
  }
  std::size_t i = std::min(system_next_, system_.size() - 1);
  ++system_next_;
  return system_[i];
}

EnergySample ScriptedTelemetryProvider::sample_energy() {
  std::lock_guard<std::mutex> lock(mu_);
  if (energy_.empty()) {
    throw Error(ErrorCode::kNotFound, "no scripted energy samples");
  }
  std::size_t i = std::min(energy_next_, energy_.size() - 1);
  ++energy_next_;
  return energy_[i];
}

SystemTelemetryProvider::SystemTelemetryProvider(std::filesystem::path disk_path)
    : disk_path_(std::move(disk_path)) {}

SystemSample SystemTelemetryProvider::sample_system() {
  SystemSample s;

  std::ifstream meminfo("/proc/meminfo");
  if (!meminfo) throw Error(ErrorCode::kNotFound, "/proc/meminfo unavailable");
  std::string key;
  std::uint64_t kb = 0;
  std::string unit;
  std::uint64_t total_kb = 0, available_kb = 0;
  while (meminfo >> key >> kb) {
    std::getline(meminfo, unit);
    if (key == "MemTotal:") total_kb = kb;
    if (key == "MemAvailable:") available_kb = kb;
  }
  s.memory_total_bytes = total_kb * 1024;
  s.memory_used_bytes = (total_kb - std::min(total_kb, available_kb)) * 1024;

  struct statvfs fs {};
  if (statvfs(disk_path_.c_str(), &fs) == 0) {
    s.disk_total_bytes = static_cast<std::uint64_t>(fs.f_blocks) * fs.f_frsize;
    s.disk_used_bytes =
        static_cast<std::uint64_t>(fs.f_blocks - fs.f_bfree) * fs.f_frsize;
  }

  std::ifstream stat("/proc/stat");
  std::string cpu;
  std::uint64_t user = 0, nice = 0, system = 0, idle = 0, iowait = 0, irq = 0,
                softirq = 0, steal = 0;
  if (stat >> cpu >> user >> nice >> system >> idle >> iowait >> irq >>
      softirq >> steal) {
    CpuTimes now;
    now.busy = user + nice + system + irq + softirq + steal;
    now.total = now.busy + idle + iowait;
    if (last_cpu_ && now.total > last_cpu_->total) {
      s.cpu_utilization_percent =
          100.0 * static_cast<double>(now.busy - last_cpu_->busy) /
          static_cast<double>(now.total - last_cpu_->total);
    } else if (now.total > 0) {
      s.cpu_utilization_percent =
          100.0 * static_cast<double>(now.busy) / static_cast<double>(now.total);
    }
    last_cpu_ = now;
  }

  if (auto gpu = read_nvidia_smi()) {
    s.gpu_memory_used_bytes = gpu->memory_used_bytes;
    s.gpu_utilization_percent = gpu->utilization_percent;
  }
  return s;
}

EnergySample SystemTelemetryProvider::sample_energy() {
  EnergySample s;
  std::ifstream rapl("/sys/class/powercap/intel-rapl:0/energy_uj");
  std::uint64_t uj = 0;
  if (!(rapl >> uj)) {
    throw Error(ErrorCode::kNotFound, "RAPL energy counter unavailable");
  }
  Rapl now{uj, monotonic_ns()};
  if (last_rapl_ && now.at_ns > last_rapl_->at_ns &&
      now.energy_uj >= last_rapl_->energy_uj) {
    double joules = static_cast<double>(now.energy_uj - last_rapl_->energy_uj) / 1e6;
    double seconds = static_cast<double>(now.at_ns - last_rapl_->at_ns) / 1e9;
    s.cpu_power_watts = joules / seconds;
  }
  last_rapl_ = now;
  if (auto gpu = read_nvidia_smi()) s.gpu_power_watts = gpu->power_watts;
  return s;
}

void EnergyAccumulator::add(const EnergySample& sample) {
  if (last_ && sample.sample_time_ms > last_->sample_time_ms) {
    double seconds =
        static_cast<double>(sample.sample_time_ms - last_->sample_time_ms) /
        1000.0;
    energy_kwh_ += last_->total_watts() * seconds / 3.6e6;
  }
  last_ = sample;
}

void EnergyAccumulator::set_carbon_intensity(double g_per_kwh) {
  if (!(g_per_kwh > 0.0) || !std::isfinite(g_per_kwh)) {
    throw Error(ErrorCode::kInvalidArgument,
                "carbon intensity must be a positive number of g/kWh");
  }
  intensity_ = g_per_kwh;
}

}  // namespace provtrack
