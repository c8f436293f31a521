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

#include "provtrack/provtrack_c.h"

#include <cmath>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "provtrack/error.h"
#include "provtrack/prov_json.h"
#include "provtrack/run.h"
#include "provtrack/toolkit.h"

struct provtrack_options {
  provtrack::RunConfig config;
  std::string dot_executable = "dot";
  bool fixed_environment = false;
  provtrack_clock_fn clock = nullptr;
  void* clock_data = nullptr;
  provtrack_system_sampler_fn system = nullptr;
  provtrack_energy_sampler_fn energy = nullptr;
  void* telemetry_data = nullptr;
  bool has_telemetry = false;
};

struct provtrack_run {
  explicit provtrack_run(provtrack::RunHandle h) : handle(std::move(h)) {}
  provtrack::RunHandle handle;
  std::optional<provtrack::ModelDescriptor> staged_model;
};

namespace {

using provtrack::Context;
using provtrack::Error;
using provtrack::ErrorCode;

thread_local std::string g_last_error;

class CallbackClock : public provtrack::Clock {
 public:
  CallbackClock(provtrack_clock_fn fn, void* data) : fn_(fn), data_(data) {}
  std::int64_t now_ms() const override { return fn_(data_); }

 private:
  provtrack_clock_fn fn_;
  void* data_;
};

class CallbackTelemetry : public provtrack::TelemetryProvider {
 public:
  CallbackTelemetry(provtrack_system_sampler_fn system,
                    provtrack_energy_sampler_fn energy, void* data)
      : system_(system), energy_(energy), data_(data) {}

  provtrack::SystemSample sample_system() override {
    if (!system_) throw Error(ErrorCode::kNotFound, "no system sampler");
    provtrack::SystemSample s;
    std::int64_t gpu_memory = -1;
    double gpu_percent = NAN;
    if (system_(data_, &s.memory_used_bytes, &s.memory_total_bytes, &s.disk_used_bytes,
                &s.disk_total_bytes, &s.cpu_utilization_percent, &gpu_memory,
                &gpu_percent) != 0) {
      throw Error(ErrorCode::kNotFound, "system sampler reported unavailable");
    }
    if (gpu_memory >= 0) s.gpu_memory_used_bytes = static_cast<std::uint64_t>(gpu_memory);
    if (!std::isnan(gpu_percent)) s.gpu_utilization_percent = gpu_percent;
    return s;
  }

  provtrack::EnergySample sample_energy() override {
    if (!energy_) throw Error(ErrorCode::kNotFound, "no energy sampler");
    provtrack::EnergySample s;
    double gpu = NAN, ram = NAN;
    if (energy_(data_, &s.cpu_power_watts, &gpu, &ram) != 0) {
      throw Error(ErrorCode::kNotFound, "energy sampler reported unavailable");
    }
    if (!std::isnan(gpu)) s.gpu_power_watts = gpu;
    if (!std::isnan(ram)) s.ram_power_watts = ram;
    return s;
  }

 private:
  provtrack_system_sampler_fn system_;
  provtrack_energy_sampler_fn energy_;
  void* data_;
};

template <typename F>
provtrack_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return PROVTRACK_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<provtrack_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PROVTRACK_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PROVTRACK_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

std::string str(const char* s, const char* what) {
  require(s, what);
  return s;
}

Context context_of(const char* s) {
  return s ? Context::from_string(s) : Context::training();
}

std::optional<std::uint64_t> optional_count(std::int64_t v) {
  if (v < 0) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

void copy_out(const std::string& text, char* buffer, size_t size, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buffer) return;
  if (size < text.size() + 1) {
    throw Error(ErrorCode::kInvalidArgument, "buffer too small");
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
}

}  // namespace

extern "C" {

const char* provtrack_status_name(provtrack_status status) {
  if (status == PROVTRACK_OK) return "ok";
  if (status == PROVTRACK_INTERNAL) return "internal";
  if (status < PROVTRACK_INVALID_ARGUMENT || status > PROVTRACK_TOOL_UNAVAILABLE) {
    return "unknown";
  }
  // Names are static string literals, so the view is NUL-terminated.
  return provtrack::error_code_name(static_cast<ErrorCode>(status)).data();
}

const char* provtrack_last_error(void) { return g_last_error.c_str(); }

provtrack_status provtrack_options_create(provtrack_options** out) {
  return guarded([&] {
    require(out, "out");
    *out = new provtrack_options();
  });
}

void provtrack_options_destroy(provtrack_options* options) { delete options; }

provtrack_status provtrack_options_set_string(provtrack_options* options,
                                              const char* key, const char* value) {
  return guarded([&] {
    require(options, "options");
    std::string k = str(key, "key");
    std::string v = str(value, "value");
    if (k == "user_namespace") {
      options->config.user_namespace = v;
    } else if (k == "experiment_name") {
      options->config.experiment_name = v;
    } else if (k == "save_dir") {
      options->config.save_dir = v;
    } else if (k == "dot_executable") {
      options->dot_executable = v;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown string option '" + k + "'");
    }
  });
}

provtrack_status provtrack_options_set_int(provtrack_options* options, const char* key,
                                           int64_t value) {
  return guarded([&] {
    require(options, "options");
    std::string k = str(key, "key");
    if (k == "collect_all_processes") {
      options->config.collect_all_processes = value != 0;
    } else if (k == "save_after_n_logs") {
      if (value < 0) throw Error(ErrorCode::kInvalidArgument, "save_after_n_logs < 0");
      options->config.save_after_n_logs =
          value == 0 ? provtrack::kNeverSpill : static_cast<std::size_t>(value);
    } else if (k == "rank") {
      if (value < 0) {
        options->config.rank.reset();
      } else {
        options->config.rank = value;
      }
    } else if (k == "fixed_environment") {
      options->fixed_environment = value != 0;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown integer option '" + k + "'");
    }
  });
}

provtrack_status provtrack_options_set_clock(provtrack_options* options,
                                             provtrack_clock_fn clock, void* user_data) {
  return guarded([&] {
    require(options, "options");
    options->clock = clock;
    options->clock_data = user_data;
  });
}

provtrack_status provtrack_options_set_telemetry(provtrack_options* options,
                                                 provtrack_system_sampler_fn system,
                                                 provtrack_energy_sampler_fn energy,
                                                 void* user_data) {
  return guarded([&] {
    require(options, "options");
    options->system = system;
    options->energy = energy;
    options->telemetry_data = user_data;
    options->has_telemetry = true;
  });
}

provtrack_status provtrack_start_run(const provtrack_options* options,
                                     provtrack_run** out) {
  return guarded([&] {
    require(options, "options");
    require(out, "out");
    provtrack::RunServices services;
    services.dot_executable = options->dot_executable;
    if (options->clock) {
      services.clock = std::make_shared<CallbackClock>(options->clock, options->clock_data);
    }
    if (options->has_telemetry) {
      services.telemetry = std::make_shared<CallbackTelemetry>(
          options->system, options->energy, options->telemetry_data);
    }
    if (options->fixed_environment) {
      services.environment = std::make_shared<provtrack::FixedEnvironmentProbe>();
    }
    *out = new provtrack_run(provtrack::start_run(options->config, std::move(services)));
  });
}

void provtrack_run_destroy(provtrack_run* run) { delete run; }

provtrack_status provtrack_run_id(const provtrack_run* run, int64_t* out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    *out = run->handle.run_id();
  });
}

provtrack_status provtrack_run_dir(const provtrack_run* run, char* buffer,
                                   size_t buffer_size, size_t* needed) {
  return guarded([&] {
    require(run, "run");
    copy_out(run->handle.run_dir().string(), buffer, buffer_size, needed);
  });
}

provtrack_status provtrack_log_param_string(provtrack_run* run, const char* key,
                                            const char* value) {
  return guarded([&] {
    require(run, "run");
    run->handle.log_param(str(key, "key"), provtrack::AttributeValue(str(value, "value")));
  });
}

provtrack_status provtrack_log_param_int(provtrack_run* run, const char* key,
                                         int64_t value) {
  return guarded([&] {
    require(run, "run");
    run->handle.log_param(str(key, "key"), provtrack::AttributeValue(value));
  });
}

provtrack_status provtrack_log_param_double(provtrack_run* run, const char* key,
                                            double value) {
  return guarded([&] {
    require(run, "run");
    run->handle.log_param(str(key, "key"), provtrack::AttributeValue(value));
  });
}

provtrack_status provtrack_log_param_bool(provtrack_run* run, const char* key,
                                          int value) {
  return guarded([&] {
    require(run, "run");
    run->handle.log_param(str(key, "key"), provtrack::AttributeValue(value != 0));
  });
}

provtrack_status provtrack_log_metric(provtrack_run* run, const char* key, double value,
                                      const char* context, int64_t step) {
  return guarded([&] {
    require(run, "run");
    run->handle.log_metric(str(key, "key"), value, context_of(context), step);
  });
}

provtrack_status provtrack_log_artifact(provtrack_run* run, const char* label,
                                        const char* path, const char* context,
                                        int64_t step) {
  return guarded([&] {
    require(run, "run");
    std::optional<Context> ctx;
    if (context) ctx = Context::from_string(context);
    std::optional<std::int64_t> s;
    if (step >= 0) s = step;
    run->handle.log_artifact(label ? label : "", str(path, "path"), ctx, s);
  });
}

provtrack_status provtrack_save_model_version(provtrack_run* run, const char* label,
                                              const void* data, size_t size,
                                              const char* context, int64_t step) {
  return guarded([&] {
    require(run, "run");
    if (size > 0) require(data, "data");
    std::string_view blob(static_cast<const char*>(data), data ? size : 0);
    run->handle.save_model_version(str(label, "label"), blob, context_of(context), step);
  });
}

provtrack_status provtrack_model_begin(provtrack_run* run, const char* label,
                                       uint64_t total_parameters, uint64_t memory_bytes,
                                       int64_t gradient_memory_bytes) {
  return guarded([&] {
    require(run, "run");
    provtrack::ModelDescriptor d;
    d.label = str(label, "label");
    d.total_parameters = total_parameters;
    d.memory_bytes = memory_bytes;
    d.gradient_memory_bytes = optional_count(gradient_memory_bytes);
    run->staged_model = std::move(d);
  });
}

provtrack_status provtrack_model_add_layer(provtrack_run* run, const char* name,
                                           const char* kind, const int64_t* input_shape,
                                           size_t input_rank, const int64_t* output_shape,
                                           size_t output_rank, const char* dtype) {
  return guarded([&] {
    require(run, "run");
    if (!run->staged_model) {
      throw Error(ErrorCode::kIllegalState, "provtrack_model_begin was not called");
    }
    if (input_rank) require(input_shape, "input_shape");
    if (output_rank) require(output_shape, "output_shape");
    provtrack::LayerInfo layer;
    layer.name = str(name, "name");
    layer.kind = kind ? kind : "";
    if (input_rank) layer.input_shape.assign(input_shape, input_shape + input_rank);
    if (output_rank) layer.output_shape.assign(output_shape, output_shape + output_rank);
    layer.dtype = dtype ? dtype : "";
    run->staged_model->layers.push_back(std::move(layer));
  });
}

provtrack_status provtrack_log_model(provtrack_run* run, int log_as_artifact) {
  return guarded([&] {
    require(run, "run");
    if (!run->staged_model) {
      throw Error(ErrorCode::kIllegalState, "provtrack_model_begin was not called");
    }
    run->handle.log_model(run->staged_model->label, *run->staged_model,
                          log_as_artifact != 0);
    run->staged_model.reset();
  });
}

provtrack_status provtrack_log_dataset(provtrack_run* run, const char* label,
                                       int64_t num_samples, int64_t batch_size,
                                       int64_t num_batches, const char* source) {
  return guarded([&] {
    require(run, "run");
    provtrack::DatasetDescriptor d;
    d.label = str(label, "label");
    d.num_samples = optional_count(num_samples);
    d.batch_size = optional_count(batch_size);
    d.num_batches = optional_count(num_batches);
    if (source) d.source = source;
    run->handle.log_dataset(d);
  });
}

provtrack_status provtrack_log_current_execution_time(provtrack_run* run,
                                                      const char* label,
                                                      const char* context,
                                                      int64_t step) {
  return guarded([&] {
    require(run, "run");
    run->handle.log_current_execution_time(str(label, "label"), context_of(context), step);
  });
}

provtrack_status provtrack_log_system_metrics(provtrack_run* run, const char* context,
                                              int64_t step) {
  return guarded([&] {
    require(run, "run");
    run->handle.log_system_metrics(context_of(context), step);
  });
}

provtrack_status provtrack_log_carbon_metrics(provtrack_run* run, const char* context,
                                              int64_t step) {
  return guarded([&] {
    require(run, "run");
    run->handle.log_carbon_metrics(context_of(context), step);
  });
}

provtrack_status provtrack_set_carbon_intensity(provtrack_run* run, double g_per_kwh) {
  return guarded([&] {
    require(run, "run");
    run->handle.set_carbon_intensity(g_per_kwh);
  });
}

provtrack_status provtrack_cumulative_energy_kwh(const provtrack_run* run, double* out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    *out = run->handle.cumulative_energy_kwh();
  });
}

provtrack_status provtrack_end_run(provtrack_run* run, int create_graph, int create_svg,
                                   char* buffer, size_t buffer_size, size_t* needed) {
  return guarded([&] {
    require(run, "run");
    provtrack::EndRunResult result =
        run->handle.end_run(create_graph != 0, create_svg != 0);
    copy_out(result.document.string(), buffer, buffer_size, needed);
  });
}

provtrack_status provtrack_validate_file(const char* path, int64_t* error_count,
                                         int64_t* warning_count) {
  return guarded([&] {
    provtrack::ValidationReport report =
        provtrack::validate(provtrack::read_document(str(path, "path")));
    if (error_count) *error_count = static_cast<int64_t>(report.errors.size());
    if (warning_count) *warning_count = static_cast<int64_t>(report.warnings.size());
  });
}

provtrack_status provtrack_merge_files(const char* const* inputs, size_t input_count,
                                       const char* output, const char* collection_id) {
  return guarded([&] {
    if (input_count) require(inputs, "inputs");
    std::vector<std::filesystem::path> paths;
    for (size_t i = 0; i < input_count; ++i) paths.emplace_back(str(inputs[i], "input"));
    std::optional<std::string> id;
    if (collection_id) id = collection_id;
    provtrack::write_document(provtrack::merge_files(paths, id), str(output, "output"));
  });
}

provtrack_status provtrack_diff_runs(const char* left, const char* right,
                                     int full_series, int* differs) {
  return guarded([&] {
    require(differs, "differs");
    provtrack::RunDiff diff =
        provtrack::diff_runs(str(left, "left"), str(right, "right"), full_series != 0);
    *differs = diff.empty() ? 0 : 1;
  });
}

}  // extern "C"
