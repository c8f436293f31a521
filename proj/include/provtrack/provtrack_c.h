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

/* Flat C interface to provtrack, meant for foreign-function bindings.
 *
 * Every function returns a provtrack_status. PROVTRACK_OK is 0; the other
 * values equal the numeric provtrack::ErrorCode of the failure, so a binding
 * can map them 1:1 to exceptions. The message of the most recent failure on
 * the calling thread is available from provtrack_last_error().
 *
 * Strings are NUL-terminated UTF-8. Optional string arguments accept NULL.
 * Optional integers use -1 for "absent"; optional doubles use NaN.
 *
 * Exported symbols (kept in sync with the library by a test):
 *   provtrack_status_name
 *   provtrack_last_error
 *   provtrack_options_create
 *   provtrack_options_destroy
 *   provtrack_options_set_string
 *   provtrack_options_set_int
 *   provtrack_options_set_clock
 *   provtrack_options_set_telemetry
 *   provtrack_start_run
 *   provtrack_run_destroy
 *   provtrack_run_id
 *   provtrack_run_dir
 *   provtrack_log_param_string
 *   provtrack_log_param_int
 *   provtrack_log_param_double
 *   provtrack_log_param_bool
 *   provtrack_log_metric
 *   provtrack_log_artifact
 *   provtrack_save_model_version
 *   provtrack_model_begin
 *   provtrack_model_add_layer
 *   provtrack_log_model
 *   provtrack_log_dataset
 *   provtrack_log_current_execution_time
 *   provtrack_log_system_metrics
 *   provtrack_log_carbon_metrics
 *   provtrack_set_carbon_intensity
 *   provtrack_cumulative_energy_kwh
 *   provtrack_end_run
 *   provtrack_validate_file
 *   provtrack_merge_files
 *   provtrack_diff_runs
 */
#ifndef PROVTRACK_PROVTRACK_C_H_
#define PROVTRACK_PROVTRACK_C_H_

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define PROVTRACK_API __attribute__((visibility("default")))
#else
#define PROVTRACK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int provtrack_status;

enum {
  PROVTRACK_OK = 0,
  PROVTRACK_INVALID_ARGUMENT = 1,
  PROVTRACK_DUPLICATE_RECORD = 2,
  PROVTRACK_DUPLICATE_PARAM = 3,
  PROVTRACK_ILLEGAL_STATE = 4,
  PROVTRACK_IO = 5,
  PROVTRACK_NOT_FOUND = 6,
  PROVTRACK_PARSE = 7,
  PROVTRACK_INVALID_DOCUMENT = 8,
  PROVTRACK_EXPORT = 9,
  PROVTRACK_TOOL_UNAVAILABLE = 10,
  PROVTRACK_INTERNAL = 100,
};

typedef struct provtrack_options provtrack_options;
typedef struct provtrack_run provtrack_run;

/* Milliseconds since the Unix epoch. */
typedef int64_t (*provtrack_clock_fn)(void* user_data);

/* Fill the out-parameters and return 0, or return nonzero for "unavailable".
 * GPU fields left at -1 (or NaN for doubles) mean "no GPU". */
typedef int (*provtrack_system_sampler_fn)(void* user_data, uint64_t* memory_used,
                                           uint64_t* memory_total, uint64_t* disk_used,
                                           uint64_t* disk_total, double* cpu_percent,
                                           int64_t* gpu_memory_used,
                                           double* gpu_percent);
typedef int (*provtrack_energy_sampler_fn)(void* user_data, double* cpu_watts,
                                           double* gpu_watts, double* ram_watts);

PROVTRACK_API const char* provtrack_status_name(provtrack_status status);
/* Valid until the next failing call on the same thread. Empty after success. */
PROVTRACK_API const char* provtrack_last_error(void);

PROVTRACK_API provtrack_status provtrack_options_create(provtrack_options** out);
PROVTRACK_API void provtrack_options_destroy(provtrack_options* options);
/* Keys: user_namespace, experiment_name, save_dir, dot_executable. */
PROVTRACK_API provtrack_status provtrack_options_set_string(provtrack_options* options,
                                                            const char* key,
                                                            const char* value);
/* Keys: collect_all_processes (0/1), save_after_n_logs (0 = never spill),
 * rank (-1 = from the environment), fixed_environment (1 = capture a fixed,
 * host-independent environment instead of probing the system). */
PROVTRACK_API provtrack_status provtrack_options_set_int(provtrack_options* options,
                                                         const char* key, int64_t value);
PROVTRACK_API provtrack_status provtrack_options_set_clock(provtrack_options* options,
                                                           provtrack_clock_fn clock,
                                                           void* user_data);
/* Either sampler may be NULL; that half then reports "unavailable". */
PROVTRACK_API provtrack_status provtrack_options_set_telemetry(
    provtrack_options* options, provtrack_system_sampler_fn system,
    provtrack_energy_sampler_fn energy, void* user_data);

PROVTRACK_API provtrack_status provtrack_start_run(const provtrack_options* options,
                                                   provtrack_run** out);
/* Releases the handle. A run that was not ended keeps its logged files. */
PROVTRACK_API void provtrack_run_destroy(provtrack_run* run);
PROVTRACK_API provtrack_status provtrack_run_id(const provtrack_run* run, int64_t* out);
/* Copies the NUL-terminated path into `buffer`; `needed` receives the size
 * including the terminator. Too small a buffer gives INVALID_ARGUMENT. */
PROVTRACK_API provtrack_status provtrack_run_dir(const provtrack_run* run, char* buffer,
                                                 size_t buffer_size, size_t* needed);

PROVTRACK_API provtrack_status provtrack_log_param_string(provtrack_run* run,
                                                          const char* key,
                                                          const char* value);
PROVTRACK_API provtrack_status provtrack_log_param_int(provtrack_run* run, const char* key,
                                                       int64_t value);
PROVTRACK_API provtrack_status provtrack_log_param_double(provtrack_run* run,
                                                          const char* key, double value);
PROVTRACK_API provtrack_status provtrack_log_param_bool(provtrack_run* run, const char* key,
                                                        int value);
PROVTRACK_API provtrack_status provtrack_log_metric(provtrack_run* run, const char* key,
                                                    double value, const char* context,
                                                    int64_t step);
/* `context` may be NULL; `step` -1 for none. */
PROVTRACK_API provtrack_status provtrack_log_artifact(provtrack_run* run, const char* label,
                                                      const char* path,
                                                      const char* context, int64_t step);
PROVTRACK_API provtrack_status provtrack_save_model_version(provtrack_run* run,
                                                            const char* label,
                                                            const void* data, size_t size,
                                                            const char* context,
                                                            int64_t step);
/* Stages a model descriptor; layers are appended with
 * provtrack_model_add_layer and the whole is recorded by provtrack_log_model. */
PROVTRACK_API provtrack_status provtrack_model_begin(provtrack_run* run, const char* label,
                                                     uint64_t total_parameters,
                                                     uint64_t memory_bytes,
                                                     int64_t gradient_memory_bytes);
PROVTRACK_API provtrack_status provtrack_model_add_layer(
    provtrack_run* run, const char* name, const char* kind, const int64_t* input_shape,
    size_t input_rank, const int64_t* output_shape, size_t output_rank, const char* dtype);
PROVTRACK_API provtrack_status provtrack_log_model(provtrack_run* run, int log_as_artifact);
PROVTRACK_API provtrack_status provtrack_log_dataset(provtrack_run* run, const char* label,
                                                     int64_t num_samples, int64_t batch_size,
                                                     int64_t num_batches,
                                                     const char* source);
PROVTRACK_API provtrack_status provtrack_log_current_execution_time(provtrack_run* run,
                                                                    const char* label,
                                                                    const char* context,
                                                                    int64_t step);
PROVTRACK_API provtrack_status provtrack_log_system_metrics(provtrack_run* run,
                                                            const char* context,
                                                            int64_t step);
PROVTRACK_API provtrack_status provtrack_log_carbon_metrics(provtrack_run* run,
                                                            const char* context,
                                                            int64_t step);
PROVTRACK_API provtrack_status provtrack_set_carbon_intensity(provtrack_run* run,
                                                              double g_per_kwh);
PROVTRACK_API provtrack_status provtrack_cumulative_energy_kwh(const provtrack_run* run,
                                                               double* out);
/* Writes the document path (empty for discarding ranks) like
 * provtrack_run_dir. `buffer` may be NULL when the path is not wanted. */
PROVTRACK_API provtrack_status provtrack_end_run(provtrack_run* run, int create_graph,
                                                 int create_svg, char* buffer,
                                                 size_t buffer_size, size_t* needed);

PROVTRACK_API provtrack_status provtrack_validate_file(const char* path,
                                                       int64_t* error_count,
                                                       int64_t* warning_count);
/* `collection_id` may be NULL for the default. */
PROVTRACK_API provtrack_status provtrack_merge_files(const char* const* inputs,
                                                     size_t input_count,
                                                     const char* output,
                                                     const char* collection_id);
/* `differs` receives 1 when the runs differ, else 0. */
PROVTRACK_API provtrack_status provtrack_diff_runs(const char* left, const char* right,
                                                   int full_series, int* differs);

#ifdef __cplusplus
}
#endif

#endif /* PROVTRACK_PROVTRACK_C_H_ */
