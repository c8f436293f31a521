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

#include <atomic>
#include <charconv>
#include <fstream>
#include <iostream>

#include "provtrack/error.h"
#include "provtrack/graph_export.h"
#include "provtrack/prov_json.h"
#include "provtrack/qualified_name.h"
#include "run_state.h"

namespace provtrack {

namespace {

std::atomic<bool> g_run_active{false};

std::string escaped_experiment(std::string_view experiment) {
  return percent_escape(experiment, "_.-");
}

}  // namespace

std::string run_directory_name(std::string_view experiment, std::int64_t run_id) {
  return escaped_experiment(experiment) + "_" + std::to_string(run_id);
}

std::string document_file_name(std::string_view experiment, std::int64_t run_id,
                               std::int64_t rank) {
  return "provgraph_" + escaped_experiment(experiment) + "_" +
         std::to_string(run_id) + "_rank" + std::to_string(rank) + ".json";
}

std::int64_t next_run_id(const std::filesystem::path& save_dir,
                         std::string_view experiment) {
  std::error_code ec;
  if (!std::filesystem::is_directory(save_dir, ec)) return 0;
  const std::string prefix = escaped_experiment(experiment) + "_";
  std::int64_t next = 0;
  for (const auto& entry : std::filesystem::directory_iterator(save_dir, ec)) {
    if (!entry.is_directory(ec)) continue;
    std::string name = entry.path().filename().string();
    if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) {
      continue;
    }
    std::string_view digits(name.data() + prefix.size(), name.size() - prefix.size());
    std::int64_t id = 0;
    auto [ptr, err] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
    if (err != std::errc() || ptr != digits.data() + digits.size() || id < 0) {
      continue;
    }
    next = std::max(next, id + 1);
  }
  return next;
}

void RunHandle::State::warn(std::string message) {
  if (services.warning_sink) {
    services.warning_sink(message);
  } else {
    std::cerr << "provtrack: warning: " << message << "\n";
  }
  warnings.push_back(std::move(message));
}

void RunHandle::State::require_active(const char* operation) const {
  if (!active) {
    throw Error(ErrorCode::kIllegalState,
                std::string(operation) + " called on a run that has ended");
  }
}

void RunHandle::State::release() { g_run_active.store(false); }

RunSnapshot RunHandle::State::snapshot() const {
  RunSnapshot snap;
  snap.user_namespace = config.user_namespace;
  snap.experiment_name = config.experiment_name;
  snap.run_id = run_id;
  snap.rank = rank;
  snap.started_at_ms = started_at_ms;
  snap.ended_at_ms = ended_at_ms;
  snap.params = params;
  snap.datasets = datasets;
  for (const auto& s : series) {
    SeriesSummary summary = s->summary();
    summary.series_file =
        (std::filesystem::path("metrics") / s->spill_path().filename()).generic_string();
    snap.series.push_back(std::move(summary));
  }
  snap.artifacts = artifacts;
  snap.model_versions = model_versions;
  snap.final_model = final_model;
  snap.environment = environment;
  return snap;
}

RunHandle::RunHandle(std::unique_ptr<State> state) : state_(std::move(state)) {}
RunHandle::RunHandle(RunHandle&&) noexcept = default;

RunHandle& RunHandle::operator=(RunHandle&& other) noexcept {
  if (this != &other) {
    if (state_ && state_->active) state_->release();
    state_ = std::move(other.state_);
  }
  return *this;
}

RunHandle::~RunHandle() {
  if (!state_) return;
  std::lock_guard<std::mutex> lock(state_->mu);
  if (!state_->active) return;
  // Abandoned without end_run(): keep what was logged on disk.
  for (auto& s : state_->series) {
    try {
      if (!s->buffered().empty()) s->flush();
    } catch (const std::exception&) {
    }
  }
  state_->active = false;
  state_->release();
}

namespace {

RunHandle::State& live(const std::unique_ptr<RunHandle::State>& state) {
  if (!state) throw Error(ErrorCode::kIllegalState, "moved-from run handle");
  return *state;
}

}  // namespace

std::int64_t RunHandle::run_id() const { return live(state_).run_id; }
std::int64_t RunHandle::rank() const { return live(state_).rank; }
const RunConfig& RunHandle::config() const { return live(state_).config; }
const std::filesystem::path& RunHandle::run_dir() const { return live(state_).run_dir; }
bool RunHandle::is_sink() const { return live(state_).sink; }
std::int64_t RunHandle::started_at_ms() const { return live(state_).started_at_ms; }

bool RunHandle::active() const {
  if (!state_) return false;
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->active;
}

std::vector<std::string> RunHandle::warnings() const {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  return s.warnings;
}

RunSnapshot RunHandle::snapshot() const {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  return s.snapshot();
}

EndRunResult RunHandle::end_run(bool create_graph, bool create_svg) {
  State& s = live(state_);
  std::lock_guard<std::mutex> lock(s.mu);
  s.require_active("end_run");
  EndRunResult result;
  if (s.sink) {
    s.active = false;
    s.release();
    return result;
  }

  for (auto& series : s.series) series->flush();
  s.ended_at_ms = std::max(s.now(), s.started_at_ms);

  ProvDocument doc = build_provenance(s.snapshot());
  result.document =
      s.run_dir / document_file_name(s.config.experiment_name, s.run_id, s.rank);
  write_document(doc, result.document.string());

  if (create_graph || create_svg) {
    std::string dot = to_dot(doc);
    if (create_graph) {
      std::filesystem::path dot_path = result.document;
      dot_path.replace_extension(".dot");
      std::ofstream out(dot_path, std::ios::binary | std::ios::trunc);
      out << dot;
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + dot_path.string());
      result.dot = dot_path;
    }
    if (create_svg) {
      std::optional<std::string> svg;
      bool failed = false;
      try {
        svg = to_svg(dot, s.services.dot_executable);
      } catch (const Error& e) {
        s.warn(std::string("SVG export failed: ") + e.what());
        failed = true;
      }
      if (!svg) {
        if (!failed) {
          s.warn("layout tool '" + s.services.dot_executable +
                 "' not found; SVG skipped");
        }
      } else {
        std::filesystem::path svg_path = result.document;
        svg_path.replace_extension(".svg");
        std::ofstream out(svg_path, std::ios::binary | std::ios::trunc);
        out << *svg;
        if (!out) throw Error(ErrorCode::kIo, "cannot write " + svg_path.string());
        result.svg = svg_path;
      }
    }
  }

  s.active = false;
  s.release();
  return result;
}

RunHandle start_run(const RunConfig& input, RunServices services) {
  RunConfig config = input;
  if (config.user_namespace.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "user namespace must not be empty");
  }
  if (config.experiment_name.empty()) config.experiment_name = "default";
  if (config.save_dir.empty()) config.save_dir = "prov";
  if (config.save_after_n_logs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "save_after_n_logs must be >= 1");
  }
  if (config.rank && *config.rank < 0) {
    throw Error(ErrorCode::kInvalidArgument, "rank must be nonnegative");
  }

  bool expected = false;
  if (!g_run_active.compare_exchange_strong(expected, true)) {
    throw Error(ErrorCode::kIllegalState,
                "a run is already active in this process");
  }

  auto state = std::make_unique<RunHandle::State>();
  try {
    if (!services.clock) services.clock = std::make_shared<SystemClock>();
    if (!services.environment) {
      services.environment = std::make_shared<SystemEnvironmentProbe>();
    }
    if (!services.telemetry) {
      services.telemetry =
          std::make_shared<SystemTelemetryProvider>(config.save_dir);
    }
    state->config = config;
    state->services = std::move(services);

    std::vector<std::string> notes;
    EnvironmentVariables env;
    try {
      env = state->services.environment->variables();
    } catch (const std::exception& e) {
      notes.push_back(std::string("environment unavailable: ") + e.what());
    }
    state->rank = resolve_rank(config.rank, env, &notes);
    state->sink = !config.collect_all_processes && state->rank != 0;
    state->run_id = next_run_id(config.save_dir, config.experiment_name);

    if (!state->sink) {
      std::error_code ec;
      std::filesystem::create_directories(config.save_dir, ec);
      if (ec) {
        throw Error(ErrorCode::kIo, "cannot create " + config.save_dir.string() +
                                        ": " + ec.message());
      }
      // A directory that appeared since the scan belongs to someone else.
      while (true) {
        state->run_dir = config.save_dir /
                         run_directory_name(config.experiment_name, state->run_id);
        if (std::filesystem::create_directory(state->run_dir, ec)) break;
        if (ec) {
          throw Error(ErrorCode::kIo, "cannot create " +
                                          state->run_dir.string() + ": " +
                                          ec.message());
        }
        ++state->run_id;
      }
      std::filesystem::create_directory(state->run_dir / "artifacts", ec);
      std::filesystem::create_directory(state->run_dir / "metrics", ec);
      if (ec) {
        throw Error(ErrorCode::kIo, "cannot populate " + state->run_dir.string());
      }
      try {
        state->environment = capture_environment(
            *state->services.environment,
            state->services.environment_allowlist, &notes);
      } catch (const std::exception& e) {
        notes.push_back(std::string("environment capture failed: ") + e.what());
      }
    }
    for (auto& note : notes) state->warn(std::move(note));
    state->started_at_ms = state->now();
  } catch (...) {
    g_run_active.store(false);
    throw;
  }
  return RunHandle(std::move(state));
}

}  // namespace provtrack
