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

#include "cli.h"

#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "provtrack/error.h"
#include "provtrack/graph_export.h"
#include "provtrack/prov_json.h"
#include "provtrack/toolkit.h"

namespace provtrack::cli {

namespace {

int status_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kIo:
    case ErrorCode::kParse:
    case ErrorCode::kNotFound:
      return kIoError;
    case ErrorCode::kToolUnavailable:
      return kNoTool;
    default:
      return kFindings;
  }
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << bytes;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

struct MergeArgs {
  std::vector<std::string> inputs;
  std::string output;
  std::string collection_id;
};

struct DiffArgs {
  std::string left, right;
  bool json = false;
  bool full_series = false;
  std::string json_out;
};

struct ConvertArgs {
  std::string input;
  std::string to;
  std::string output;
  std::string dot_executable = "dot";
};

struct MetricsArgs {
  std::string run_dir;
  std::vector<std::string> keys;
  std::vector<std::string> contexts;
  bool csv = false;
  bool plot = false;
  std::string output;
};

int do_merge(const MergeArgs& a, std::ostream& out) {
  std::vector<std::filesystem::path> paths(a.inputs.begin(), a.inputs.end());
  std::optional<std::string> id;
  if (!a.collection_id.empty()) id = a.collection_id;
  ProvDocument merged = merge_files(paths, id);
  ValidationReport report = validate(merged);
  if (!report.ok()) {
    out << report.to_string();
    return kFindings;
  }
  write_document(merged, a.output);
  out << "merged " << paths.size() << " documents into " << a.output << "\n";
  return kOk;
}

int do_diff(const DiffArgs& a, std::ostream& out) {
  RunDiff diff = diff_runs(a.left, a.right, a.full_series);
  std::string json = render_diff_json(diff);
  out << (a.json ? json : render_diff_text(diff));
  if (!a.json_out.empty()) write_file(a.json_out, json);
  return diff.empty() ? kOk : kFindings;
}

int do_validate(const std::string& path, std::ostream& out) {
  std::vector<Issue> parse_warnings;
  ProvDocument doc = read_document(path, &parse_warnings);
  ValidationReport report = validate(doc);
  report.warnings.insert(report.warnings.begin(), parse_warnings.begin(),
                         parse_warnings.end());
  out << report.to_string();
  out << (report.ok() ? "valid" : "invalid") << ": " << report.errors.size()
      << " errors, " << report.warnings.size() << " warnings\n";
  return report.ok() ? kOk : kFindings;
}

int do_convert(const ConvertArgs& a, std::ostream& out, std::ostream& err) {
  ProvDocument doc = read_document(a.input);
  ValidationReport report = validate(doc);
  if (!report.ok()) {
    err << report.to_string();
    return kFindings;
  }
  std::string dot = to_dot(doc);
  if (a.to == "dot") {
    write_file(a.output, dot);
  } else {
    std::optional<std::string> svg = to_svg(dot, a.dot_executable);
    if (!svg) {
      err << "provtrack: layout tool '" << a.dot_executable
          << "' not found; install Graphviz or pass --dot-executable\n";
      return kNoTool;
    }
    write_file(a.output, *svg);
  }
  out << "wrote " << a.output << "\n";
  return kOk;
}

int do_metrics(const MetricsArgs& a, std::ostream& out, std::ostream& err) {
  if (a.csv == a.plot) {
    err << "provtrack: pass exactly one of --csv and --plot\n";
    return kIoError;
  }
  if (!a.contexts.empty() && a.contexts.size() != 1 &&
      a.contexts.size() != a.keys.size()) {
    err << "provtrack: give one --context, or one per --key\n";
    return kIoError;
  }
  std::error_code ec;
  if (!std::filesystem::is_directory(a.run_dir, ec)) {
    err << "provtrack: run directory " << a.run_dir << " not found\n";
    return kIoError;
  }
  std::vector<std::pair<std::string, Context>> series;
  for (std::size_t i = 0; i < a.keys.size(); ++i) {
    Context ctx = a.contexts.empty()      ? Context::training()
                  : a.contexts.size() == 1 ? Context::from_string(a.contexts[0])
                                           : Context::from_string(a.contexts[i]);
    series.emplace_back(a.keys[i], ctx);
  }
  try {
    if (a.csv) {
      if (series.size() != 1) {
        err << "provtrack: --csv exports a single series\n";
        return kIoError;
      }
      std::optional<std::filesystem::path> output;
      if (!a.output.empty()) output = a.output;
      auto path = export_metric_csv(a.run_dir, series[0].first, series[0].second, output);
      out << "wrote " << path.string() << "\n";
    } else {
      if (a.output.empty()) {
        err << "provtrack: --plot needs --output\n";
        return kIoError;
      }
      auto path = plot_metrics(a.run_dir, series, a.output);
      out << "wrote " << path.string() << "\n";
    }
  } catch (const Error& e) {
    // The run directory exists, so a missing file means an unknown series.
    if (e.code() == ErrorCode::kNotFound) {
      err << "provtrack: " << e.what() << "\n";
      return kFindings;
    }
    throw;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inspect, merge and compare provenance of training runs", "provtrack"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "provtrack 0.1.0");

  MergeArgs merge;
  auto* merge_cmd = app.add_subcommand("merge", "Link per-rank documents into one collection");
  merge_cmd->add_option("inputs", merge.inputs, "PROV-JSON files, one per rank")
      ->required()->check(CLI::ExistingFile);
  merge_cmd->add_option("-o,--output", merge.output, "Merged document")->required();
  merge_cmd->add_option("--collection-id", merge.collection_id,
                        "Collection entity id (default <experiment>_run<id>_collection)");

  DiffArgs diff;
  auto* diff_cmd = app.add_subcommand("diff", "Compare two run directories");
  diff_cmd->add_option("left", diff.left)->required();
  diff_cmd->add_option("right", diff.right)->required();
  diff_cmd->add_flag("--json", diff.json, "Print the diff as JSON");
  diff_cmd->add_flag("--full-series", diff.full_series,
                     "Compare logged samples, not only summaries");
  diff_cmd->add_option("--json-out", diff.json_out, "Also write the JSON diff here");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a PROV-JSON document");
  validate_cmd->add_option("path", validate_path)->required();

  ConvertArgs convert;
  auto* convert_cmd = app.add_subcommand("convert", "Render a document as DOT or SVG");
  convert_cmd->add_option("path", convert.input)->required();
  convert_cmd->add_option("--to", convert.to)->required()->check(
      CLI::IsMember({"dot", "svg"}));
  convert_cmd->add_option("-o,--output", convert.output)->required();
  convert_cmd->add_option("--dot-executable", convert.dot_executable,
                          "Graphviz layout program");

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Export or plot metric series");
  metrics_cmd->add_option("run_dir", metrics.run_dir)->required();
  metrics_cmd->add_option("--key", metrics.keys, "Metric key (repeatable)")->required();
  metrics_cmd->add_option("--context", metrics.contexts,
                          "Context, once or once per key (default training)");
  metrics_cmd->add_flag("--csv", metrics.csv);
  metrics_cmd->add_flag("--plot", metrics.plot);
  metrics_cmd->add_option("-o,--output", metrics.output);

  std::vector<const char*> argv{"provtrack"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoError;
  }

  try {
    if (*merge_cmd) return do_merge(merge, out);
    if (*diff_cmd) return do_diff(diff, out);
    if (*validate_cmd) return do_validate(validate_path, out);
    if (*convert_cmd) return do_convert(convert, out, err);
    if (*metrics_cmd) return do_metrics(metrics, out, err);
  } catch (const Error& e) {
    err << "provtrack: " << e.what() << "\n";
    return status_for(e);
  } catch (const std::exception& e) {
    err << "provtrack: " << e.what() << "\n";
    return kIoError;
  }
  return kIoError;
}

}  // namespace provtrack::cli
