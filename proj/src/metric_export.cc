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

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "provtrack/attribute_value.h"
#include "provtrack/error.h"
#include "provtrack/graph_export.h"

namespace provtrack {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 500;
constexpr double kLeft = 80;
constexpr double kRight = 720;
constexpr double kTop = 40;
constexpr double kBottom = 440;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Range {
  double lo = 0;
  double hi = 0;

  // Degenerate ranges are widened so scaling never divides by zero.
  Range padded() const {
    if (hi > lo) return *this;
    return {lo - 0.5, hi + 0.5};
  }
};

Range value_range(const std::vector<MetricSample>& samples) {
  Range r{samples.front().value, samples.front().value};
  for (const auto& s : samples) {
    r.lo = std::min(r.lo, s.value);
    r.hi = std::max(r.hi, s.value);
  }
  return r;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string line(double x1, double y1, double x2, double y2,
                 std::string_view cls, std::string_view color = "#000000") {
  return "<line class=\"" + std::string(cls) + "\" x1=\"" + fixed(x1) +
         "\" y1=\"" + fixed(y1) + "\" x2=\"" + fixed(x2) + "\" y2=\"" +
         fixed(y2) + "\" stroke=\"" + std::string(color) + "\"/>\n";
}

std::string text(double x, double y, std::string_view anchor,
                 std::string_view body, std::string_view color = "#000000") {
  return "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" +
         std::string(anchor) + "\" fill=\"" + std::string(color) + "\">" +
         xml_escape(body) + "</text>\n";
}

}  // namespace

std::filesystem::path series_path(const std::filesystem::path& run_dir,
                                  std::string_view key, const Context& context) {
  return run_dir / "metrics" / spill_file_name(key, context);
}

std::filesystem::path export_metric_csv(const std::filesystem::path& run_dir,
                                        std::string_view key,
                                        const Context& context,
                                        std::optional<std::filesystem::path> output) {
  std::filesystem::path source = series_path(run_dir, key, context);
  if (!std::filesystem::exists(source)) {
    throw Error(ErrorCode::kNotFound, "no series '" + std::string(key) +
                                          "' in context '" + context.str() +
                                          "' under " + run_dir.string());
  }
  std::vector<MetricSample> samples = read_spill_file(source);
  std::filesystem::path target =
      output ? *output : std::filesystem::path(source).replace_extension(".csv");
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + target.string());
  out << "step,timestamp,value\n";
  for (const auto& s : samples) {
    out << s.step << ',' << s.timestamp_ms << ',' << format_double(s.value) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + target.string());
  return target;
}

std::string render_plot_svg(const std::vector<PlotSeries>& series) {
  if (series.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "nothing to plot");
  }
  for (const auto& s : series) {
    if (s.samples.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "series '" + s.name + "' has no samples");
    }
  }

  Range steps{static_cast<double>(series[0].samples[0].step),
              static_cast<double>(series[0].samples[0].step)};
  for (const auto& s : series) {
    for (const auto& p : s.samples) {
      steps.lo = std::min(steps.lo, static_cast<double>(p.step));
      steps.hi = std::max(steps.hi, static_cast<double>(p.step));
    }
  }
  steps = steps.padded();

  std::vector<Range> ranges;
  for (const auto& s : series) ranges.push_back(value_range(s.samples));
  bool dual = series.size() == 2 &&
              (ranges[0].hi < ranges[1].lo || ranges[1].hi < ranges[0].lo);
  // axis_of[i]: 0 = left, 1 = right
  std::vector<int> axis_of(series.size(), 0);
  std::vector<Range> axes;
  if (dual) {
    axes = {ranges[0].padded(), ranges[1].padded()};
    axis_of[1] = 1;
  } else {
    Range shared = ranges[0];
    for (const auto& r : ranges) {
      shared.lo = std::min(shared.lo, r.lo);
      shared.hi = std::max(shared.hi, r.hi);
    }
    axes = {shared.padded()};
  }

  auto sx = [&](double step) {
    return kLeft + (step - steps.lo) / (steps.hi - steps.lo) * (kRight - kLeft);
  };
  auto sy = [&](double v, const Range& r) {
    return kBottom - (v - r.lo) / (r.hi - r.lo) * (kBottom - kTop);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
      << static_cast<int>(kWidth) << ' ' << static_cast<int>(kHeight)
      << "\" width=\"" << static_cast<int>(kWidth) << "\" height=\""
      << static_cast<int>(kHeight) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"#ffffff\"/>\n";

  out << line(kLeft, kBottom, kRight, kBottom, "axis x-axis");
  out << text((kLeft + kRight) / 2, kHeight - 15, "middle", "step");
  out << text(kLeft, kBottom + 18, "middle", format_double(steps.lo));
  out << text(kRight, kBottom + 18, "middle", format_double(steps.hi));

  for (std::size_t a = 0; a < axes.size(); ++a) {
    double x = a == 0 ? kLeft : kRight;
    const char* color = dual ? kPalette[a] : "#000000";
    const char* anchor = a == 0 ? "end" : "start";
    double label_x = a == 0 ? x - 6 : x + 6;
    out << line(x, kTop, x, kBottom, "axis y-axis", color);
    out << text(label_x, kBottom, anchor, format_double(axes[a].lo), color);
    out << text(label_x, kTop + 4, anchor, format_double(axes[a].hi), color);
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    const Range& r = axes[axis_of[i]];
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < series[i].samples.size(); ++j) {
      const auto& p = series[i].samples[j];
      if (j) out << ' ';
      out << fixed(sx(static_cast<double>(p.step))) << ','
          << fixed(sy(p.value, r));
    }
    out << "\"/>\n";
    out << text(kLeft + 10 + 180.0 * static_cast<double>(i), kTop - 15, "start",
                series[i].name, color);
  }
  out << "</svg>\n";
  return out.str();
}

std::filesystem::path plot_metrics(
    const std::filesystem::path& run_dir,
    const std::vector<std::pair<std::string, Context>>& series_list,
    const std::filesystem::path& output) {
  if (series_list.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no series selected for plotting");
  }
  std::vector<PlotSeries> plot;
  for (const auto& [key, context] : series_list) {
    std::filesystem::path path = series_path(run_dir, key, context);
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::kNotFound, "no series '" + key + "' in context '" +
                                            context.str() + "' under " +
                                            run_dir.string());
    }
    plot.push_back({key + " (" + context.str() + ")", read_spill_file(path)});
  }
  std::string svg = render_plot_svg(plot);
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + output.string());
  out << svg;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + output.string());
  return output;
}

}  // namespace provtrack
