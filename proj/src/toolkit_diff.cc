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
#include <charconv>
#include <map>
#include <sstream>

#include <json.hpp>

#include "provtrack/error.h"
#include "provtrack/graph_export.h"
#include "provtrack/prov_json.h"
#include "provtrack/toolkit.h"

namespace provtrack {

namespace {

QualifiedName vocab(std::string_view local) {
  return QualifiedName(kVocabPrefix, local);
}

const AttributeValue& require(const ProvRecord& r, std::string_view key) {
  const AttributeValue* v = r.find(vocab(key));
  if (!v) {
    throw Error(ErrorCode::kParse,
                r.id.str() + " lacks " + std::string(kVocabPrefix) + ":" +
                    std::string(key));
  }
  return *v;
}

// Rank parsed from `provgraph_<...>_rank<r>.json`, or -1.
std::int64_t rank_of(const std::string& name) {
  auto pos = name.rfind("_rank");
  if (pos == std::string::npos || name.size() < 5) return -1;
  std::string_view digits(name);
  digits = digits.substr(pos + 5, name.size() - pos - 5 - 5);
  std::int64_t rank = -1;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), rank);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return -1;
  return rank;
}

std::string stats_label(const std::string& key, const Context& context) {
  return key + " [" + context.str() + "]";
}

nlohmann::ordered_json typed(const AttributeValue& v) {
  return {{"$", v.text()}, {"type", v.type()}};
}

nlohmann::ordered_json stats_json(const std::optional<MetricStats>& s) {
  if (!s) return nullptr;
  return {{"count", s->count}, {"min", s->min}, {"max", s->max}, {"last", s->last}};
}

bool same_samples(const RunView& left, const RunView& right,
                  const std::string& key, const Context& context) {
  auto a = read_spill_file(series_path(left.run_dir, key, context));
  auto b = read_spill_file(series_path(right.run_dir, key, context));
  // Wall-clock timestamps always differ between runs; compare what was logged.
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const MetricSample& x, const MetricSample& y) {
                      return x.step == y.step && x.value == y.value;
                    });
}

}  // namespace

bool RunDiff::empty() const {
  return params_added.empty() && params_removed.empty() && params_changed.empty() &&
         metrics.empty() && artifacts_only_left.empty() &&
         artifacts_only_right.empty() && artifacts_hash_mismatch.empty();
}

std::filesystem::path find_run_document(const std::filesystem::path& run_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(run_dir, ec)) {
    throw Error(ErrorCode::kNotFound, "run directory " + run_dir.string() + " not found");
  }
  std::optional<std::pair<std::int64_t, std::string>> best;
  for (const auto& entry : std::filesystem::directory_iterator(run_dir, ec)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("provgraph_", 0) != 0 || entry.path().extension() != ".json") {
      continue;
    }
    std::int64_t rank = rank_of(name);
    std::pair<std::int64_t, std::string> key{
        rank < 0 ? std::numeric_limits<std::int64_t>::max() : rank, name};
    if (!best || key < *best) best = key;
  }
  if (!best) {
    throw Error(ErrorCode::kNotFound,
                "no provenance document in " + run_dir.string() +
                    " (run not ended?)");
  }
  return run_dir / best->second;
}

RunView load_run_view(const std::filesystem::path& run_dir) {
  ProvDocument doc = read_document(find_run_document(run_dir).string());
  RunView view;
  view.run_dir = run_dir;
  const QualifiedName type_key("prov", "type");
  for (const auto& r : doc.records()) {
    if (r.kind != RecordKind::kEntity) continue;
    const AttributeValue* t = r.find(type_key);
    if (!t) continue;
    const std::string type = t->text();
    if (type == record_types::kParameter) {
      view.params.emplace_back(require(r, "key").text(), require(r, "value"));
    } else if (type == record_types::kMetric) {
      MetricStats stats;
      stats.count = static_cast<std::size_t>(require(r, "count").as_number());
      stats.min = require(r, "min").as_number();
      stats.max = require(r, "max").as_number();
      stats.last = require(r, "last").as_number();
      view.metrics.push_back(
          {{require(r, "key").text(), Context::from_string(require(r, "context").text())},
           stats});
    } else if (type == record_types::kArtifact || type == record_types::kModelVersion) {
      view.artifacts.emplace_back(require(r, "path").text(),
                                  require(r, "content_hash").text());
    }
  }
  std::sort(view.params.begin(), view.params.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::sort(view.metrics.begin(), view.metrics.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::sort(view.artifacts.begin(), view.artifacts.end());
  return view;
}

RunDiff diff_views(const RunView& left, const RunView& right, bool full_series) {
  RunDiff diff;

  std::map<std::string, const AttributeValue*> lp, rp;
  for (const auto& [k, v] : left.params) lp[k] = &v;
  for (const auto& [k, v] : right.params) rp[k] = &v;
  for (const auto& [k, v] : lp) {
    auto it = rp.find(k);
    if (it == rp.end()) {
      diff.params_removed.push_back(k);
    } else if (!(*v == *it->second)) {
      diff.params_changed.push_back({k, *v, *it->second});
    }
  }
  for (const auto& [k, v] : rp) {
    if (!lp.count(k)) diff.params_added.push_back(k);
  }

  std::map<std::pair<std::string, Context>, std::pair<std::optional<MetricStats>,
                                                      std::optional<MetricStats>>>
      metrics;
  for (const auto& [id, s] : left.metrics) metrics[id].first = s;
  for (const auto& [id, s] : right.metrics) metrics[id].second = s;
  for (const auto& [id, sides] : metrics) {
    const auto& [l, r] = sides;
    MetricDiff m;
    m.key = id.first;
    m.context = id.second;
    m.left = l;
    m.right = r;
    if (l && r) m.delta_of_last = r->last - l->last;
    if (l == r) {
      if (!full_series || same_samples(left, right, id.first, id.second)) continue;
      m.samples_differ = true;
    }
    diff.metrics.push_back(std::move(m));
  }

  std::map<std::string, std::pair<std::optional<std::string>, std::optional<std::string>>>
      artifacts;
  for (const auto& [path, hash] : left.artifacts) artifacts[path].first = hash;
  for (const auto& [path, hash] : right.artifacts) artifacts[path].second = hash;
  for (const auto& [path, sides] : artifacts) {
    if (!sides.second) {
      diff.artifacts_only_left.push_back(path);
    } else if (!sides.first) {
      diff.artifacts_only_right.push_back(path);
    } else if (*sides.first != *sides.second) {
      diff.artifacts_hash_mismatch.push_back(path);
    }
  }
  return diff;
}

RunDiff diff_runs(const std::filesystem::path& left,
                  const std::filesystem::path& right, bool full_series) {
  return diff_views(load_run_view(left), load_run_view(right), full_series);
}

std::string render_diff_text(const RunDiff& diff) {
  if (diff.empty()) return "no differences\n";
  std::ostringstream out;
  for (const auto& k : diff.params_added) out << "+ param " << k << "\n";
  for (const auto& k : diff.params_removed) out << "- param " << k << "\n";
  for (const auto& c : diff.params_changed) {
    out << "~ param " << c.key << ": " << c.left.text() << " -> " << c.right.text()
        << "\n";
  }
  for (const auto& m : diff.metrics) {
    std::string label = stats_label(m.key, m.context);
    if (!m.left) {
      out << "+ metric " << label << "\n";
    } else if (!m.right) {
      out << "- metric " << label << "\n";
    } else if (m.samples_differ) {
      out << "~ metric " << label << ": samples differ\n";
    } else {
      out << "~ metric " << label << ": count " << m.left->count << " -> "
          << m.right->count << ", last " << format_double(m.left->last) << " -> "
          << format_double(m.right->last) << " (delta "
          << format_double(*m.delta_of_last) << ")\n";
    }
  }
  for (const auto& p : diff.artifacts_only_left) out << "< artifact " << p << "\n";
  for (const auto& p : diff.artifacts_only_right) out << "> artifact " << p << "\n";
  for (const auto& p : diff.artifacts_hash_mismatch) {
    out << "! artifact " << p << ": content differs\n";
  }
  return out.str();
}

std::string render_diff_json(const RunDiff& diff) {
  nlohmann::ordered_json j;
  j["empty"] = diff.empty();
  auto& params = j["params"];
  params["added"] = diff.params_added;
  params["removed"] = diff.params_removed;
  params["changed"] = nlohmann::ordered_json::array();
  for (const auto& c : diff.params_changed) {
    params["changed"].push_back(
        {{"key", c.key}, {"left", typed(c.left)}, {"right", typed(c.right)}});
  }
  j["metrics"] = nlohmann::ordered_json::array();
  for (const auto& m : diff.metrics) {
    nlohmann::ordered_json entry = {{"key", m.key},
                                    {"context", m.context.str()},
                                    {"left", stats_json(m.left)},
                                    {"right", stats_json(m.right)}};
    entry["delta_of_last"] =
        m.delta_of_last ? nlohmann::ordered_json(*m.delta_of_last) : nullptr;
    entry["samples_differ"] = m.samples_differ;
    j["metrics"].push_back(std::move(entry));
  }
  j["artifacts"] = {{"only_left", diff.artifacts_only_left},
                    {"only_right", diff.artifacts_only_right},
                    {"hash_mismatch", diff.artifacts_hash_mismatch}};
  return j.dump(2) + "\n";
}

}  // namespace provtrack
