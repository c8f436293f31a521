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

#include <map>
#include <sstream>

#include "provtrack/graph_export.h"

namespace provtrack {

namespace {

QualifiedName vocab(std::string_view local) {
  return QualifiedName(kVocabPrefix, local);
}

QualifiedName user(std::string_view local) {
  return QualifiedName(kDefaultUserPrefix, local);
}

std::pair<QualifiedName, AttributeValue> type_attr(const char* type) {
  return {QualifiedName("prov", "type"), AttributeValue(type)};
}

std::string shape_text(const std::vector<std::int64_t>& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << ',';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

AttributeValue as_long(std::uint64_t v) {
  return AttributeValue(static_cast<std::int64_t>(v));
}

void add_artifact_attributes(const ArtifactRecord& a, Attributes& attrs) {
  attrs.emplace_back(vocab("label"), AttributeValue(a.label));
  attrs.emplace_back(vocab("path"), AttributeValue(a.path));
  if (a.context) attrs.emplace_back(vocab("context"), AttributeValue(a.context->str()));
  if (a.step) attrs.emplace_back(vocab("step"), AttributeValue(*a.step));
  attrs.emplace_back(vocab("timestamp"), AttributeValue::date_time_ms(a.timestamp_ms));
  attrs.emplace_back(vocab("size_bytes"), as_long(a.size_bytes));
  attrs.emplace_back(vocab("content_hash"), AttributeValue(a.content_hash));
}

class RelationSink {
 public:
  explicit RelationSink(ProvDocument& doc) : doc_(doc) {}

  void add(RelationKind kind, const QualifiedName& subject,
           const QualifiedName& object) {
    int n = counters_[kind]++;
    Relation rel;
    rel.kind = kind;
    rel.id = user(std::string(relation_kind_name(kind)) + "." + std::to_string(n));
    rel.subject = subject;
    rel.object = object;
    doc_.add_relation(std::move(rel));
  }

 private:
  ProvDocument& doc_;
  std::map<RelationKind, int> counters_;
};

}  // namespace

QualifiedName run_activity_id(const RunSnapshot& run) {
  return user(run.experiment_name + "_" + std::to_string(run.run_id) + "_rank" +
              std::to_string(run.rank));
}

ProvDocument build_provenance(const RunSnapshot& run) {
  ProvDocument doc = new_document(run.user_namespace);
  doc.add_prefix(kVocabPrefix, kVocabIri);
  RelationSink relations(doc);

  const QualifiedName activity = run_activity_id(run);
  doc.add_record(ProvRecord::activity(
      activity,
      {type_attr(record_types::kRun),
       {vocab("experiment"), AttributeValue(run.experiment_name)},
       {vocab("run_id"), AttributeValue(run.run_id)},
       {vocab("rank"), AttributeValue(run.rank)}},
      run.started_at_ms, run.ended_at_ms));

  const QualifiedName agent = user("agent");
  doc.add_record(ProvRecord::agent(
      agent, {{vocab("namespace"), AttributeValue(run.user_namespace)}}));
  relations.add(RelationKind::kWasAssociatedWith, activity, agent);

  const EnvironmentSnapshot& env = run.environment;
  Attributes env_attrs = {type_attr(record_types::kEnvironment),
                          {vocab("hostname"), AttributeValue(env.hostname)},
                          {vocab("os"), AttributeValue(env.os)},
                          {vocab("pid"), AttributeValue(env.pid)},
                          {vocab("command_line"), AttributeValue(env.command_line)}};
  for (const auto& [name, value] : env.variables) {
    env_attrs.emplace_back(vocab("env." + name), AttributeValue(value));
  }
  for (const auto& [name, version] : env.dependencies) {
    env_attrs.emplace_back(vocab("lib." + name), AttributeValue(version));
  }
  if (env.dependencies_missing) {
    env_attrs.emplace_back(vocab("dependencies_missing"), AttributeValue(true));
  }
  const QualifiedName environment = user("environment");
  doc.add_record(ProvRecord::entity(environment, std::move(env_attrs)));
  relations.add(RelationKind::kUsed, activity, environment);

  for (const auto& [key, value] : run.params) {
    QualifiedName id = user("param." + key);
    doc.add_record(ProvRecord::entity(
        id, {type_attr(record_types::kParameter),
             {vocab("key"), AttributeValue(key)},
             {vocab("value"), value}}));
    relations.add(RelationKind::kUsed, activity, id);
  }

  for (const auto& ds : run.datasets) {
    Attributes attrs = {type_attr(record_types::kDataset),
                        {vocab("label"), AttributeValue(ds.label)}};
    if (ds.num_samples) attrs.emplace_back(vocab("num_samples"), as_long(*ds.num_samples));
    if (ds.batch_size) attrs.emplace_back(vocab("batch_size"), as_long(*ds.batch_size));
    if (ds.num_batches) attrs.emplace_back(vocab("num_batches"), as_long(*ds.num_batches));
    if (ds.source) attrs.emplace_back(vocab("source"), AttributeValue(*ds.source));
    QualifiedName id = user("dataset." + ds.label);
    doc.add_record(ProvRecord::entity(id, std::move(attrs)));
    relations.add(RelationKind::kUsed, activity, id);
  }

  for (const auto& s : run.series) {
    std::string stem = spill_file_name(s.key, s.context);
    stem.resize(stem.size() - 4);  // ".tsv"
    QualifiedName id = user("metric." + stem);
    doc.add_record(ProvRecord::entity(
        id, {type_attr(record_types::kMetric),
             {vocab("key"), AttributeValue(s.key)},
             {vocab("context"), AttributeValue(s.context.str())},
             {vocab("count"), as_long(s.count)},
             {vocab("min"), AttributeValue(s.min)},
             {vocab("max"), AttributeValue(s.max)},
             {vocab("last"), AttributeValue(s.last)},
             {vocab("series_file"), AttributeValue(s.series_file)}}));
    relations.add(RelationKind::kWasGeneratedBy, id, activity);
  }

  std::map<std::string, int> artifact_occurrences;
  for (const auto& a : run.artifacts) {
    int n = artifact_occurrences[a.label]++;
    Attributes attrs = {type_attr(record_types::kArtifact)};
    add_artifact_attributes(a, attrs);
    QualifiedName id = user("artifact." + a.label + "." + std::to_string(n));
    doc.add_record(ProvRecord::entity(id, std::move(attrs)));
    relations.add(RelationKind::kWasGeneratedBy, id, activity);
  }

  std::map<std::string, int> version_counts;
  std::map<std::string, QualifiedName> previous_version;
  std::optional<QualifiedName> latest_version;
  for (const auto& v : run.model_versions) {
    int n = version_counts[v.label]++;
    Attributes attrs = {type_attr(record_types::kModelVersion),
                        {vocab("version"), AttributeValue(std::int64_t{n})}};
    add_artifact_attributes(v, attrs);
    QualifiedName id = user("model_version." + v.label + "." + std::to_string(n));
    doc.add_record(ProvRecord::entity(id, std::move(attrs)));
    relations.add(RelationKind::kWasGeneratedBy, id, activity);
    if (auto it = previous_version.find(v.label); it != previous_version.end()) {
      relations.add(RelationKind::kWasDerivedFrom, id, it->second);
    }
    previous_version[v.label] = id;
    latest_version = id;
  }

  if (run.final_model) {
    const ModelDescriptor& m = *run.final_model;
    Attributes attrs = {type_attr(record_types::kModel),
                        {vocab("label"), AttributeValue(m.label)},
                        {vocab("total_parameters"), as_long(m.total_parameters)},
                        {vocab("memory_bytes"), as_long(m.memory_bytes)}};
    if (m.gradient_memory_bytes) {
      attrs.emplace_back(vocab("gradient_memory_bytes"),
                         as_long(*m.gradient_memory_bytes));
    }
    attrs.emplace_back(vocab("layer_count"), as_long(m.layers.size()));
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
      const LayerInfo& layer = m.layers[i];
      std::string base = "layer." + std::to_string(i) + ".";
      attrs.emplace_back(vocab(base + "name"), AttributeValue(layer.name));
      attrs.emplace_back(vocab(base + "kind"), AttributeValue(layer.kind));
      attrs.emplace_back(vocab(base + "input_shape"),
                         AttributeValue(shape_text(layer.input_shape)));
      attrs.emplace_back(vocab(base + "output_shape"),
                         AttributeValue(shape_text(layer.output_shape)));
      attrs.emplace_back(vocab(base + "dtype"), AttributeValue(layer.dtype));
    }
    QualifiedName id = user("model." + m.label);
    doc.add_record(ProvRecord::entity(id, std::move(attrs)));
    relations.add(RelationKind::kWasGeneratedBy, id, activity);
    if (latest_version) {
      relations.add(RelationKind::kWasDerivedFrom, id, *latest_version);
    }
  }
  return doc;
}

}  // namespace provtrack
