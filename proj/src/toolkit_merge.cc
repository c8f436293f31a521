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

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "provtrack/error.h"
#include "provtrack/graph_export.h"
#include "provtrack/prov_json.h"
#include "provtrack/toolkit.h"

namespace provtrack {

namespace {

constexpr std::string_view kQualifiedNameType = "prov:QUALIFIED_NAME";
constexpr std::string_view kMergeIri = "urn:provtrack:merge:";

const QualifiedName& prov_type() {
  static const QualifiedName name("prov", "type");
  return name;
}

QualifiedName vocab(std::string_view local) {
  return QualifiedName(kVocabPrefix, local);
}

bool is_reserved(std::string_view prefix) {
  return prefix == kProvPrefix || prefix == kXsdPrefix;
}

std::string type_text(const ProvRecord& record) {
  const AttributeValue* t = record.find(prov_type());
  return t ? t->text() : std::string();
}

// Prefix renames chosen for one input.
class Renamer {
 public:
  void add(std::string from, std::string to) {
    if (from != to) map_.emplace(std::move(from), std::move(to));
  }

  QualifiedName apply(const QualifiedName& name) const {
    auto it = map_.find(name.prefix());
    return it == map_.end() ? name : name.with_prefix(it->second);
  }

  AttributeValue apply(const AttributeValue& value) const {
    if (value.type() != kQualifiedNameType || map_.empty()) return value;
    const std::string& text = value.text();
    auto colon = text.find(':');
    if (colon == std::string::npos) return value;
    auto it = map_.find(text.substr(0, colon));
    if (it == map_.end()) return value;
    bool known = false;
    return AttributeValue::from_typed_text(it->second + text.substr(colon),
                                           value.type(), &known);
  }

  Attributes apply(const Attributes& attributes) const {
    Attributes out;
    out.reserve(attributes.size());
    for (const auto& [key, value] : attributes) {
      out.emplace_back(apply(key), apply(value));
    }
    return out;
  }

 private:
  std::map<std::string, std::string> map_;
};

Renamer bind_prefixes(const ProvDocument& input, std::size_t k,
                      ProvDocument& merged) {
  Renamer renamer;
  for (const auto& [prefix, iri] : input.prefixes()) {
    if (is_reserved(prefix)) continue;
    auto existing = merged.prefixes().find(prefix);
    if (existing == merged.prefixes().end()) {
      merged.add_prefix(prefix, iri);
      continue;
    }
    // The shared vocabulary is the same namespace in every input.
    if (prefix == kVocabPrefix && existing->second == iri) continue;
    if (k == 0) continue;
    std::string renamed = prefix + "_r" + std::to_string(k);
    for (int n = 1; merged.has_prefix(renamed); ++n) {
      renamed = prefix + "_r" + std::to_string(k) + "_" + std::to_string(n);
    }
    // Same IRI would make the renamed ids denote the originals again.
    std::string renamed_iri =
        existing->second == iri ? iri + "r" + std::to_string(k) + "/" : iri;
    merged.add_prefix(renamed, renamed_iri);
    renamer.add(prefix, renamed);
  }
  return renamer;
}

const ProvRecord& find_run_activity(const MergeInput& input) {
  const ProvRecord* only = nullptr;
  const ProvRecord* marked = nullptr;
  std::size_t activities = 0;
  for (const auto& r : input.document.records()) {
    if (r.kind != RecordKind::kActivity) continue;
    ++activities;
    only = &r;
    if (type_text(r) == record_types::kRun && (!marked || r.id < marked->id)) {
      marked = &r;
    }
  }
  if (marked) return *marked;
  if (activities == 1) return *only;
  throw Error(ErrorCode::kInvalidArgument,
              input.name + ": no run activity to summarize");
}

std::string default_collection_local(const ProvRecord& run) {
  const AttributeValue* experiment = run.find(vocab("experiment"));
  const AttributeValue* run_id = run.find(vocab("run_id"));
  if (!experiment || !run_id) return "merged_collection";
  return experiment->text() + "_run" + run_id->text() + "_collection";
}

std::string describe(const std::filesystem::path& path) {
  return path.string();
}

}  // namespace

ProvDocument merge_documents(const std::vector<MergeInput>& inputs,
                             const std::optional<std::string>& collection_id) {
  if (inputs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "merge needs at least one input");
  }
  std::vector<const ProvRecord*> runs;
  for (const auto& input : inputs) runs.push_back(&find_run_activity(input));

  ProvDocument merged;
  std::vector<Renamer> renamers;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const ProvDocument& doc = inputs[k].document;
    Renamer renamer = bind_prefixes(doc, k, merged);
    DocumentBuilder builder(merged);
    for (const auto& r : doc.records()) {
      ProvRecord copy = r;
      copy.id = renamer.apply(r.id);
      copy.attributes = renamer.apply(r.attributes);
      builder.add_record(std::move(copy));
    }
    for (const auto& rel : doc.relations()) {
      Relation copy = rel;
      copy.id = renamer.apply(rel.id);
      copy.subject = renamer.apply(rel.subject);
      copy.object = renamer.apply(rel.object);
      copy.attributes = renamer.apply(rel.attributes);
      builder.add_relation(std::move(copy));
    }
    for (const auto& [name, text] : doc.extra_sections()) {
      if (!merged.extra_sections().count(name)) merged.set_extra_section(name, text);
    }
    renamers.push_back(std::move(renamer));
  }
  if (!merged.has_prefix(kDefaultUserPrefix)) {
    merged.add_prefix(kDefaultUserPrefix, kMergeIri);
  }
  if (!merged.has_prefix(kVocabPrefix)) merged.add_prefix(kVocabPrefix, kVocabIri);

  QualifiedName collection;
  if (collection_id && collection_id->find(':') != std::string::npos) {
    collection = QualifiedName::parse(*collection_id);
    if (!merged.has_prefix(collection.prefix())) {
      throw Error(ErrorCode::kInvalidArgument,
                  "collection id prefix '" + collection.prefix() + "' is not declared");
    }
  } else {
    std::string local = collection_id && !collection_id->empty()
                            ? *collection_id
                            : default_collection_local(*runs.front());
    collection = QualifiedName(kDefaultUserPrefix, local);
  }
  if (merged.declared(collection)) {
    throw Error(ErrorCode::kInvalidArgument,
                "collection id '" + collection.str() + "' already occurs in the inputs");
  }

  auto derived = [&](std::string_view suffix) {
    QualifiedName id(collection.prefix(), collection.unescaped_local() + "." +
                                              std::string(suffix));
    if (merged.declared(id)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "merge id '" + id.str() + "' already occurs in the inputs");
    }
    return id;
  };

  merged.add_record(ProvRecord::entity(
      collection, {{prov_type(), AttributeValue(record_types::kCollection)},
                   {vocab("member_count"),
                    AttributeValue(static_cast<std::int64_t>(inputs.size()))}}));
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const ProvRecord& run = *runs[k];
    QualifiedName run_id = renamers[k].apply(run.id);
    QualifiedName summary = derived("member" + std::to_string(k));
    Attributes attrs = {{prov_type(), AttributeValue(record_types::kRunSummary)},
                        {vocab("source"), AttributeValue(inputs[k].name)},
                        {vocab("run"), AttributeValue(run_id.str())}};
    for (const char* key : {"experiment", "run_id", "rank"}) {
      if (const AttributeValue* v = run.find(vocab(key))) {
        attrs.emplace_back(vocab(key), *v);
      }
    }
    merged.add_record(ProvRecord::entity(summary, std::move(attrs)));

    Relation generated;
    generated.kind = RelationKind::kWasGeneratedBy;
    generated.id = derived("wasGeneratedBy." + std::to_string(k));
    generated.subject = summary;
    generated.object = run_id;
    merged.add_relation(std::move(generated));

    Relation member;
    member.kind = RelationKind::kHadMember;
    member.id = derived("hadMember." + std::to_string(k));
    member.subject = collection;
    member.object = summary;
    merged.add_relation(std::move(member));
  }
  return merged;
}

ProvDocument merge_files(const std::vector<std::filesystem::path>& paths,
                         const std::optional<std::string>& collection_id) {
  std::vector<MergeInput> inputs;
  for (const auto& path : paths) {
    ProvDocument doc;
    try {
      doc = read_document(path.string());
    } catch (const ParseError& e) {
      throw ParseError(describe(path) + ": " + e.what(), e.offset());
    } catch (const Error& e) {
      throw Error(e.code(), describe(path) + ": " + e.what());
    }
    ValidationReport report = validate(doc);
    if (!report.ok()) {
      throw Error(ErrorCode::kInvalidDocument,
                  describe(path) + " does not validate:\n" + report.to_string());
    }
    inputs.push_back({path.filename().string(), std::move(doc)});
  }
  return merge_documents(inputs, collection_id);
}

}  // namespace provtrack
