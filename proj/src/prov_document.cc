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

#include "provtrack/prov_document.h"

#include <algorithm>
#include <tuple>

#include "provtrack/error.h"

namespace provtrack {

std::string_view record_kind_name(RecordKind kind) {
  switch (kind) {
    case RecordKind::kEntity:
      return "entity";
    case RecordKind::kActivity:
      return "activity";
    case RecordKind::kAgent:
      return "agent";
  }
  return "?";
}

std::string_view relation_kind_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::kUsed:
      return "used";
    case RelationKind::kWasGeneratedBy:
      return "wasGeneratedBy";
    case RelationKind::kWasAssociatedWith:
      return "wasAssociatedWith";
    case RelationKind::kWasDerivedFrom:
      return "wasDerivedFrom";
    case RelationKind::kHadMember:
      return "hadMember";
  }
  return "?";
}

RecordKind relation_subject_kind(RelationKind kind) {
  switch (kind) {
    case RelationKind::kUsed:
    case RelationKind::kWasAssociatedWith:
      return RecordKind::kActivity;
    default:
      return RecordKind::kEntity;
  }
}

RecordKind relation_object_kind(RelationKind kind) {
  switch (kind) {
    case RelationKind::kWasGeneratedBy:
      return RecordKind::kActivity;
    case RelationKind::kWasAssociatedWith:
      return RecordKind::kAgent;
    default:
      return RecordKind::kEntity;
  }
}

ProvRecord ProvRecord::entity(QualifiedName id, Attributes attributes) {
  return ProvRecord{std::move(id), RecordKind::kEntity, std::move(attributes),
                    std::nullopt, std::nullopt};
}

ProvRecord ProvRecord::activity(QualifiedName id, Attributes attributes,
                                std::optional<std::int64_t> start,
                                std::optional<std::int64_t> end) {
  return ProvRecord{std::move(id), RecordKind::kActivity,
                    std::move(attributes), start, end};
}

ProvRecord ProvRecord::agent(QualifiedName id, Attributes attributes) {
  return ProvRecord{std::move(id), RecordKind::kAgent, std::move(attributes),
                    std::nullopt, std::nullopt};
}

const AttributeValue* ProvRecord::find(const QualifiedName& key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

ProvDocument::ProvDocument() {
  prefixes_.emplace(kProvPrefix, kProvIri);
  prefixes_.emplace(kXsdPrefix, kXsdIri);
}

void ProvDocument::add_prefix(std::string_view prefix, std::string_view iri) {
  if (!is_valid_prefix(prefix)) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid namespace prefix '" + std::string(prefix) + "'");
  }
  if (iri.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "empty IRI for prefix '" + std::string(prefix) + "'");
  }
  auto [it, inserted] = prefixes_.emplace(prefix, iri);
  if (!inserted && it->second != iri) {
    throw Error(ErrorCode::kInvalidArgument,
                "prefix '" + std::string(prefix) + "' already bound to " +
                    it->second);
  }
}

bool ProvDocument::has_prefix(std::string_view prefix) const {
  return prefixes_.find(std::string(prefix)) != prefixes_.end();
}

void ProvDocument::add_record(ProvRecord record) {
  if (record.kind == RecordKind::kActivity && record.start_time &&
      record.end_time && *record.end_time < *record.start_time) {
    throw Error(ErrorCode::kInvalidArgument,
                "activity " + record.id.str() + " ends before it starts");
  }
  if (record.kind != RecordKind::kActivity &&
      (record.start_time || record.end_time)) {
    throw Error(ErrorCode::kInvalidArgument,
                "only activities carry start/end times");
  }
  std::string key = record.id.str();
  unsigned declared = 0;
  if (auto it = declared_kinds_.find(key); it != declared_kinds_.end()) {
    declared = it->second;
  }
  if (auto it = required_kinds_.find(key); it != required_kinds_.end()) {
    unsigned after = declared | kind_bit(record.kind);
    if ((it->second & after) != it->second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "declaring " + key + " as " +
                      std::string(record_kind_name(record.kind)) +
                      " contradicts a relation that references it");
    }
  }
  DocumentBuilder(*this).add_record(std::move(record));
}

void ProvDocument::add_relation(Relation relation) {
  auto check = [&](const QualifiedName& endpoint, RecordKind required) {
    auto it = declared_kinds_.find(endpoint.str());
    if (it != declared_kinds_.end() && !(it->second & kind_bit(required))) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(relation_kind_name(relation.kind)) + " " +
                      relation.id.str() + ": " + endpoint.str() +
                      " is not declared as " +
                      std::string(record_kind_name(required)));
    }
  };
  check(relation.subject, relation_subject_kind(relation.kind));
  check(relation.object, relation_object_kind(relation.kind));
  DocumentBuilder(*this).add_relation(std::move(relation));
}

const ProvRecord* ProvDocument::find(RecordKind kind,
                                     const QualifiedName& id) const {
  auto it = declared_kinds_.find(id.str());
  if (it == declared_kinds_.end() || !(it->second & kind_bit(kind))) {
    return nullptr;
  }
  for (const auto& r : records_) {
    if (r.kind == kind && r.id == id) return &r;
  }
  return nullptr;
}

bool ProvDocument::contains(RecordKind kind, const QualifiedName& id) const {
  auto it = declared_kinds_.find(id.str());
  return it != declared_kinds_.end() && (it->second & kind_bit(kind));
}

bool ProvDocument::declared(const QualifiedName& id) const {
  return declared_kinds_.count(id.str()) > 0;
}

std::size_t ProvDocument::count(RecordKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(),
                    [&](const ProvRecord& r) { return r.kind == kind; }));
}

std::size_t ProvDocument::count(RelationKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(relations_.begin(), relations_.end(),
                    [&](const Relation& r) { return r.kind == kind; }));
}

void ProvDocument::set_extra_section(std::string name,
                                     std::string canonical_json) {
  extra_sections_[std::move(name)] = std::move(canonical_json);
}

bool operator==(const ProvDocument& a, const ProvDocument& b) {
  if (a.prefixes_ != b.prefixes_ || a.extra_sections_ != b.extra_sections_ ||
      a.records_.size() != b.records_.size() ||
      a.relations_.size() != b.relations_.size()) {
    return false;
  }
  auto sorted_records = [](const std::vector<ProvRecord>& in) {
    std::vector<const ProvRecord*> out;
    for (const auto& r : in) out.push_back(&r);
    std::sort(out.begin(), out.end(), [](auto* x, auto* y) {
      return std::tie(x->kind, x->id) < std::tie(y->kind, y->id);
    });
    return out;
  };
  auto sorted_relations = [](const std::vector<Relation>& in) {
    std::vector<const Relation*> out;
    for (const auto& r : in) out.push_back(&r);
    std::sort(out.begin(), out.end(), [](auto* x, auto* y) {
      return std::tie(x->kind, x->id) < std::tie(y->kind, y->id);
    });
    return out;
  };
  auto ra = sorted_records(a.records_);
  auto rb = sorted_records(b.records_);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (!(*ra[i] == *rb[i])) return false;
  }
  auto la = sorted_relations(a.relations_);
  auto lb = sorted_relations(b.relations_);
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (!(*la[i] == *lb[i])) return false;
  }
  return true;
}

ProvDocument new_document(std::string_view default_namespace) {
  if (default_namespace.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty default namespace IRI");
  }
  ProvDocument doc;
  doc.add_prefix(kDefaultUserPrefix, default_namespace);
  return doc;
}

void DocumentBuilder::add_record(ProvRecord record) {
  std::string key = record.id.str();
  unsigned bit = ProvDocument::kind_bit(record.kind);
  unsigned& declared = doc_.declared_kinds_[key];
  if (declared & bit) {
    throw Error(ErrorCode::kDuplicateRecord,
                "duplicate " + std::string(record_kind_name(record.kind)) +
                    " " + key);
  }
  declared |= bit;
  doc_.records_.push_back(std::move(record));
}

void DocumentBuilder::add_relation(Relation relation) {
  auto index_key =
      std::make_pair(static_cast<int>(relation.kind), relation.id.str());
  if (doc_.relation_index_.count(index_key)) {
    throw Error(ErrorCode::kDuplicateRecord,
                "duplicate " +
                    std::string(relation_kind_name(relation.kind)) + " " +
                    index_key.second);
  }
  doc_.relation_index_.emplace(index_key, doc_.relations_.size());
  doc_.required_kinds_[relation.subject.str()] |=
      ProvDocument::kind_bit(relation_subject_kind(relation.kind));
  doc_.required_kinds_[relation.object.str()] |=
      ProvDocument::kind_bit(relation_object_kind(relation.kind));
  doc_.relations_.push_back(std::move(relation));
}

}  // namespace provtrack
