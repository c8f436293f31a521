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

#ifndef PROVTRACK_PROV_DOCUMENT_H_
#define PROVTRACK_PROV_DOCUMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "provtrack/attribute_value.h"
#include "provtrack/qualified_name.h"

namespace provtrack {

enum class RecordKind { kEntity, kActivity, kAgent };

enum class RelationKind {
  kUsed,
  kWasGeneratedBy,
  kWasAssociatedWith,
  kWasDerivedFrom,
  kHadMember,
};

std::string_view record_kind_name(RecordKind kind);
std::string_view relation_kind_name(RelationKind kind);

// Required record kinds of a relation's endpoints:
//   used:              Activity -> Entity
//   wasGeneratedBy:    Entity   -> Activity
//   wasAssociatedWith: Activity -> Agent
//   wasDerivedFrom:    Entity   -> Entity
//   hadMember:         Entity   -> Entity
RecordKind relation_subject_kind(RelationKind kind);
RecordKind relation_object_kind(RelationKind kind);

// Ordered attribute list. Keys are expected to be unique; the validator
// reports duplicates.
using Attributes = std::vector<std::pair<QualifiedName, AttributeValue>>;

struct ProvRecord {
  QualifiedName id;
  RecordKind kind = RecordKind::kEntity;
  Attributes attributes;
  // Activities only, UTC epoch milliseconds.
  std::optional<std::int64_t> start_time;
  std::optional<std::int64_t> end_time;

  static ProvRecord entity(QualifiedName id, Attributes attributes = {});
  static ProvRecord activity(QualifiedName id, Attributes attributes = {},
                             std::optional<std::int64_t> start = {},
                             std::optional<std::int64_t> end = {});
  static ProvRecord agent(QualifiedName id, Attributes attributes = {});

  const AttributeValue* find(const QualifiedName& key) const;

  friend bool operator==(const ProvRecord&, const ProvRecord&) = default;
};

struct Relation {
  RelationKind kind = RelationKind::kUsed;
  QualifiedName id;
  QualifiedName subject;
  QualifiedName object;
  Attributes attributes;

  friend bool operator==(const Relation&, const Relation&) = default;
};

inline constexpr std::string_view kProvPrefix = "prov";
inline constexpr std::string_view kProvIri = "http://www.w3.org/ns/prov#";
inline constexpr std::string_view kXsdPrefix = "xsd";
inline constexpr std::string_view kXsdIri = "http://www.w3.org/2001/XMLSchema#";
// Prefix the caller's namespace is bound to by new_document().
inline constexpr std::string_view kDefaultUserPrefix = "user";

// A PROV-DM subset document: three record kinds and five relations.
// Records and relations keep insertion order. Equality is structural: it
// ignores insertion order and compares records keyed by (kind, id) and
// relations keyed by (kind, id).
class ProvDocument {
 public:
  ProvDocument();

  // Binds `prefix` to `iri`. Rebinding an existing prefix to a different IRI
  // throws kInvalidArgument; rebinding to the same IRI is a no-op.
  void add_prefix(std::string_view prefix, std::string_view iri);
  bool has_prefix(std::string_view prefix) const;
  const std::map<std::string, std::string>& prefixes() const {
    return prefixes_;
  }

  // Throws kDuplicateRecord when the id is already used by a record of the
  // same kind, kInvalidArgument when an activity ends before it starts or
  // when declaring the id would contradict an existing relation endpoint.
  void add_record(ProvRecord record);

  // Throws kDuplicateRecord on a repeated relation id within its kind and
  // kInvalidArgument when an already declared endpoint has the wrong kind.
  // Endpoints may be undeclared; validate() reports them as dangling.
  void add_relation(Relation relation);

  const std::vector<ProvRecord>& records() const { return records_; }
  const std::vector<Relation>& relations() const { return relations_; }

  const ProvRecord* find(RecordKind kind, const QualifiedName& id) const;
  bool contains(RecordKind kind, const QualifiedName& id) const;
  // True when some record of any kind carries `id`.
  bool declared(const QualifiedName& id) const;

  std::size_t count(RecordKind kind) const;
  std::size_t count(RelationKind kind) const;

  // Top-level PROV-JSON sections this library does not model, kept as
  // canonical JSON text keyed by section name.
  const std::map<std::string, std::string>& extra_sections() const {
    return extra_sections_;
  }
  void set_extra_section(std::string name, std::string canonical_json);

  friend bool operator==(const ProvDocument& a, const ProvDocument& b);

 private:
  friend class DocumentBuilder;

  static unsigned kind_bit(RecordKind kind) { return 1u << static_cast<int>(kind); }

  std::map<std::string, std::string> prefixes_;
  std::vector<ProvRecord> records_;
  std::vector<Relation> relations_;
  std::map<std::string, std::string> extra_sections_;

  // rendered id -> bitmask of declared record kinds
  std::map<std::string, unsigned> declared_kinds_;
  // rendered id -> bitmask of kinds required by relation endpoints
  std::map<std::string, unsigned> required_kinds_;
  // (relation kind, rendered relation id)
  std::map<std::pair<int, std::string>, std::size_t> relation_index_;
};

// Creates a document with `default_namespace` bound to kDefaultUserPrefix
// plus the implicit `prov` and `xsd` bindings. Throws kInvalidArgument on an
// empty IRI.
ProvDocument new_document(std::string_view default_namespace);

// Unchecked insertion used when loading foreign documents, which may break
// the kind discipline that add_relation() enforces. Duplicate ids still
// throw kDuplicateRecord.
class DocumentBuilder {
 public:
  explicit DocumentBuilder(ProvDocument& doc) : doc_(doc) {}

  void add_record(ProvRecord record);
  void add_relation(Relation relation);

 private:
  ProvDocument& doc_;
};

}  // namespace provtrack

#endif  // PROVTRACK_PROV_DOCUMENT_H_
