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

#include "provtrack/prov_json.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "provtrack/error.h"

namespace provtrack {

namespace {

using OrderedJson = nlohmann::ordered_json;

constexpr std::array<RecordKind, 3> kRecordKinds = {
    RecordKind::kEntity, RecordKind::kActivity, RecordKind::kAgent};
constexpr std::array<RelationKind, 5> kRelationKinds = {
    RelationKind::kUsed, RelationKind::kWasGeneratedBy,
    RelationKind::kWasAssociatedWith, RelationKind::kWasDerivedFrom,
    RelationKind::kHadMember};

constexpr std::string_view kStartTime = "prov:startTime";
constexpr std::string_view kEndTime = "prov:endTime";

// PROV-JSON field names of (subject, object) per relation kind.
std::pair<std::string_view, std::string_view> endpoint_fields(RelationKind kind) {
  switch (kind) {
    case RelationKind::kUsed:
      return {"prov:activity", "prov:entity"};
    case RelationKind::kWasGeneratedBy:
      return {"prov:entity", "prov:activity"};
    case RelationKind::kWasAssociatedWith:
      return {"prov:activity", "prov:agent"};
    case RelationKind::kWasDerivedFrom:
      return {"prov:generatedEntity", "prov:usedEntity"};
    case RelationKind::kHadMember:
      return {"prov:collection", "prov:entity"};
  }
  return {"", ""};
}

bool is_reserved_key(std::string_view key, RecordKind kind) {
  return kind == RecordKind::kActivity && (key == kStartTime || key == kEndTime);
}

bool is_reserved_key(std::string_view key, RelationKind kind) {
  auto [s, o] = endpoint_fields(kind);
  return key == s || key == o;
}

OrderedJson typed_value(const AttributeValue& v) {
  OrderedJson out = OrderedJson::object();
  out["$"] = v.text();
  out["type"] = v.type();
  return out;
}

void emit_attributes(const Attributes& attributes, OrderedJson& out) {
  for (const auto& [key, value] : attributes) {
    out[key.str()] = typed_value(value);
  }
}

// Tracks duplicate object keys, which the DOM parser would otherwise
// silently collapse.
struct DuplicateKeyTracker {
  std::vector<std::set<std::string>> stack;
  std::string duplicate_record;
  std::string duplicate_section;
  std::vector<std::string> duplicate_attributes;

  bool operator()(int /*depth*/, nlohmann::json::parse_event_t event,
                  OrderedJson& parsed) {
    using Event = nlohmann::json::parse_event_t;
    switch (event) {
      case Event::object_start:
        stack.emplace_back();
        break;
      case Event::object_end:
        if (!stack.empty()) stack.pop_back();
        break;
      case Event::key: {
        if (stack.empty()) break;
        std::string key = parsed.get<std::string>();
        if (!stack.back().insert(key).second) {
          if (stack.size() == 1) {
            if (duplicate_section.empty()) duplicate_section = key;
          } else if (stack.size() == 2) {
            if (duplicate_record.empty()) duplicate_record = key;
          } else {
            duplicate_attributes.push_back(key);
          }
        }
        break;
      }
      default:
        break;
    }
    return true;
  }
};

QualifiedName parse_name(const std::string& text, std::string_view where) {
  try {
    return QualifiedName::parse(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse,
                std::string(where) + ": " + e.what());
  }
}

void warn(std::vector<Issue>* warnings, std::string code, std::string message,
          std::string id) {
  if (warnings) {
    warnings->push_back({std::move(code), std::move(message), std::move(id)});
  }
}

AttributeValue parse_value(const OrderedJson& value, const std::string& owner,
                           std::vector<Issue>* warnings) {
  if (value.is_object() && value.contains("$")) {
    const auto& raw = value["$"];
    std::string text = raw.is_string() ? raw.get<std::string>() : raw.dump();
    std::string type = std::string(kXsdString);
    if (value.contains("type") && value["type"].is_string()) {
      type = value["type"].get<std::string>();
    }
    bool known = true;
    AttributeValue v = AttributeValue::from_typed_text(text, type, &known);
    if (!known) {
      warn(warnings, "unknown-datatype",
           "unknown datatype " + type + " kept as string", owner);
    }
    return v;
  }
  if (value.is_string()) return AttributeValue(value.get<std::string>());
  if (value.is_boolean()) return AttributeValue(value.get<bool>());
  if (value.is_number_integer()) {
    return AttributeValue(value.get<std::int64_t>());
  }
  if (value.is_number_float()) return AttributeValue(value.get<double>());
  warn(warnings, "unsupported-value",
       "attribute value shape not supported; kept as JSON text", owner);
  return AttributeValue(value.dump());
}

std::int64_t parse_time(const OrderedJson& value, const std::string& owner) {
  std::int64_t ms = 0;
  if (!value.is_string() || !parse_timestamp_ms(value.get<std::string>(), &ms)) {
    throw Error(ErrorCode::kParse, "activity " + owner +
                                       ": time must be an ISO-8601 UTC "
                                       "timestamp with milliseconds");
  }
  return ms;
}

// PROV-JSON allows a list of records under one id; more than one is a
// duplicate in this document model.
const OrderedJson& single_body(const OrderedJson& body, const std::string& id) {
  if (body.is_array()) {
    if (body.size() != 1) {
      throw Error(ErrorCode::kDuplicateRecord, "duplicate record id " + id);
    }
    return body[0];
  }
  return body;
}

}  // namespace

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& e : errors) {
    out << "error [" << e.code << "] " << e.id << ": " << e.message << "\n";
  }
  for (const auto& w : warnings) {
    out << "warning [" << w.code << "] " << w.id << ": " << w.message << "\n";
  }
  return out.str();
}

InvalidDocumentError::InvalidDocumentError(ValidationReport report)
    : Error(ErrorCode::kInvalidDocument,
            "document failed validation:\n" + report.to_string()),
      report_(std::move(report)) {}

ValidationReport validate(const ProvDocument& doc) {
  ValidationReport report;
  const auto& prefixes = doc.prefixes();

  auto check_prefix = [&](const QualifiedName& name, const std::string& owner) {
    if (!prefixes.count(name.prefix())) {
      report.errors.push_back({"undeclared-prefix",
                               "prefix '" + name.prefix() + "' of " +
                                   name.str() + " is not declared",
                               owner});
    }
  };
  auto check_attributes = [&](const Attributes& attributes,
                              const std::string& owner, auto reserved) {
    std::set<QualifiedName> seen;
    for (const auto& [key, value] : attributes) {
      check_prefix(key, owner);
      if (!seen.insert(key).second) {
        report.errors.push_back({"duplicate-attribute",
                                 "attribute " + key.str() + " appears twice",
                                 owner});
      }
      if (reserved(key.str())) {
        report.errors.push_back(
            {"reserved-attribute",
             "attribute " + key.str() + " clashes with a structural field",
             owner});
      }
    }
  };

  if (doc.records().empty() && doc.relations().empty()) {
    report.warnings.push_back(
        {"empty-document", "document has no records", ""});
  }

  std::set<QualifiedName> associated;
  for (const auto& rel : doc.relations()) {
    if (rel.kind == RelationKind::kWasAssociatedWith) {
      associated.insert(rel.subject);
    }
  }

  for (const auto& record : doc.records()) {
    std::string owner = record.id.str();
    check_prefix(record.id, owner);
    check_attributes(record.attributes, owner, [&](std::string_view k) {
      return is_reserved_key(k, record.kind);
    });
    if (record.start_time && record.end_time &&
        *record.end_time < *record.start_time) {
      report.errors.push_back(
          {"invalid-time", "activity ends before it starts", owner});
    }
    if (record.kind == RecordKind::kActivity && !associated.count(record.id)) {
      report.warnings.push_back({"activity-without-association",
                                 "activity has no wasAssociatedWith agent",
                                 owner});
    }
  }

  for (const auto& rel : doc.relations()) {
    std::string owner = rel.id.str();
    check_prefix(rel.id, owner);
    check_prefix(rel.subject, owner);
    check_prefix(rel.object, owner);
    check_attributes(rel.attributes, owner, [&](std::string_view k) {
      return is_reserved_key(k, rel.kind);
    });
    auto check_endpoint = [&](const QualifiedName& endpoint,
                              RecordKind required) {
      if (doc.contains(required, endpoint)) return;
      std::string what = std::string(relation_kind_name(rel.kind)) + " " +
                         owner + " refers to " + endpoint.str();
      if (doc.declared(endpoint)) {
        report.errors.push_back(
            {"kind-mismatch",
             what + ", which is not a " +
                 std::string(record_kind_name(required)),
             owner});
      } else {
        report.errors.push_back(
            {"dangling-reference", what + ", which is not declared", owner});
      }
    };
    check_endpoint(rel.subject, relation_subject_kind(rel.kind));
    check_endpoint(rel.object, relation_object_kind(rel.kind));
  }
  return report;
}

std::string serialize(const ProvDocument& doc) {
  ValidationReport report = validate(doc);
  if (!report.ok()) throw InvalidDocumentError(std::move(report));

  OrderedJson root = OrderedJson::object();
  OrderedJson& prefix = root["prefix"] = OrderedJson::object();
  for (const auto& [p, iri] : doc.prefixes()) prefix[p] = iri;

  for (RecordKind kind : kRecordKinds) {
    std::vector<const ProvRecord*> records;
    for (const auto& r : doc.records()) {
      if (r.kind == kind) records.push_back(&r);
    }
    if (records.empty()) continue;
    std::sort(records.begin(), records.end(), [](auto* a, auto* b) {
      return a->id.str() < b->id.str();
    });
    OrderedJson& section = root[std::string(record_kind_name(kind))] =
        OrderedJson::object();
    for (const ProvRecord* r : records) {
      OrderedJson body = OrderedJson::object();
      if (r->start_time) {
        body[std::string(kStartTime)] = format_timestamp_ms(*r->start_time);
      }
      if (r->end_time) {
        body[std::string(kEndTime)] = format_timestamp_ms(*r->end_time);
      }
      emit_attributes(r->attributes, body);
      section[r->id.str()] = std::move(body);
    }
  }

  for (RelationKind kind : kRelationKinds) {
    std::vector<const Relation*> relations;
    for (const auto& r : doc.relations()) {
      if (r.kind == kind) relations.push_back(&r);
    }
    if (relations.empty()) continue;
    std::sort(relations.begin(), relations.end(), [](auto* a, auto* b) {
      return a->id.str() < b->id.str();
    });
    auto [subject_field, object_field] = endpoint_fields(kind);
    OrderedJson& section = root[std::string(relation_kind_name(kind))] =
        OrderedJson::object();
    for (const Relation* r : relations) {
      OrderedJson body = OrderedJson::object();
      body[std::string(subject_field)] = r->subject.str();
      body[std::string(object_field)] = r->object.str();
      emit_attributes(r->attributes, body);
      section[r->id.str()] = std::move(body);
    }
  }

  for (const auto& [name, text] : doc.extra_sections()) {
    root[name] = OrderedJson::parse(text);
  }
  return root.dump(2) + "\n";
}

ProvDocument parse(std::string_view text, std::vector<Issue>* warnings) {
  DuplicateKeyTracker tracker;
  OrderedJson root;
  try {
    root = OrderedJson::parse(
        text.begin(), text.end(),
        [&tracker](int depth, nlohmann::json::parse_event_t event,
                   OrderedJson& parsed) {
          return tracker(depth, event, parsed);
        });
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!tracker.duplicate_section.empty()) {
    throw Error(ErrorCode::kParse,
                "duplicate section '" + tracker.duplicate_section + "'");
  }
  if (!tracker.duplicate_record.empty()) {
    throw Error(ErrorCode::kDuplicateRecord,
                "duplicate id " + tracker.duplicate_record);
  }
  for (const auto& key : tracker.duplicate_attributes) {
    warn(warnings, "duplicate-attribute",
         "repeated attribute key collapsed to its last value", key);
  }
  if (!root.is_object()) {
    throw Error(ErrorCode::kParse, "PROV-JSON document must be a JSON object");
  }

  ProvDocument doc;
  DocumentBuilder builder(doc);

  if (root.contains("prefix")) {
    const auto& prefix = root["prefix"];
    if (!prefix.is_object()) {
      throw Error(ErrorCode::kParse, "'prefix' must be an object");
    }
    for (const auto& [p, iri] : prefix.items()) {
      if (!iri.is_string()) {
        throw Error(ErrorCode::kParse, "prefix '" + p + "' must map to a string");
      }
      try {
        doc.add_prefix(p, iri.get<std::string>());
      } catch (const Error& e) {
        throw Error(ErrorCode::kParse, e.what());
      }
    }
  }

  auto read_attributes = [&](const OrderedJson& body, const std::string& owner,
                             auto skip) {
    Attributes attributes;
    for (const auto& [key, value] : body.items()) {
      if (skip(key)) continue;
      attributes.emplace_back(parse_name(key, owner),
                              parse_value(value, owner, warnings));
    }
    return attributes;
  };

  for (RecordKind kind : kRecordKinds) {
    std::string section_name(record_kind_name(kind));
    if (!root.contains(section_name)) continue;
    const auto& section = root[section_name];
    if (!section.is_object()) {
      throw Error(ErrorCode::kParse, "'" + section_name + "' must be an object");
    }
    for (const auto& [id, raw_body] : section.items()) {
      const auto& body = single_body(raw_body, id);
      if (!body.is_object()) {
        throw Error(ErrorCode::kParse, "record " + id + " must be an object");
      }
      ProvRecord record;
      record.id = parse_name(id, section_name);
      record.kind = kind;
      if (kind == RecordKind::kActivity) {
        if (body.contains(kStartTime)) {
          record.start_time = parse_time(body[std::string(kStartTime)], id);
        }
        if (body.contains(kEndTime)) {
          record.end_time = parse_time(body[std::string(kEndTime)], id);
        }
      }
      record.attributes = read_attributes(body, id, [&](const std::string& k) {
        return is_reserved_key(k, kind);
      });
      builder.add_record(std::move(record));
    }
  }

  for (RelationKind kind : kRelationKinds) {
    std::string section_name(relation_kind_name(kind));
    if (!root.contains(section_name)) continue;
    const auto& section = root[section_name];
    if (!section.is_object()) {
      throw Error(ErrorCode::kParse, "'" + section_name + "' must be an object");
    }
    auto [subject_field, object_field] = endpoint_fields(kind);
    for (const auto& [id, raw_body] : section.items()) {
      const auto& body = single_body(raw_body, id);
      if (!body.is_object()) {
        throw Error(ErrorCode::kParse, "relation " + id + " must be an object");
      }
      auto endpoint = [&](std::string_view field) {
        std::string f(field);
        if (!body.contains(f) || !body[f].is_string()) {
          throw Error(ErrorCode::kParse,
                      section_name + " " + id + " lacks '" + f + "'");
        }
        return parse_name(body[f].get<std::string>(), id);
      };
      Relation rel;
      rel.kind = kind;
      rel.id = parse_name(id, section_name);
      rel.subject = endpoint(subject_field);
      rel.object = endpoint(object_field);
      rel.attributes = read_attributes(body, id, [&](const std::string& k) {
        return is_reserved_key(k, kind);
      });
      builder.add_relation(std::move(rel));
    }
  }

  std::set<std::string> known = {"prefix"};
  for (RecordKind k : kRecordKinds) known.emplace(record_kind_name(k));
  for (RelationKind k : kRelationKinds) known.emplace(relation_kind_name(k));
  for (const auto& [name, value] : root.items()) {
    if (known.count(name)) continue;
    // Round through the sorted-key representation for a canonical form.
    doc.set_extra_section(name, nlohmann::json::parse(value.dump()).dump());
  }
  return doc;
}

ProvDocument read_document(const std::string& path,
                           std::vector<Issue>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), warnings);
}

void write_document(const ProvDocument& doc, const std::string& path) {
  std::string text = serialize(doc);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace provtrack
