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

#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "doc_generator.h"
#include "provtrack/error.h"
#include "provtrack/prov_json.h"

namespace provtrack {
namespace {

QualifiedName ex(const char* local) { return QualifiedName("ex", local); }

ProvDocument triangle() {
  ProvDocument doc = new_document("urn:a");
  doc.add_prefix("ex", "http://example.org/");
  doc.add_record(ProvRecord::agent(ex("alice")));
  doc.add_record(ProvRecord::activity(ex("train"), {}, 1000, 2000));
  doc.add_record(ProvRecord::entity(ex("model"), {{ex("acc"), AttributeValue(0.75)}}));
  doc.add_relation({RelationKind::kWasAssociatedWith, ex("assoc"), ex("train"), ex("alice")});
  doc.add_relation({RelationKind::kWasGeneratedBy, ex("gen"), ex("model"), ex("train")});
  return doc;
}

TEST(SerializeTest, EmptyDocumentHasOnlyPrefixSection) {
  std::string text = serialize(new_document("urn:a"));
  EXPECT_EQ(text,
            "{\n"
            "  \"prefix\": {\n"
            "    \"prov\": \"http://www.w3.org/ns/prov#\",\n"
            "    \"user\": \"urn:a\",\n"
            "    \"xsd\": \"http://www.w3.org/2001/XMLSchema#\"\n"
            "  }\n"
            "}\n");
}

TEST(SerializeTest, TriangleLayout) {
  std::string expected = R"({
  "prefix": {
    "ex": "http://example.org/",
    "prov": "http://www.w3.org/ns/prov#",
    "user": "urn:a",
    "xsd": "http://www.w3.org/2001/XMLSchema#"
  },
  "entity": {
    "ex:model": {
      "ex:acc": {
        "$": "0.75",
        "type": "xsd:double"
      }
    }
  },
  "activity": {
    "ex:train": {
      "prov:startTime": "1970-01-01T00:00:01.000Z",
      "prov:endTime": "1970-01-01T00:00:02.000Z"
    }
  },
  "agent": {
    "ex:alice": {}
  },
  "wasGeneratedBy": {
    "ex:gen": {
      "prov:entity": "ex:model",
      "prov:activity": "ex:train"
    }
  },
  "wasAssociatedWith": {
    "ex:assoc": {
      "prov:activity": "ex:train",
      "prov:agent": "ex:alice"
    }
  }
}
)";
  EXPECT_EQ(serialize(triangle()), expected);
}

TEST(SerializeTest, Deterministic) {
  EXPECT_EQ(serialize(triangle()), serialize(triangle()));
}

TEST(SerializeTest, RefusesInvalidDocument) {
  ProvDocument doc = new_document("urn:a");
  doc.add_relation({RelationKind::kUsed, QualifiedName("user", "u"),
                    QualifiedName("user", "run"), QualifiedName("user", "ds")});
  try {
    serialize(doc);
    FAIL();
  } catch (const InvalidDocumentError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidDocument);
    EXPECT_EQ(e.report().errors.size(), 2u);
  }
}

TEST(SerializeTest, RecordIdsSorted) {
  ProvDocument doc = new_document("urn:a");
  for (const char* id : {"z", "a", "m"}) doc.add_record(ProvRecord::entity(QualifiedName("user", id)));
  std::string text = serialize(doc);
  EXPECT_LT(text.find("user:a"), text.find("user:m"));
  EXPECT_LT(text.find("user:m"), text.find("user:z"));
}

TEST(ValidateTest, EmptyDocumentWarnsOnce) {
  ValidationReport r = validate(new_document("urn:a"));
  EXPECT_TRUE(r.errors.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].code, "empty-document");
}

TEST(ValidateTest, DanglingMember) {
  ProvDocument doc = new_document("urn:a");
  doc.add_record(ProvRecord::entity(QualifiedName("user", "coll")));
  doc.add_relation({RelationKind::kHadMember, QualifiedName("user", "h"),
                    QualifiedName("user", "coll"), QualifiedName("user", "ghost")});
  ValidationReport r = validate(doc);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].code, "dangling-reference");
}

TEST(ValidateTest, TriangleIsClean) {
  ValidationReport r = validate(triangle());
  EXPECT_TRUE(r.errors.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(ValidateTest, UndeclaredPrefixAndDuplicateAttribute) {
  ProvDocument doc = new_document("urn:a");
  doc.add_record(ProvRecord::entity(
      QualifiedName("user", "e"),
      {{QualifiedName("nope", "k"), AttributeValue(1)},
       {QualifiedName("user", "k"), AttributeValue(1)},
       {QualifiedName("user", "k"), AttributeValue(2)}}));
  ValidationReport r = validate(doc);
  std::vector<std::string> codes;
  for (const auto& e : r.errors) codes.push_back(e.code);
  EXPECT_EQ(codes, (std::vector<std::string>{"undeclared-prefix", "duplicate-attribute"}));
}

TEST(ValidateTest, ActivityWithoutAgentWarns) {
  ProvDocument doc = new_document("urn:a");
  doc.add_record(ProvRecord::activity(QualifiedName("user", "run")));
  ValidationReport r = validate(doc);
  EXPECT_TRUE(r.ok());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].code, "activity-without-association");
}

TEST(ParseTest, DanglingRelationParsesThenFailsValidation) {
  std::string text = R"({"prefix": {"ex": "urn:ex:"},
    "activity": {"ex:run": {}},
    "used": {"ex:u": {"prov:activity": "ex:run", "prov:entity": "ex:missing"}}})";
  ProvDocument doc = parse(text);
  ValidationReport r = validate(doc);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].code, "dangling-reference");
  EXPECT_EQ(r.errors[0].id, "ex:u");
}

TEST(ParseTest, DuplicateEntityId) {
  std::string text = R"({"prefix": {"ex": "urn:ex:"},
    "entity": {"ex:a": {}, "ex:a": {}}})";
  try {
    parse(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateRecord);
  }
}

TEST(ParseTest, MalformedJsonReportsOffset) {
  try {
    parse("{\"prefix\": {\"ex\": }");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    // The parser counts bytes consumed, including the offending '}'.
    EXPECT_EQ(e.offset(), 19u);
  }
}

TEST(ParseTest, UnknownDatatypeWarnsAndKeepsString) {
  std::string text = R"({"prefix": {"ex": "urn:ex:"},
    "entity": {"ex:a": {"ex:k": {"$": "ex:b", "type": "prov:QUALIFIED_NAME"}}}})";
  std::vector<Issue> warnings;
  ProvDocument doc = parse(text, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  const AttributeValue* v = doc.records()[0].find(QualifiedName("ex", "k"));
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->text(), "ex:b");
  EXPECT_EQ(v->type(), "prov:QUALIFIED_NAME");
  // Re-serializing keeps the foreign tag.
  EXPECT_NE(serialize(doc).find("\"type\": \"prov:QUALIFIED_NAME\""), std::string::npos);
}

TEST(ParseTest, UnknownSectionsAreCanonicalizedAndKept) {
  std::string text = R"({"prefix": {"ex": "urn:ex:"}, "bundle": {"b": 1, "a": [true, null]},
    "entity": {"ex:a": {}}})";
  ProvDocument doc = parse(text);
  ASSERT_EQ(doc.extra_sections().count("bundle"), 1u);
  std::string out = serialize(doc);
  EXPECT_LT(out.find("\"entity\""), out.find("\"bundle\""));
  EXPECT_LT(out.find("\"a\": ["), out.find("\"b\": 1"));
  EXPECT_EQ(serialize(parse(out)), out);
}

TEST(ParseTest, BareLiteralsAccepted) {
  std::string text = R"({"prefix": {"ex": "urn:ex:"},
    "entity": {"ex:a": {"ex:s": "x", "ex:n": 3, "ex:d": 0.5, "ex:b": true}}})";
  ProvDocument doc = parse(text);
  const ProvRecord& r = doc.records()[0];
  EXPECT_EQ(*r.find(QualifiedName("ex", "s")), AttributeValue("x"));
  EXPECT_EQ(*r.find(QualifiedName("ex", "n")), AttributeValue(3));
  EXPECT_EQ(*r.find(QualifiedName("ex", "d")), AttributeValue(0.5));
  EXPECT_EQ(*r.find(QualifiedName("ex", "b")), AttributeValue(true));
}

TEST(ParseTest, NonObjectRootRejected) {
  EXPECT_THROW(parse("[1, 2]"), Error);
}

// Property: parse inverts serialize, serialization is a fixed point, and the
// emitted JSON has the section layout an independent reader expects.
TEST(ProvJsonProperty, RoundTripOverRandomDocuments) {
  std::mt19937_64 rng(20260101);
  const std::vector<std::string> order = {"prefix", "entity", "activity", "agent", "used",
                                          "wasGeneratedBy", "wasAssociatedWith",
                                          "wasDerivedFrom", "hadMember"};
  for (int i = 0; i < 300; ++i) {
    testing::GeneratedShape shape;
    ProvDocument doc = testing::random_document(rng, &shape);
    ASSERT_TRUE(validate(doc).ok()) << validate(doc).to_string();
    std::string text = serialize(doc);
    ProvDocument back = parse(text);
    ASSERT_EQ(back, doc) << text;
    ASSERT_EQ(serialize(back), text);

    auto json = nlohmann::ordered_json::parse(text);
    std::size_t last = 0, entities = 0, activities = 0, agents = 0, relations = 0,
                attributes = 0;
    for (auto it = json.begin(); it != json.end(); ++it) {
      auto pos = std::find(order.begin(), order.end(), it.key());
      if (pos == order.end()) continue;  // passthrough section, emitted last
      std::size_t rank = static_cast<std::size_t>(pos - order.begin());
      ASSERT_GE(rank, last);
      last = rank;
      if (it.key() == "prefix") continue;
      std::string previous;
      for (auto rec = it.value().begin(); rec != it.value().end(); ++rec) {
        ASSERT_LT(previous, rec.key());
        previous = rec.key();
        for (auto attr = rec.value().begin(); attr != rec.value().end(); ++attr) {
          if (attr.value().is_object()) {
            ASSERT_EQ(attr.value().size(), 2u);
            ASSERT_TRUE(attr.value().contains("$"));
            ASSERT_TRUE(attr.value().contains("type"));
            ++attributes;
          }
        }
        if (it.key() == "entity") ++entities;
        else if (it.key() == "activity") ++activities;
        else if (it.key() == "agent") ++agents;
        else ++relations;
      }
    }
    ASSERT_EQ(entities, shape.entities);
    ASSERT_EQ(activities, shape.activities);
    ASSERT_EQ(agents, shape.agents);
    ASSERT_EQ(relations, shape.relations);
    ASSERT_EQ(attributes, shape.attributes);
    ASSERT_EQ(text.back(), '\n');
  }
}

}  // namespace
}  // namespace provtrack
