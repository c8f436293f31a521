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

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "doc_generator.h"
#include "provtrack/attribute_value.h"
#include "provtrack/error.h"

namespace provtrack {
namespace {

TEST(AttributeValueTest, TypesFollowVariant) {
  EXPECT_EQ(AttributeValue("x").type(), "xsd:string");
  EXPECT_EQ(AttributeValue(3).type(), "xsd:long");
  EXPECT_EQ(AttributeValue(0.5).type(), "xsd:double");
  EXPECT_EQ(AttributeValue(true).type(), "xsd:boolean");
  EXPECT_EQ(AttributeValue::date_time_ms(0).type(), "xsd:dateTime");
}

TEST(AttributeValueTest, TextForms) {
  EXPECT_EQ(AttributeValue(std::int64_t{-42}).text(), "-42");
  EXPECT_EQ(AttributeValue(0.1).text(), "0.1");
  EXPECT_EQ(AttributeValue(1e300).text(), "1e+300");
  EXPECT_EQ(AttributeValue(false).text(), "false");
  EXPECT_EQ(AttributeValue::date_time_ms(1700000000123).text(),
            "2023-11-14T22:13:20.123Z");
}

TEST(AttributeValueTest, RejectsNonFiniteDoubles) {
  EXPECT_THROW(AttributeValue(std::nan("")), Error);
  EXPECT_THROW(AttributeValue(std::numeric_limits<double>::infinity()), Error);
}

TEST(AttributeValueTest, UnknownTypeKeptAsString) {
  bool known = true;
  AttributeValue v = AttributeValue::from_typed_text("ex:thing", "prov:QUALIFIED_NAME", &known);
  EXPECT_FALSE(known);
  EXPECT_TRUE(v.is_string());
  EXPECT_EQ(v.type(), "prov:QUALIFIED_NAME");
  EXPECT_EQ(v.text(), "ex:thing");
}

TEST(AttributeValueTest, MalformedTypedTextThrows) {
  bool known = false;
  EXPECT_THROW(AttributeValue::from_typed_text("12x", "xsd:long", &known), Error);
  EXPECT_THROW(AttributeValue::from_typed_text("nan", "xsd:double", &known), Error);
  EXPECT_THROW(AttributeValue::from_typed_text("yes", "xsd:boolean", &known), Error);
  EXPECT_THROW(AttributeValue::from_typed_text("2023-13-01T00:00:00.000Z", "xsd:dateTime",
                                               &known),
               Error);
}

TEST(TimestampTest, KnownInstants) {
  EXPECT_EQ(format_timestamp_ms(0), "1970-01-01T00:00:00.000Z");
  std::int64_t ms = 0;
  ASSERT_TRUE(parse_timestamp_ms("2000-02-29T12:00:00.500Z", &ms));
  EXPECT_EQ(ms, 951825600500);
  EXPECT_FALSE(parse_timestamp_ms("2001-02-29T12:00:00.500Z", &ms));
  EXPECT_FALSE(parse_timestamp_ms("2000-02-29 12:00:00.500Z", &ms));
}

// Property: typed text round-trips exactly for every value kind.
TEST(AttributeValueProperty, TypedTextRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5000; ++i) {
    double d = testing::random_double(rng);
    AttributeValue v(d);
    bool known = false;
    AttributeValue back = AttributeValue::from_typed_text(v.text(), v.type(), &known);
    ASSERT_TRUE(known);
    ASSERT_EQ(std::memcmp(&d, &std::get<double>(back.value()), sizeof d), 0) << v.text();

    auto n = static_cast<std::int64_t>(rng());
    AttributeValue l(n);
    ASSERT_EQ(AttributeValue::from_typed_text(l.text(), l.type(), &known), l);

    std::int64_t ms = static_cast<std::int64_t>(rng() % 253402300800000ull);
    std::int64_t parsed = -1;
    ASSERT_TRUE(parse_timestamp_ms(format_timestamp_ms(ms), &parsed));
    ASSERT_EQ(parsed, ms);
  }
}

}  // namespace
}  // namespace provtrack
