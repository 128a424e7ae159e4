#include "oasgrade/json.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace oasgrade;

TEST(JsonParse, WellFormedDocumentHasNoFindings) {
  auto r = parse_json_tolerant(
      R"({"a": 1, "b": [true, null, "x\né"], "c": {"d": 2.5e3}, "e": -0.125})");
  ASSERT_TRUE(r.root.has_value());
  EXPECT_TRUE(r.findings.empty());
  EXPECT_EQ(r.root->get("a")->as_number(), 1.0);
  EXPECT_EQ(r.root->get("c")->get("d")->as_number(), 2500.0);
  EXPECT_EQ(r.root->get("b")->as_array().size(), 3u);
}

TEST(JsonParse, ObjectKeysKeepInsertionOrder) {
  auto r = parse_json_tolerant(R"({"z": 1, "a": 2, "m": 3})");
  ASSERT_TRUE(r.findings.empty());
  const auto& o = r.root->as_object();
  EXPECT_EQ(o[0].key, "z");
  EXPECT_EQ(o[1].key, "a");
  EXPECT_EQ(o[2].key, "m");
}

TEST(JsonParse, MissingColonIsBlockingAndKeepsSiblings) {
  auto r = parse_json_tolerant(R"({"openapi" "3.0.0", "info": {"title": "t"}})");
  ASSERT_TRUE(r.root.has_value());
  EXPECT_TRUE(r.has_blocking());
  // the broken member is dropped, the sibling survives
  EXPECT_EQ(r.root->get("openapi"), nullptr);
  ASSERT_NE(r.root->get("info"), nullptr);
  EXPECT_EQ(r.root->get("info")->get("title")->as_string(), "t");
  // the finding points at the token where ':' was expected
  ASSERT_FALSE(r.findings.empty());
  EXPECT_EQ(r.findings[0].location.offset, 11u);
  EXPECT_EQ(r.findings[0].location.line, 1u);
  EXPECT_EQ(r.findings[0].location.column, 12u);
}

TEST(JsonParse, NestedErrorLosesOnlyItsSubtree) {
  auto r = parse_json_tolerant(R"({"a": {"x" 1, "y": 2}, "b": 3})");
  ASSERT_TRUE(r.root.has_value());
  EXPECT_TRUE(r.has_blocking());
  EXPECT_NE(r.root->get("b"), nullptr);
  // "y" survives inside the inner object: recovery resumes at the comma
  ASSERT_NE(r.root->get("a"), nullptr);
  EXPECT_NE(r.root->get("a")->get("y"), nullptr);
}

TEST(JsonParse, TrailingCommaIsNonBlocking) {
  auto r = parse_json_tolerant(R"({"a": 1,})");
  ASSERT_TRUE(r.root.has_value());
  ASSERT_EQ(r.findings.size(), 1u);
  EXPECT_FALSE(r.findings[0].blocks_render);
  EXPECT_NE(r.root->get("a"), nullptr);
}

TEST(JsonParse, DuplicateKeyKeepsFirstAndWarns) {
  auto r = parse_json_tolerant(R"({"a": 1, "a": 2})");
  ASSERT_TRUE(r.root.has_value());
  ASSERT_EQ(r.findings.size(), 1u);
  EXPECT_FALSE(r.findings[0].blocks_render);
  EXPECT_EQ(r.root->get("a")->as_number(), 1.0);
}

TEST(JsonParse, UnterminatedStringReportsAtTheMissingQuote) {
  std::string text = R"({"key": "value})";
  auto r = parse_json_tolerant(text);
  EXPECT_TRUE(r.has_blocking());
  ASSERT_FALSE(r.findings.empty());
  // reported where the closing quote should have been (end of input here)
  EXPECT_EQ(r.findings[0].location.offset, text.size());
}

TEST(JsonParse, MissingClosingBraceReportsAtEof) {
  std::string text = R"({"a": 1)";
  auto r = parse_json_tolerant(text);
  EXPECT_TRUE(r.has_blocking());
  ASSERT_FALSE(r.findings.empty());
  EXPECT_EQ(r.findings[0].location.offset, text.size());
}

TEST(JsonParse, FindingLocationsTrackLines) {
  auto r = parse_json_tolerant("{\n  \"a\": @\n}");
  ASSERT_FALSE(r.findings.empty());
  EXPECT_EQ(r.findings[0].location.line, 2u);
  EXPECT_EQ(r.findings[0].location.column, 8u);
}

TEST(JsonParse, DeterministicFindingOrder) {
  std::string text = R"({"a" 1, "b": [1 2], "c": {"d" 3}})";
  auto r1 = parse_json_tolerant(text);
  auto r2 = parse_json_tolerant(text);
  ASSERT_EQ(r1.findings.size(), r2.findings.size());
  for (size_t i = 0; i < r1.findings.size(); ++i) {
    EXPECT_EQ(r1.findings[i].location.offset, r2.findings[i].location.offset);
    EXPECT_EQ(r1.findings[i].message, r2.findings[i].message);
    EXPECT_EQ(r1.findings[i].blocks_render, r2.findings[i].blocks_render);
  }
  ASSERT_TRUE(r1.root.has_value() && r2.root.has_value());
  EXPECT_TRUE(*r1.root == *r2.root);
}

TEST(JsonUtf8, RejectsInvalidSequences) {
  EXPECT_TRUE(is_valid_utf8("plain ascii"));
  EXPECT_TRUE(is_valid_utf8("caf\xc3\xa9"));
  EXPECT_FALSE(is_valid_utf8("\xc3"));          // truncated
  EXPECT_FALSE(is_valid_utf8("\xc0\xaf"));      // overlong
  EXPECT_FALSE(is_valid_utf8("\xed\xa0\x80"));  // surrogate
  EXPECT_FALSE(is_valid_utf8("\xff"));
}

// ---------------- serialize/parse fixpoint property ----------------

namespace {

JsonValue random_value(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth > 3 ? 3 : 5);
  auto random_string = [&] {
    std::uniform_int_distribution<int> len(0, 8);
    std::uniform_int_distribution<int> ch(0, 95);
    std::string s;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
      char c = static_cast<char>(' ' + ch(rng));
      s += c;
    }
    return s;
  };
  switch (kind(rng)) {
    case 0: return JsonValue(nullptr);
    case 1: return JsonValue(rng() % 2 == 0);
    case 2: {
      std::uniform_real_distribution<double> num(-1e6, 1e6);
      return JsonValue(num(rng));
    }
    case 3: return JsonValue(random_string());
    case 4: {
      JsonArray a;
      std::uniform_int_distribution<int> len(0, 4);
      int n = len(rng);
      for (int i = 0; i < n; ++i) a.push_back(random_value(rng, depth + 1));
      return JsonValue(std::move(a));
    }
    default: {
      JsonObject o;
      std::uniform_int_distribution<int> len(0, 4);
      int n = len(rng);
      for (int i = 0; i < n; ++i) {
        std::string key = "k" + std::to_string(i) + random_string();
        o.push_back({key, random_value(rng, depth + 1)});
      }
      return JsonValue(std::move(o));
    }
  }
}

}  // namespace

TEST(JsonFixpoint, SerializeThenParseYieldsEqualModel) {
  std::mt19937 rng(20240817);
  for (int i = 0; i < 300; ++i) {
    JsonValue v = random_value(rng, 0);
    for (int indent : {0, 2}) {
      std::string text = serialize_json(v, indent);
      auto r = parse_json_tolerant(text);
      ASSERT_TRUE(r.root.has_value()) << text;
      EXPECT_TRUE(r.findings.empty()) << text;
      EXPECT_TRUE(*r.root == v) << text;
    }
  }
}

TEST(JsonFixpoint, NumbersRoundTripExactly) {
  for (double v : {0.1, 1e-300, 6.02e23, -1.0 / 3.0, 1234567890.123456}) {
    std::string text = serialize_json(JsonValue(v));
    auto r = parse_json_tolerant(text);
    ASSERT_TRUE(r.findings.empty());
    EXPECT_EQ(r.root->as_number(), v);
  }
}
