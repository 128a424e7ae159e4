#include "oasgrade/rubric.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>
#include <thread>
#include <sstream>

using namespace oasgrade;

namespace {

std::string fixture(const std::string& relative) {
  std::ifstream in(std::string(OASGRADE_FIXTURE_DIR) + "/" + relative,
                   std::ios::binary);
  EXPECT_TRUE(in) << relative;
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

OasDocument document_of(const std::string& text) {
  ParseOutcome outcome = parse_oas(text);
  EXPECT_TRUE(outcome.document.has_value()) << text;
  return *outcome.document;
}

// skeleton with pluggable fragments, small enough to read at a glance
std::string doc_with(const std::string& paths_json,
                     const std::string& components_json = "",
                     const std::string& servers_json = "") {
  std::string out = R"({"openapi": "3.0.0", "info": {"title": "T", "version": "1"})";
  if (!servers_json.empty()) out += ", \"servers\": " + servers_json;
  out += ", \"paths\": " + paths_json;
  if (!components_json.empty()) out += ", \"components\": " + components_json;
  out += "}";
  return out;
}

const std::string kOauthComponents = R"({"securitySchemes": {"auth": {
  "type": "oauth2",
  "flows": {"clientCredentials": {"tokenUrl": "https://t/token",
    "scopes": {"loans.read": "query", "loans.write": "mutate"}}}}}})";

int cents_of(const ParameterScore& p) { return p.cents; }

}  // namespace

// ---------------- grade ----------------

TEST(Grade, GoldenFixtureScoresExactlyOne) {
  AttemptScore score = grade(fixture("golden/loans.json"));
  EXPECT_EQ(score.total_cents, 100);
  for (const auto& p : score.parameter_scores) {
    EXPECT_EQ(p.cents, kRubric[static_cast<size_t>(p.parameter_id - 1)].max_cents);
  }
}

TEST(Grade, SeededAttemptFixtureReplaysItsVector) {
  AttemptScore score = grade(fixture("stub/direct-01.txt"));
  const int expected[9] = {0, 0, 0, 15, 20, 5, 5, 5, 10};
  ASSERT_EQ(score.parameter_scores.size(), 9u);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(score.parameter_scores[i].cents, expected[i]) << i;
  EXPECT_EQ(score.total_cents, 60);
}

TEST(Grade, EmptyBracesScoreZero) {
  AttemptScore score = grade("{}");
  EXPECT_EQ(score.total_cents, 0);
  EXPECT_EQ(score.parameter_scores[0].cents, 0);   // structural findings
  EXPECT_EQ(score.parameter_scores[1].cents, 0);   // still renders
}

TEST(Grade, UnusableGenerationIsTheFloor) {
  AttemptScore score = grade("no payload here at all");
  EXPECT_EQ(score.total_cents, -10);
  EXPECT_EQ(score.parameter_scores[1].cents, -10);
}

// ---------------- P1 / P2 ----------------

TEST(ScoreSyntax, CleanDocumentEarnsFullMarks) {
  EXPECT_EQ(score_syntax(parse_oas(fixture("golden/loans.json"))).cents, 20);
}

TEST(ScoreSyntax, AnyFindingZeroesTheParameter) {
  std::string text = doc_with(R"({"/items": {"get": {"summary": "none"}}})");
  ParseOutcome outcome = parse_oas(text);  // operation has no responses
  EXPECT_EQ(score_syntax(outcome).cents, 0);
}

TEST(ScoreRender, RepairedDocumentIsNotPenalized) {
  std::string text = fixture("defects/missing_colon.json");
  ParseOutcome outcome = parse_oas(text);
  RepairOutcome repair = attempt_trivial_repair(text, outcome);
  ASSERT_TRUE(repair.repaired);
  EXPECT_EQ(score_render(outcome, repair).cents, 0);
}

TEST(ScoreRender, UnrecoverableTextIsPenalized) {
  ParseOutcome outcome = parse_oas("][");
  RepairOutcome repair;
  EXPECT_EQ(score_render(outcome, repair).cents, -10);
}

TEST(ScoreRender, CleanDocumentIsNeutral) {
  EXPECT_EQ(score_render(parse_oas("{}"), RepairOutcome{}).cents, 0);
}

// ---------------- P3 ----------------

TEST(ScorePaths, PluralNounsAndParametersPass) {
  auto doc = document_of(doc_with(
      R"({"/loans": {"get": {"responses": {"200": {"description": "ok"}}}},
          "/loans/{loanId}": {"get": {"responses": {"200": {"description": "ok"}}}}})"));
  EXPECT_EQ(score_paths(doc).cents, 20);
}

TEST(ScorePaths, VerbPrefixFails) {
  auto doc = document_of(
      doc_with(R"({"/getLoans": {"get": {"responses": {"200": {"description": "ok"}}}}})"));
  ParameterScore score = score_paths(doc);
  EXPECT_EQ(score.cents, 0);
  bool cites_verb = false;
  for (const auto& e : score.evidence) {
    if (e.find("verb prefix") != std::string::npos) cites_verb = true;
  }
  EXPECT_TRUE(cites_verb);
}

TEST(ScorePaths, EmptyPathsMapFails) {
  EXPECT_EQ(score_paths(document_of(doc_with("{}"))).cents, 0);
}

TEST(ScorePaths, RuleTable) {
  EXPECT_TRUE(path_rule_violations("/loans").empty());
  EXPECT_TRUE(path_rule_violations("/loans/{loanId}").empty());
  EXPECT_TRUE(path_rule_violations("/loans/{loanId}/installments").empty());
  EXPECT_FALSE(path_rule_violations("/loan").empty());             // singular
  EXPECT_FALSE(path_rule_violations("/Loans").empty());            // uppercase
  EXPECT_FALSE(path_rule_violations("/loans/").empty());           // trailing slash
  EXPECT_FALSE(path_rule_violations("/loans.json").empty());       // extension
  EXPECT_FALSE(path_rule_violations("/loans/{a}/{b}").empty());    // adjacent params
  EXPECT_FALSE(path_rule_violations("/list-loans").empty());       // verb prefix
  EXPECT_FALSE(path_rule_violations("loans").empty());             // no leading slash
  EXPECT_TRUE(path_rule_violations("/settings").empty());          // "set" inside a noun
}

// ---------------- P4 ----------------

TEST(ScoreMethods, CollectionGetAndPostPass) {
  auto doc = document_of(doc_with(
      R"({"/loans": {
            "get": {"responses": {"200": {"description": "ok"}}},
            "post": {"requestBody": {"content": {}}, "responses": {"201": {"description": "ok"}}}}})"));
  EXPECT_EQ(score_methods(doc).cents, 15);
}

TEST(ScoreMethods, GetWithRequestBodyFails) {
  auto doc = document_of(doc_with(
      R"({"/loans": {"get": {"requestBody": {"content": {}},
                             "responses": {"200": {"description": "ok"}}}}})"));
  EXPECT_EQ(score_methods(doc).cents, 0);
}

TEST(ScoreMethods, PostOnItemPathFails) {
  auto doc = document_of(doc_with(
      R"({"/loans/{loanId}": {"post": {"responses": {"201": {"description": "ok"}}}}})"));
  EXPECT_EQ(score_methods(doc).cents, 0);
}

TEST(ScoreMethods, NonStandardMethodKeyFails) {
  auto doc = document_of(doc_with(
      R"({"/loans": {"fetch": {"responses": {"200": {"description": "ok"}}},
                     "get": {"responses": {"200": {"description": "ok"}}}}})"));
  EXPECT_EQ(score_methods(doc).cents, 0);
}

TEST(ScoreMethods, NoOperationsFail) {
  EXPECT_EQ(score_methods(document_of(doc_with("{}"))).cents, 0);
}

// ---------------- P5 ----------------

namespace {

std::string secured_paths(const std::string& get_scope, const std::string& post_scope) {
  return R"({"/loans": {
    "get": {"security": [{"auth": [")" + get_scope + R"("]}],
            "responses": {"200": {"description": "ok"}}},
    "post": {"security": [{"auth": [")" + post_scope + R"("]}],
             "responses": {"201": {"description": "ok"}}}}})";
}

}  // namespace

TEST(ScoreSecurity, LinkedReadAndWriteScopesPass) {
  auto doc = document_of(
      doc_with(secured_paths("loans.read", "loans.write"), kOauthComponents));
  EXPECT_EQ(score_security(doc).cents, 20);
}

TEST(ScoreSecurity, CrossLinkedScopesFail) {
  auto doc = document_of(
      doc_with(secured_paths("loans.write", "loans.read"), kOauthComponents));
  ParameterScore score = score_security(doc);
  EXPECT_EQ(score.cents, 0);
  bool cites_get = false;
  for (const auto& e : score.evidence) {
    if (e.find("get /loans") != std::string::npos) cites_get = true;
  }
  EXPECT_TRUE(cites_get);
}

TEST(ScoreSecurity, MissingSchemeSectionFails) {
  auto doc = document_of(doc_with(secured_paths("loans.read", "loans.write")));
  EXPECT_EQ(score_security(doc).cents, 0);
}

TEST(ScoreSecurity, SingleScopeFails) {
  std::string components = R"({"securitySchemes": {"auth": {
    "type": "oauth2",
    "flows": {"clientCredentials": {"tokenUrl": "https://t",
      "scopes": {"loans.all": "everything"}}}}}})";
  auto doc = document_of(doc_with(secured_paths("loans.all", "loans.all"), components));
  EXPECT_EQ(score_security(doc).cents, 0);
}

TEST(ScoreSecurity, GlobalSecurityLinksOperationsToo) {
  std::string text = R"({"openapi": "3.0.0", "info": {"title": "T", "version": "1"},
    "security": [{"auth": ["loans.read", "loans.write"]}],
    "paths": {"/loans": {
      "get": {"responses": {"200": {"description": "ok"}}},
      "post": {"responses": {"201": {"description": "ok"}}}}},
    "components": )" + kOauthComponents + "}";
  auto doc = document_of(text);
  // both methods inherit read+write globally: GET sees a read scope, POST a
  // write scope, so the linkage holds
  EXPECT_EQ(score_security(doc).cents, 20);
}

TEST(ScoreSecurity, UnsecuredOperationFailsTheLinkage) {
  auto doc = document_of(doc_with(
      R"({"/loans": {"get": {"responses": {"200": {"description": "ok"}}}}})",
      kOauthComponents));
  EXPECT_EQ(score_security(doc).cents, 0);
}

// ---------------- P6 ----------------

TEST(ScoreRequestExamples, BodyWithExamplePasses) {
  auto doc = document_of(doc_with(
      R"({"/loans": {"post": {
        "requestBody": {"content": {"application/json": {"example": {"x": 1}}}},
        "responses": {"201": {"description": "ok"}}}}})"));
  EXPECT_EQ(score_request_examples(doc).cents, 5);
}

TEST(ScoreRequestExamples, BodyWithoutExampleFails) {
  auto doc = document_of(doc_with(
      R"({"/loans": {"post": {
        "requestBody": {"content": {"application/json": {"schema": {}}}},
        "responses": {"201": {"description": "ok"}}}}})"));
  EXPECT_EQ(score_request_examples(doc).cents, 0);
}

TEST(ScoreRequestExamples, GetOnlyApiHasNothingToCover) {
  auto doc = document_of(doc_with(
      R"({"/loans": {"get": {"responses": {"200": {"description": "ok"}}}}})"));
  EXPECT_EQ(score_request_examples(doc).cents, 0);
}

// ---------------- P7 ----------------

namespace {

std::string response_paths(bool get_example, bool post_example) {
  std::string get_resp = get_example
      ? R"({"description": "ok", "content": {"application/json": {"example": {"a": 1}}}})"
      : R"({"description": "ok"})";
  std::string post_resp = post_example
      ? R"({"description": "ok", "content": {"application/json": {"example": {"b": 2}}}})"
      : R"({"description": "ok"})";
  return R"({"/loans": {
    "get": {"responses": {"200": )" + get_resp + R"(}},
    "post": {"responses": {"201": )" + post_resp + R"(}}}})";
}

}  // namespace

TEST(ScoreResponseExamples, BothClassesCovered) {
  EXPECT_EQ(score_response_examples(document_of(doc_with(response_paths(true, true)))).cents, 5);
}

TEST(ScoreResponseExamples, OnlyOneClassCovered) {
  EXPECT_EQ(score_response_examples(document_of(doc_with(response_paths(true, false)))).cents, 3);
  EXPECT_EQ(score_response_examples(document_of(doc_with(response_paths(false, true)))).cents, 3);
}

TEST(ScoreResponseExamples, NeitherClassCovered) {
  EXPECT_EQ(score_response_examples(document_of(doc_with(response_paths(false, false)))).cents, 0);
}

// ---------------- P8 ----------------

namespace {

OasDocument doc_with_codes(const std::string& codes_json) {
  return document_of(doc_with(
      R"({"/loans": {"get": {"responses": )" + codes_json + "}}}"));
}

}  // namespace

TEST(ScoreErrorCodes, FourHundredCounts) {
  EXPECT_EQ(score_error_codes(doc_with_codes(
      R"({"200": {"description": "ok"}, "400": {"description": "bad"}})")).cents, 5);
}

TEST(ScoreErrorCodes, OnlySuccessCodesFail) {
  EXPECT_EQ(score_error_codes(doc_with_codes(R"({"200": {"description": "ok"}})")).cents, 0);
}

TEST(ScoreErrorCodes, AnyNonSuccessNumericCodeCounts) {
  EXPECT_EQ(score_error_codes(doc_with_codes(
      R"({"201": {"description": "ok"}, "401": {"description": "no"},
          "500": {"description": "boom"}})")).cents, 5);
}

TEST(ScoreErrorCodes, MalformedKeysAndDefaultDoNotCount) {
  EXPECT_EQ(score_error_codes(doc_with_codes(
      R"({"200": {"description": "ok"}, "20": {"description": "?"},
          "default": {"description": "fallback"}})")).cents, 0);
}

// ---------------- P9 ----------------

namespace {

ParameterScore servers_score(const std::string& servers_json) {
  return score_servers(document_of(doc_with(
      R"({"/loans": {"get": {"responses": {"200": {"description": "ok"}}}}})", "",
      servers_json)));
}

}  // namespace

TEST(ScoreServers, ThreeMarkedEnvironmentsPass) {
  EXPECT_EQ(servers_score(R"([
    {"url": "https://dev.bank.example/v1"},
    {"url": "https://hml.bank.example/v1"},
    {"url": "https://prod.bank.example/v1"}])").cents, 10);
}

TEST(ScoreServers, DescriptionsCanCarryTheMarkers) {
  EXPECT_EQ(servers_score(R"([
    {"url": "https://a.example", "description": "sandbox"},
    {"url": "https://b.example", "description": "staging"},
    {"url": "https://c.example", "description": "production"}])").cents, 10);
}

TEST(ScoreServers, UnmarkedServerCountsAsProductionWhenOthersAreFound) {
  EXPECT_EQ(servers_score(R"([
    {"url": "https://dev.bank.example/v1"},
    {"url": "https://homolog.bank.example/v1"},
    {"url": "https://bank.example/v1"}])").cents, 10);
}

TEST(ScoreServers, OneServerFails) {
  EXPECT_EQ(servers_score(R"([{"url": "https://api.bank.example/v1"}])").cents, 0);
}

TEST(ScoreServers, IdenticalUrlsFail) {
  EXPECT_EQ(servers_score(R"([
    {"url": "https://api.bank.example/v1", "description": "Development"},
    {"url": "https://api.bank.example/v1", "description": "Homologation"},
    {"url": "https://api.bank.example/v1", "description": "Production"}])").cents, 0);
}

TEST(ScoreServers, MissingEnvironmentFails) {
  EXPECT_EQ(servers_score(R"([
    {"url": "https://dev.a.example"},
    {"url": "https://dev.b.example"},
    {"url": "https://dev.c.example"}])").cents, 0);
}

// ---------------- invariants ----------------

namespace {

const std::set<int> kAllowed[9] = {{0, 20}, {-10, 0}, {0, 20},   {0, 15}, {0, 20},
                                   {0, 5},  {0, 3, 5}, {0, 5},   {0, 10}};

void check_invariants(const AttemptScore& score) {
  ASSERT_EQ(score.parameter_scores.size(), 9u);
  int sum = 0;
  for (int i = 0; i < 9; ++i) {
    const ParameterScore& p = score.parameter_scores[static_cast<size_t>(i)];
    EXPECT_EQ(p.parameter_id, i + 1);
    EXPECT_TRUE(kAllowed[i].count(p.cents)) << "P" << i + 1 << " = " << p.cents;
    sum += p.cents;
  }
  EXPECT_EQ(score.total_cents, sum);
  EXPECT_GE(score.total_cents, -10);
  EXPECT_LE(score.total_cents, 100);
}

}  // namespace

TEST(RubricInvariants, HoldOnRandomMutants) {
  std::string golden = fixture("golden/loans.json");
  std::mt19937 rng(4242);
  std::uniform_int_distribution<size_t> pos(0, golden.size() - 1);
  const std::string alphabet = "{}[],:\"x0 ";
  for (int i = 0; i < 150; ++i) {
    std::string mutated = golden;
    switch (i % 3) {
      case 0: mutated.erase(pos(rng) % mutated.size(), 1); break;
      case 1: mutated.insert(pos(rng) % mutated.size(), 1, alphabet[rng() % alphabet.size()]); break;
      default: mutated[pos(rng) % mutated.size()] = alphabet[rng() % alphabet.size()];
    }
    AttemptScore first = grade(mutated);
    check_invariants(first);
    AttemptScore second = grade(mutated);
    EXPECT_EQ(first.total_cents, second.total_cents);
    for (int p = 0; p < 9; ++p) {
      EXPECT_EQ(first.parameter_scores[p].cents, second.parameter_scores[p].cents);
    }
  }
}

TEST(RubricInvariants, MaximumTotalOnlyWhenEveryParameterIsMaximal) {
  AttemptScore golden = grade(fixture("golden/loans.json"));
  EXPECT_EQ(golden.total_cents, 100);
  AttemptScore damaged = grade(fixture("stub/direct-03.txt"));
  EXPECT_LT(damaged.total_cents, 100);
}

TEST(RubricInvariants, RepairNeverDecreasesRender) {
  std::string text = fixture("defects/missing_colon.json");
  GradeResult before = grade_detailed(text);
  ASSERT_TRUE(before.repair.repaired);
  GradeResult after = grade_detailed(*before.repair.repaired_text);
  EXPECT_GE(after.score.parameter_scores[1].cents, before.score.parameter_scores[1].cents);
}

TEST(ScoreSecurity, TwoOauth2SchemesFail) {
  std::string components = R"({"securitySchemes": {
    "auth": {"type": "oauth2", "flows": {"clientCredentials": {"tokenUrl": "https://t",
      "scopes": {"loans.read": "q", "loans.write": "m"}}}},
    "other": {"type": "oauth2", "flows": {"clientCredentials": {"tokenUrl": "https://u",
      "scopes": {"x.read": "q", "x.write": "m"}}}}}})";
  auto doc = document_of(doc_with(secured_paths("loans.read", "loans.write"), components));
  EXPECT_EQ(score_security(doc).cents, 0);
}

TEST(RubricInvariants, ConcurrentGradingLeavesScoresUnchanged) {
  std::vector<std::string> texts = {
      fixture("golden/loans.json"), fixture("stub/direct-01.txt"),
      fixture("stub/rag-09.txt"), fixture("defects/missing_colon.json")};
  std::vector<int> serial;
  for (const auto& t : texts) serial.push_back(grade(t).total_cents);

  std::vector<std::thread> workers;
  std::vector<std::array<int, 4>> results(8);
  for (size_t w = 0; w < results.size(); ++w) {
    workers.emplace_back([&, w] {
      for (size_t i = 0; i < texts.size(); ++i) {
        results[w][i] = grade(texts[i]).total_cents;
      }
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& row : results) {
    for (size_t i = 0; i < texts.size(); ++i) EXPECT_EQ(row[i], serial[i]);
  }
}

TEST(RubricInvariants, SemanticScoresDependOnlyOnTheModel) {
  // the same document serialized compactly and pretty earns identical P3..P9
  std::string text = fixture("golden/loans.json");
  auto parsed = parse_json_tolerant(text);
  ASSERT_TRUE(parsed.findings.empty());
  AttemptScore compact = grade(serialize_json(*parsed.root));
  AttemptScore pretty = grade(serialize_json(*parsed.root, 4));
  for (int p = 2; p < 9; ++p) {
    EXPECT_EQ(compact.parameter_scores[p].cents, pretty.parameter_scores[p].cents);
  }
}
