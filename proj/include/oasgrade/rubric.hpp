// The nine-parameter correctness rubric and the grading pipeline.
//
// Scores are exact two-decimal fixed-point values stored as integer
// hundredths ("cents"), so attempt totals and replayed score tables compare
// bit-exactly. The allowed values per parameter:
//
//   P1 syntax            {0.00, 0.20}   no JSON findings, no structural findings
//   P2 render            {-0.10, 0.00}  -0.10 only when nothing materialized and
//                                       trivial repair failed
//   P3 rest_paths        {0.00, 0.20}   every path template passes the path rules
//   P4 rest_methods      {0.00, 0.15}   every operation passes the method rules
//   P5 security_scheme   {0.00, 0.20}   one oauth2 scheme, read+write scopes,
//                                       correctly linked to operations
//   P6 request_examples  {0.00, 0.05}   every declared request body has an example
//   P7 response_examples {0.00, 0.03, 0.05}  200-with-example on GETs,
//                                       201-with-example on POSTs; 0.03 when only
//                                       one endpoint class is covered
//   P8 error_codes       {0.00, 0.05}   some response code outside {200, 201}
//   P9 servers           {0.00, 0.10}   three distinct-URL servers covering
//                                       development, homologation and production
//
// P1 and P2 are decided on the cleaned text; P3..P9 on the (possibly
// repaired) document. An empty API fails the presence-based parameters
// (P3, P4, P6, P7, P8) rather than passing them vacuously.

#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "oasgrade/cleaner.hpp"
#include "oasgrade/oas_model.hpp"

namespace oasgrade {

// ---------------- score types ----------------

struct RubricParameter {
  int id;
  const char* name;
  int max_cents;
};

inline constexpr std::array<RubricParameter, 9> kRubric = {{
    {1, "syntax", 20},
    {2, "render", 0},
    {3, "rest_paths", 20},
    {4, "rest_methods", 15},
    {5, "security_scheme", 20},
    {6, "request_examples", 5},
    {7, "response_examples", 5},
    {8, "error_codes", 5},
    {9, "servers", 10},
}};

struct ParameterScore {
  int parameter_id = 0;
  int cents = 0;
  std::vector<std::string> evidence;
};

enum class PipelineId { direct, rag };

inline std::string_view to_string(PipelineId id) {
  return id == PipelineId::direct ? "direct" : "rag";
}

struct AttemptScore {
  int attempt_index = 1;
  PipelineId pipeline_id = PipelineId::direct;
  std::vector<ParameterScore> parameter_scores;  // exactly nine, ordered by id
  int total_cents = 0;
};

// "0.20", "-0.10", "1.00"
inline std::string format_cents(int cents) {
  std::string out = cents < 0 ? "-" : "";
  int a = cents < 0 ? -cents : cents;
  out += std::to_string(a / 100);
  out += '.';
  out += static_cast<char>('0' + (a / 10) % 10);
  out += static_cast<char>('0' + a % 10);
  return out;
}

namespace detail {

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
  return lowercase(haystack).find(lowercase(needle)) != std::string::npos;
}

}  // namespace detail

// ---------------- P1 / P2 ----------------

inline ParameterScore score_syntax(const ParseOutcome& parse) {
  ParameterScore score{1, 0, {}};
  if (parse.syntax_findings.empty()) {
    score.cents = 20;
  } else {
    for (const auto& f : parse.syntax_findings) {
      score.evidence.push_back(f.message);
    }
  }
  return score;
}

inline ParameterScore score_render(const ParseOutcome& parse, const RepairOutcome& repair) {
  ParameterScore score{2, 0, {}};
  if (!parse.document && !repair.repaired) {
    score.cents = -10;
    score.evidence.push_back("document could not be materialized");
  } else if (repair.repaired) {
    score.evidence.push_back(std::string("rendered after inserting '") +
                             *repair.inserted_char + "'");
  }
  return score;
}

// ---------------- P3: path rules ----------------

inline const char* const kPathVerbStoplist[] = {"get",    "create", "add",  "update",
                                                "delete", "list",   "fetch", "do",
                                                "make",   "set"};

inline bool is_path_parameter_segment(std::string_view seg) {
  return seg.size() >= 3 && seg.front() == '{' && seg.back() == '}' &&
         seg.find('{', 1) == std::string_view::npos &&
         seg.find('}') == seg.size() - 1;
}

// Violations of the frozen REST path rule set for one template. Empty means
// the template passes.
inline std::vector<std::string> path_rule_violations(std::string_view path) {
  std::vector<std::string> out;
  if (path.empty() || path.front() != '/') {
    out.push_back("does not begin with '/'");
    return out;
  }
  if (path.size() > 1 && path.back() == '/') {
    out.push_back("trailing slash");
  }
  std::vector<std::string_view> segments;
  {
    size_t start = 1;
    while (start <= path.size()) {
      size_t slash = path.find('/', start);
      if (slash == std::string_view::npos) {
        segments.push_back(path.substr(start));
        break;
      }
      segments.push_back(path.substr(start, slash - start));
      start = slash + 1;
    }
  }
  if (!segments.empty() && segments.back().empty()) segments.pop_back();  // trailing slash already reported
  bool previous_was_parameter = false;
  for (const auto& seg : segments) {
    if (seg.empty()) {
      out.push_back("empty segment");
      previous_was_parameter = false;
      continue;
    }
    if (is_path_parameter_segment(seg)) {
      if (previous_was_parameter) {
        out.push_back("adjacent path parameters at \"" + std::string(seg) + "\"");
      }
      previous_was_parameter = true;
      continue;
    }
    previous_was_parameter = false;
    std::string lower = detail::lowercase(seg);
    for (char c : seg) {
      if (std::isupper(static_cast<unsigned char>(c))) {
        out.push_back("segment \"" + std::string(seg) + "\" is not lowercase");
        break;
      }
    }
    if (seg.find('.') != std::string_view::npos) {
      out.push_back("segment \"" + std::string(seg) + "\" looks like a file extension");
    }
    for (const char* verb : kPathVerbStoplist) {
      size_t n = std::string_view(verb).size();
      if (lower.rfind(verb, 0) != 0) continue;
      bool boundary = seg.size() == n ||
                      std::isupper(static_cast<unsigned char>(seg[n])) ||
                      seg[n] == '-' || seg[n] == '_';
      if (boundary) {
        out.push_back("segment \"" + std::string(seg) + "\" has verb prefix \"" +
                      verb + "\"");
        break;
      }
    }
    if (seg.find('{') != std::string_view::npos || seg.find('}') != std::string_view::npos) {
      out.push_back("segment \"" + std::string(seg) + "\" mixes literal text and braces");
    } else if (lower.back() != 's') {
      out.push_back("segment \"" + std::string(seg) + "\" is not a plural noun");
    }
  }
  return out;
}

inline ParameterScore score_paths(const OasDocument& doc) {
  ParameterScore score{3, 0, {}};
  if (!doc.has_paths || doc.paths.empty()) {
    score.evidence.push_back("no paths declared");
    return score;
  }
  bool all_pass = true;
  for (const auto& [path, item] : doc.paths) {
    auto violations = path_rule_violations(path);
    for (const auto& v : violations) {
      score.evidence.push_back("path " + path + ": " + v);
    }
    if (!violations.empty()) all_pass = false;
  }
  if (all_pass) {
    score.cents = 20;
    for (const auto& [path, item] : doc.paths) {
      score.evidence.push_back("path " + path + " ok");
    }
  }
  return score;
}

// ---------------- P4: method rules ----------------

inline ParameterScore score_methods(const OasDocument& doc) {
  ParameterScore score{4, 0, {}};
  bool any_operation = false;
  bool all_pass = true;
  for (const auto& [path, item] : doc.paths) {
    for (const auto& key : item.unknown_keys) {
      all_pass = false;
      score.evidence.push_back("path " + path + ": non-standard method key \"" + key +
                               "\"");
    }
    bool item_path = false;
    {
      size_t slash = path.find_last_of('/');
      std::string_view last =
          slash == std::string::npos ? std::string_view(path) : std::string_view(path).substr(slash + 1);
      item_path = is_path_parameter_segment(last);
    }
    for (const auto& op : item.operations) {
      any_operation = true;
      if ((op.method == "get" || op.method == "head" || op.method == "delete") &&
          op.request_body) {
        all_pass = false;
        score.evidence.push_back(op.method + " " + path + ": carries a request body");
      }
      if (op.method == "post" && item_path) {
        all_pass = false;
        score.evidence.push_back("post " + path +
                                 ": creation on an item path instead of the collection");
      }
    }
  }
  if (!any_operation) {
    score.evidence.push_back("no operations declared");
    return score;
  }
  if (all_pass) score.cents = 15;
  return score;
}

// ---------------- P5: security scheme ----------------

inline const char* const kReadScopeKeywords[] = {"read", "query", "consulta", "get",
                                                 "view"};
inline const char* const kWriteScopeKeywords[] = {"write", "create", "post", "update",
                                                  "manage"};

namespace detail {

enum class ScopeClass { read, write, unclassified };

// Scopes the operation's effective security requires from the given scheme.
inline std::vector<std::string> effective_scopes(const OasDocument& doc,
                                                 const OperationObject& op,
                                                 std::string_view scheme_name) {
  const std::vector<SecurityRequirement>& reqs =
      op.security ? *op.security : doc.global_security;
  std::vector<std::string> out;
  for (const auto& req : reqs) {
    for (const auto& [name, scopes] : req.schemes) {
      if (name != scheme_name) continue;
      for (const auto& s : scopes) {
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
      }
    }
  }
  return out;
}

}  // namespace detail

inline ParameterScore score_security(const OasDocument& doc) {
  ParameterScore score{5, 0, {}};

  // (a) exactly one oauth2 scheme with at least two scopes
  const SecurityScheme* scheme = nullptr;
  std::string scheme_name;
  int oauth2_count = 0;
  for (const auto& [name, s] : doc.security_schemes) {
    if (s.type == SecurityScheme::Type::oauth2) {
      ++oauth2_count;
      scheme = &s;
      scheme_name = name;
    }
  }
  if (oauth2_count != 1) {
    score.evidence.push_back(oauth2_count == 0
                                 ? "no oauth2 security scheme declared"
                                 : "more than one oauth2 security scheme declared");
    return score;
  }
  std::vector<std::string> declared = scheme->declared_scopes();
  if (declared.size() < 2) {
    score.evidence.push_back("scheme \"" + scheme_name +
                             "\" declares fewer than two scopes");
    return score;
  }

  // (b) classify scopes: by name keyword first, by referencing methods second
  auto keyword_class = [](const std::string& scope) {
    bool read = false, write = false;
    for (const char* kw : kReadScopeKeywords) {
      if (detail::contains_ci(scope, kw)) read = true;
    }
    for (const char* kw : kWriteScopeKeywords) {
      if (detail::contains_ci(scope, kw)) write = true;
    }
    if (read && !write) return detail::ScopeClass::read;
    if (write && !read) return detail::ScopeClass::write;
    return detail::ScopeClass::unclassified;
  };
  std::vector<std::pair<std::string, detail::ScopeClass>> classes;
  for (const auto& scope : declared) {
    detail::ScopeClass cls = keyword_class(scope);
    if (cls == detail::ScopeClass::unclassified) {
      bool on_get = false, on_other = false;
      for (const auto& [path, item] : doc.paths) {
        for (const auto& op : item.operations) {
          auto scopes = detail::effective_scopes(doc, op, scheme_name);
          if (std::find(scopes.begin(), scopes.end(), scope) == scopes.end()) continue;
          (op.method == "get" ? on_get : on_other) = true;
        }
      }
      if (on_get && !on_other) cls = detail::ScopeClass::read;
      if (on_other && !on_get) cls = detail::ScopeClass::write;
    }
    classes.emplace_back(scope, cls);
  }
  auto class_of = [&](const std::string& scope) {
    for (const auto& [name, cls] : classes) {
      if (name == scope) return cls;
    }
    return detail::ScopeClass::unclassified;
  };
  bool have_read = false, have_write = false;
  for (const auto& [name, cls] : classes) {
    if (cls == detail::ScopeClass::read) have_read = true;
    if (cls == detail::ScopeClass::write) have_write = true;
  }
  if (!have_read || !have_write) {
    score.evidence.push_back("scheme \"" + scheme_name +
                             "\" has no distinguishable read and write scopes");
    return score;
  }

  // (c) linkage and (d) declaredness, per operation
  bool linked = true;
  for (const auto& [path, item] : doc.paths) {
    for (const auto& op : item.operations) {
      auto scopes = detail::effective_scopes(doc, op, scheme_name);
      for (const auto& s : scopes) {
        if (std::find(declared.begin(), declared.end(), s) == declared.end()) {
          linked = false;
          score.evidence.push_back(op.method + " " + path + ": scope \"" + s +
                                   "\" is not declared");
        }
      }
      bool has_read = false, has_write = false;
      for (const auto& s : scopes) {
        if (class_of(s) == detail::ScopeClass::read) has_read = true;
        if (class_of(s) == detail::ScopeClass::write) has_write = true;
      }
      if (op.method == "get" && !has_read) {
        linked = false;
        score.evidence.push_back("get " + path + ": does not require the read scope");
      }
      if (op.method != "get" && !has_write) {
        linked = false;
        score.evidence.push_back(op.method + " " + path +
                                 ": does not require the write scope");
      }
    }
  }
  if (!linked) return score;

  score.cents = 20;
  score.evidence.push_back("scheme \"" + scheme_name + "\" with scopes correctly linked");
  return score;
}

// ---------------- P6..P8: examples and error codes ----------------

inline ParameterScore score_request_examples(const OasDocument& doc) {
  ParameterScore score{6, 0, {}};
  bool any_body = false;
  bool all_covered = true;
  for (const auto& [path, item] : doc.paths) {
    for (const auto& op : item.operations) {
      if (!op.request_body) continue;
      any_body = true;
      if (!op.request_body->has_example) {
        all_covered = false;
        score.evidence.push_back(op.method + " " + path +
                                 ": request body has no example");
      }
    }
  }
  if (!any_body) {
    score.evidence.push_back("no operation declares a request body");
    return score;
  }
  if (all_covered) {
    score.cents = 5;
    score.evidence.push_back("every request body carries an example");
  }
  return score;
}

namespace detail {

// True when the endpoint class is non-empty and every operation in it has
// the required success response with an example payload.
inline bool success_examples_cover(const OasDocument& doc, std::string_view method,
                                   std::string_view code, std::string* why) {
  bool any = false;
  for (const auto& [path, item] : doc.paths) {
    for (const auto& op : item.operations) {
      if (op.method != method) continue;
      any = true;
      bool found = false;
      for (const auto& r : op.responses) {
        if (r.code == code && r.has_example) found = true;
      }
      if (!found) {
        if (why) *why = op.method + " " + path + ": no " + std::string(code) +
                        " response with example";
        return false;
      }
    }
  }
  if (!any) {
    if (why) *why = std::string("no ") + std::string(method) + " operations";
    return false;
  }
  return true;
}

}  // namespace detail

inline ParameterScore score_response_examples(const OasDocument& doc) {
  ParameterScore score{7, 0, {}};
  std::string why_get, why_post;
  bool gets = detail::success_examples_cover(doc, "get", "200", &why_get);
  bool posts = detail::success_examples_cover(doc, "post", "201", &why_post);
  if (gets) score.evidence.push_back("every get has a 200 response example");
  else score.evidence.push_back(why_get);
  if (posts) score.evidence.push_back("every post has a 201 response example");
  else score.evidence.push_back(why_post);
  if (gets && posts) score.cents = 5;
  else if (gets || posts) score.cents = 3;
  return score;
}

inline ParameterScore score_error_codes(const OasDocument& doc) {
  ParameterScore score{8, 0, {}};
  for (const auto& [path, item] : doc.paths) {
    for (const auto& op : item.operations) {
      for (const auto& r : op.responses) {
        if (r.code != "default" && is_valid_status_code_key(r.code) && r.code != "200" &&
            r.code != "201") {
          score.cents = 5;
          score.evidence.push_back(op.method + " " + path + ": declares " + r.code);
          return score;
        }
      }
    }
  }
  score.evidence.push_back("no status code besides 200/201 declared");
  return score;
}

// ---------------- P9: environment servers ----------------

inline const char* const kDevKeywords[] = {"dev", "desenvolvimento", "sandbox"};
inline const char* const kHmlKeywords[] = {"hml", "homolog", "staging", "test"};
inline const char* const kProdKeywords[] = {"prod", "api."};

inline ParameterScore score_servers(const OasDocument& doc) {
  ParameterScore score{9, 0, {}};
  if (doc.servers.size() < 3) {
    score.evidence.push_back("fewer than three servers declared");
    return score;
  }
  for (size_t i = 0; i < doc.servers.size(); ++i) {
    for (size_t j = i + 1; j < doc.servers.size(); ++j) {
      if (doc.servers[i].url == doc.servers[j].url) {
        score.evidence.push_back("duplicate server url \"" + doc.servers[i].url + "\"");
        return score;
      }
    }
  }
  // Classify by keyword, dev > hml > prod precedence; a server without any
  // marker counts as production once development and homologation are found.
  bool dev = false, hml = false, prod = false, unmarked = false;
  for (const auto& server : doc.servers) {
    std::string text = detail::lowercase(server.url + " " + server.description);
    auto matches = [&](const char* const* kws, size_t n) {
      for (size_t i = 0; i < n; ++i) {
        if (text.find(kws[i]) != std::string::npos) return true;
      }
      return false;
    };
    if (matches(kDevKeywords, 3)) {
      dev = true;
      score.evidence.push_back("development: " + server.url);
    } else if (matches(kHmlKeywords, 4)) {
      hml = true;
      score.evidence.push_back("homologation: " + server.url);
    } else if (matches(kProdKeywords, 2)) {
      prod = true;
      score.evidence.push_back("production: " + server.url);
    } else {
      unmarked = true;
    }
  }
  if (dev && hml && (prod || unmarked)) {
    score.cents = 10;
  } else {
    score.evidence.push_back("the three environments are not all identifiable");
  }
  return score;
}

// ---------------- grading pipeline ----------------

struct GradeResult {
  AttemptScore score;
  bool no_payload = false;
  CleanedText cleaned;
  ParseOutcome parse;       // of the cleaned text
  RepairOutcome repair;
  std::optional<OasDocument> document;  // the (possibly repaired) document graded
};

namespace detail {

inline ParameterScore unavailable(int id) {
  return {id, 0, {"document unavailable"}};
}

inline void finalize(AttemptScore& score) {
  score.total_cents = 0;
  for (const auto& p : score.parameter_scores) score.total_cents += p.cents;
}

}  // namespace detail

inline GradeResult grade_detailed(std::string_view raw) {
  GradeResult result;
  try {
    result.cleaned = clean_response(raw);
  } catch (const NoJsonPayload& e) {
    result.no_payload = true;
    auto& s = result.score.parameter_scores;
    s.push_back({1, 0, {e.what()}});
    s.push_back({2, -10, {e.what()}});
    for (int id = 3; id <= 9; ++id) s.push_back(detail::unavailable(id));
    detail::finalize(result.score);
    return result;
  }

  result.parse = parse_oas(result.cleaned.text);
  if (result.parse.has_blocking()) {
    result.repair = attempt_trivial_repair(result.cleaned.text, result.parse);
  }
  // Semantic parameters are graded on the repaired document when the repair
  // succeeded, otherwise on whatever materialized from the cleaned text.
  if (result.repair.repaired) {
    ParseOutcome repaired = parse_oas(*result.repair.repaired_text);
    result.document = repaired.document;
  } else {
    result.document = result.parse.document;
  }

  auto& s = result.score.parameter_scores;
  s.push_back(score_syntax(result.parse));
  s.push_back(score_render(result.parse, result.repair));
  if (result.document) {
    const OasDocument& doc = *result.document;
    s.push_back(score_paths(doc));
    s.push_back(score_methods(doc));
    s.push_back(score_security(doc));
    s.push_back(score_request_examples(doc));
    s.push_back(score_response_examples(doc));
    s.push_back(score_error_codes(doc));
    s.push_back(score_servers(doc));
  } else {
    for (int id = 3; id <= 9; ++id) s.push_back(detail::unavailable(id));
  }
  detail::finalize(result.score);
  return result;
}

inline AttemptScore grade(std::string_view raw) { return grade_detailed(raw).score; }

// ---------------- score serialization ----------------

inline JsonValue findings_to_json(const std::vector<SyntaxFinding>& findings) {
  JsonArray out;
  for (const auto& f : findings) {
    JsonObject finding;
    finding.push_back({"line", JsonValue(static_cast<double>(f.location.line))});
    finding.push_back({"column", JsonValue(static_cast<double>(f.location.column))});
    finding.push_back({"offset", JsonValue(static_cast<double>(f.location.offset))});
    finding.push_back({"message", JsonValue(f.message)});
    finding.push_back({"blocks_render", JsonValue(f.blocks_render)});
    out.push_back(JsonValue(std::move(finding)));
  }
  return JsonValue(std::move(out));
}

// JSON emission is manual so score values render with exactly two decimals.
inline std::string score_to_json(const AttemptScore& score, int indent = 2) {
  std::string pad(static_cast<size_t>(indent), ' ');
  std::string out = "{\n";
  out += pad + "\"pipeline\": \"" + std::string(to_string(score.pipeline_id)) + "\",\n";
  out += pad + "\"attempt\": " + std::to_string(score.attempt_index) + ",\n";
  out += pad + "\"parameters\": [\n";
  for (size_t i = 0; i < score.parameter_scores.size(); ++i) {
    const auto& p = score.parameter_scores[i];
    out += pad + pad + "{\"id\": " + std::to_string(p.parameter_id) + ", \"name\": \"" +
           kRubric[static_cast<size_t>(p.parameter_id - 1)].name +
           "\", \"score\": " + format_cents(p.cents) + ", \"evidence\": [";
    for (size_t k = 0; k < p.evidence.size(); ++k) {
      if (k) out += ", ";
      detail::append_json_escaped(out, p.evidence[k]);
    }
    out += "]}";
    out += i + 1 < score.parameter_scores.size() ? ",\n" : "\n";
  }
  out += pad + "],\n";
  out += pad + "\"total\": " + format_cents(score.total_cents) + "\n";
  out += "}\n";
  return out;
}

}  // namespace oasgrade
