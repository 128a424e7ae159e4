// OpenAPI 3.x document model: tolerant materialization from JSON, the fixed
// structural rule set, and single-character trivial repair.
//
// The model is deliberately permissive: wrong-typed or missing fields do not
// abort materialization, they surface later as structural findings or as
// failed rubric checks. Structural findings carry no text position
// (location 0:0) and never block rendering.
//
// Structural rule set (versioned here; grading depends on it):
//   S1  required root fields: openapi (string), info (object), paths (object)
//   S2  openapi version starts with "3."
//   S3  info has non-empty title and version
//   S4  every operation has a responses map with at least one entry
//   S5  response keys are three-digit codes [1-5]XX or the literal "default"
//   S6  every security requirement references a declared scheme
//   S7  every referenced scope is declared in that scheme's flows
//   S8  server entries have a non-empty url

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oasgrade/json.hpp"

namespace oasgrade {

// ---------------- document model ----------------

struct ServerEntry {
  std::string url;
  std::string description;
};

struct InfoObject {
  bool present = false;  // present and an object
  std::string title;
  std::string version;
  std::string description;
};

struct ResponseObject {
  std::string code;  // the responses map key, verbatim
  bool has_example = false;
};

struct RequestBodyObject {
  bool has_example = false;
};

// One requirement map: scheme name -> required scopes.
struct SecurityRequirement {
  std::vector<std::pair<std::string, std::vector<std::string>>> schemes;
};

struct OperationObject {
  std::string method;  // lowercase key: get, post, ...
  bool has_responses_map = false;
  std::vector<ResponseObject> responses;
  std::optional<RequestBodyObject> request_body;
  std::optional<std::vector<SecurityRequirement>> security;
};

struct PathItem {
  std::vector<OperationObject> operations;
  std::vector<std::string> unknown_keys;  // operation-like keys outside the standard seven
};

struct OAuthFlow {
  std::string name;  // clientCredentials, authorizationCode, ...
  std::string authorization_url;
  std::string token_url;
  std::vector<std::pair<std::string, std::string>> scopes;  // name -> description
};

struct SecurityScheme {
  enum class Type { oauth2, http, api_key, open_id_connect, other };
  Type type = Type::other;
  std::string type_text;
  std::vector<OAuthFlow> flows;

  std::vector<std::string> declared_scopes() const {
    std::vector<std::string> out;
    for (const auto& f : flows) {
      for (const auto& [name, _] : f.scopes) {
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
      }
    }
    return out;
  }
};

struct OasDocument {
  bool has_openapi = false;  // present and a string
  std::string openapi_version;
  InfoObject info;
  bool has_paths = false;  // present and an object
  std::vector<std::pair<std::string, PathItem>> paths;
  std::vector<ServerEntry> servers;
  std::vector<std::pair<std::string, SecurityScheme>> security_schemes;
  std::vector<SecurityRequirement> global_security;

  const SecurityScheme* find_scheme(std::string_view name) const {
    for (const auto& [n, s] : security_schemes) {
      if (n == name) return &s;
    }
    return nullptr;
  }
};

inline const char* const kStandardMethods[] = {"get",    "post", "put", "patch",
                                               "delete", "options", "head"};

inline bool is_standard_method(std::string_view key) {
  for (const char* m : kStandardMethods) {
    if (key == m) return true;
  }
  return false;
}

// ---------------- materialization ----------------

namespace detail {

inline std::string string_or_empty(const JsonValue* v) {
  return v && v->is_string() ? v->as_string() : std::string();
}

// An example payload counts when the subtree carries an "example" member or
// a non-empty "examples" member, at any depth. This covers media-type level
// examples, response-level examples and schema-level examples alike.
inline bool subtree_has_example(const JsonValue& v) {
  if (v.is_object()) {
    for (const auto& m : v.as_object()) {
      if (m.key == "example") return true;
      if (m.key == "examples") {
        if (m.value.is_object() && !m.value.as_object().empty()) return true;
        if (m.value.is_array() && !m.value.as_array().empty()) return true;
      }
      if (subtree_has_example(m.value)) return true;
    }
  } else if (v.is_array()) {
    for (const auto& e : v.as_array()) {
      if (subtree_has_example(e)) return true;
    }
  }
  return false;
}

inline std::vector<SecurityRequirement> build_security_list(const JsonValue& v) {
  std::vector<SecurityRequirement> out;
  if (!v.is_array()) return out;
  for (const auto& entry : v.as_array()) {
    if (!entry.is_object()) continue;
    SecurityRequirement req;
    for (const auto& m : entry.as_object()) {
      std::vector<std::string> scopes;
      if (m.value.is_array()) {
        for (const auto& s : m.value.as_array()) {
          if (s.is_string()) scopes.push_back(s.as_string());
        }
      }
      req.schemes.emplace_back(m.key, std::move(scopes));
    }
    out.push_back(std::move(req));
  }
  return out;
}

inline OperationObject build_operation(const std::string& method, const JsonValue& v) {
  OperationObject op;
  op.method = method;
  if (const JsonValue* responses = v.get("responses"); responses && responses->is_object()) {
    op.has_responses_map = true;
    for (const auto& m : responses->as_object()) {
      op.responses.push_back({m.key, subtree_has_example(m.value)});
    }
  }
  if (const JsonValue* body = v.get("requestBody"); body && body->is_object()) {
    op.request_body = RequestBodyObject{subtree_has_example(*body)};
  }
  if (const JsonValue* sec = v.get("security"); sec && sec->is_array()) {
    op.security = build_security_list(*sec);
  }
  return op;
}

inline PathItem build_path_item(const JsonValue& v) {
  PathItem item;
  if (!v.is_object()) return item;
  for (const auto& m : v.as_object()) {
    if (is_standard_method(m.key)) {
      item.operations.push_back(build_operation(m.key, m.value));
    } else if (m.key == "summary" || m.key == "description" || m.key == "parameters" ||
               m.key == "servers" || m.key == "$ref" ||
               m.key.rfind("x-", 0) == 0) {
      // path-item metadata, not an operation
    } else {
      item.unknown_keys.push_back(m.key);
    }
  }
  return item;
}

inline SecurityScheme build_scheme(const JsonValue& v) {
  SecurityScheme scheme;
  scheme.type_text = string_or_empty(v.get("type"));
  if (scheme.type_text == "oauth2") scheme.type = SecurityScheme::Type::oauth2;
  else if (scheme.type_text == "http") scheme.type = SecurityScheme::Type::http;
  else if (scheme.type_text == "apiKey") scheme.type = SecurityScheme::Type::api_key;
  else if (scheme.type_text == "openIdConnect") scheme.type = SecurityScheme::Type::open_id_connect;
  else scheme.type = SecurityScheme::Type::other;
  if (const JsonValue* flows = v.get("flows"); flows && flows->is_object()) {
    for (const auto& f : flows->as_object()) {
      if (!f.value.is_object()) continue;
      OAuthFlow flow;
      flow.name = f.key;
      flow.authorization_url = string_or_empty(f.value.get("authorizationUrl"));
      flow.token_url = string_or_empty(f.value.get("tokenUrl"));
      if (const JsonValue* scopes = f.value.get("scopes"); scopes && scopes->is_object()) {
        for (const auto& s : scopes->as_object()) {
          flow.scopes.emplace_back(s.key, string_or_empty(&s.value));
        }
      }
      scheme.flows.push_back(std::move(flow));
    }
  }
  return scheme;
}

}  // namespace detail

inline OasDocument build_document(const JsonValue& root) {
  OasDocument doc;
  if (!root.is_object()) return doc;
  if (const JsonValue* v = root.get("openapi"); v && v->is_string()) {
    doc.has_openapi = true;
    doc.openapi_version = v->as_string();
  }
  if (const JsonValue* v = root.get("info"); v && v->is_object()) {
    doc.info.present = true;
    doc.info.title = detail::string_or_empty(v->get("title"));
    doc.info.version = detail::string_or_empty(v->get("version"));
    doc.info.description = detail::string_or_empty(v->get("description"));
  }
  if (const JsonValue* v = root.get("servers"); v && v->is_array()) {
    for (const auto& entry : v->as_array()) {
      if (!entry.is_object()) continue;
      doc.servers.push_back({detail::string_or_empty(entry.get("url")),
                             detail::string_or_empty(entry.get("description"))});
    }
  }
  if (const JsonValue* v = root.get("paths"); v && v->is_object()) {
    doc.has_paths = true;
    for (const auto& m : v->as_object()) {
      doc.paths.emplace_back(m.key, detail::build_path_item(m.value));
    }
  }
  if (const JsonValue* components = root.get("components");
      components && components->is_object()) {
    if (const JsonValue* schemes = components->get("securitySchemes");
        schemes && schemes->is_object()) {
      for (const auto& m : schemes->as_object()) {
        if (m.value.is_object()) {
          doc.security_schemes.emplace_back(m.key, detail::build_scheme(m.value));
        }
      }
    }
  }
  if (const JsonValue* v = root.get("security")) {
    doc.global_security = detail::build_security_list(*v);
  }
  return doc;
}

// ---------------- structural validation ----------------

inline bool is_valid_status_code_key(std::string_view key) {
  if (key == "default") return true;
  if (key.size() != 3) return false;
  if (key[0] < '1' || key[0] > '5') return false;
  return key[1] >= '0' && key[1] <= '9' && key[2] >= '0' && key[2] <= '9';
}

namespace detail {

inline void check_requirements(const OasDocument& doc,
                               const std::vector<SecurityRequirement>& reqs,
                               const std::string& where,
                               std::vector<SyntaxFinding>& out) {
  auto add = [&](std::string msg) { out.push_back({{}, std::move(msg), false}); };
  for (const auto& req : reqs) {
    for (const auto& [scheme_name, scopes] : req.schemes) {
      const SecurityScheme* scheme = doc.find_scheme(scheme_name);
      if (!scheme) {
        add(where + ": security requirement references undeclared scheme \"" +
            scheme_name + "\"");
        continue;
      }
      auto declared = scheme->declared_scopes();
      for (const auto& scope : scopes) {
        if (std::find(declared.begin(), declared.end(), scope) == declared.end()) {
          add(where + ": scope \"" + scope + "\" is not declared in scheme \"" +
              scheme_name + "\"");
        }
      }
    }
  }
}

}  // namespace detail

inline std::vector<SyntaxFinding> validate_structure(const OasDocument& doc) {
  std::vector<SyntaxFinding> out;
  auto add = [&](std::string msg) { out.push_back({{}, std::move(msg), false}); };

  if (!doc.has_openapi) add("required root field \"openapi\" missing or not a string");
  if (!doc.info.present) add("required root field \"info\" missing or not an object");
  if (!doc.has_paths) add("required root field \"paths\" missing or not an object");
  if (doc.has_openapi && doc.openapi_version.rfind("3.", 0) != 0) {
    add("unsupported openapi version \"" + doc.openapi_version + "\", expected 3.x");
  }
  if (doc.info.present) {
    if (doc.info.title.empty()) add("info.title missing or empty");
    if (doc.info.version.empty()) add("info.version missing or empty");
  }
  for (size_t i = 0; i < doc.servers.size(); ++i) {
    if (doc.servers[i].url.empty()) {
      add("servers[" + std::to_string(i) + "] has an empty url");
    }
  }
  for (const auto& [path, item] : doc.paths) {
    for (const auto& op : item.operations) {
      std::string where = op.method + " " + path;
      if (!op.has_responses_map || op.responses.empty()) {
        add(where + ": operation has no responses");
      }
      for (const auto& r : op.responses) {
        if (!is_valid_status_code_key(r.code)) {
          add(where + ": invalid status code key \"" + r.code + "\"");
        }
      }
      if (op.security) {
        detail::check_requirements(doc, *op.security, where, out);
      }
    }
  }
  detail::check_requirements(doc, doc.global_security, "global security", out);
  return out;
}

// ---------------- parse outcome ----------------

struct ParseOutcome {
  std::optional<OasDocument> document;
  // JSON-level findings in source order, then structural findings.
  std::vector<SyntaxFinding> syntax_findings;
  bool fatal = false;  // nothing could be materialized, not even partially

  bool has_blocking() const {
    for (const auto& f : syntax_findings) {
      if (f.blocks_render) return true;
    }
    return false;
  }
};

// Parses raw text into a tolerant document model. A local JSON error drops
// only its subtree; structural rule violations are appended as non-blocking
// findings. fatal is reserved for total unreadability: invalid UTF-8 or no
// brace structure at all.
inline ParseOutcome parse_oas(std::string_view text) {
  ParseOutcome outcome;
  if (text.empty()) {
    outcome.fatal = true;
    outcome.syntax_findings.push_back({{}, "empty input", true});
    return outcome;
  }
  if (!is_valid_utf8(text)) {
    outcome.fatal = true;
    outcome.syntax_findings.push_back({{}, "input is not valid UTF-8", true});
    return outcome;
  }
  if (text.find('{') == std::string_view::npos) {
    outcome.fatal = true;
    outcome.syntax_findings.push_back({{}, "no JSON object structure in input", true});
    return outcome;
  }
  JsonParseResult parsed = parse_json_tolerant(text);
  outcome.syntax_findings = std::move(parsed.findings);
  if (!parsed.root) {
    return outcome;  // blocking findings already recorded by the parser
  }
  if (!parsed.root->is_object()) {
    outcome.syntax_findings.push_back({{}, "top-level value is not a JSON object", true});
    return outcome;
  }
  outcome.document = build_document(*parsed.root);
  auto structural = validate_structure(*outcome.document);
  outcome.syntax_findings.insert(outcome.syntax_findings.end(), structural.begin(),
                                 structural.end());
  return outcome;
}

// ---------------- trivial repair ----------------

struct RepairOutcome {
  bool repaired = false;
  std::optional<std::string> repaired_text;
  std::optional<char> inserted_char;
  std::optional<size_t> insert_offset;
};

// Tries to fix a non-rendering document with one inserted character. The
// candidate characters are tried in the order below, each at the offset of
// the first blocking finding, then one before, then one after. Succeeds on
// the first candidate whose re-parse has no blocking findings.
inline RepairOutcome attempt_trivial_repair(std::string_view text,
                                            const ParseOutcome& outcome) {
  RepairOutcome result;
  const SyntaxFinding* first_blocking = nullptr;
  for (const auto& f : outcome.syntax_findings) {
    if (f.blocks_render) {
      first_blocking = &f;
      break;
    }
  }
  if (!first_blocking) return result;

  static constexpr char kCandidates[] = {':', ',', '"', '}', ']'};
  const size_t reported = std::min(first_blocking->location.offset, text.size());
  const size_t offsets[3] = {reported, reported - 1, reported + 1};

  for (char c : kCandidates) {
    for (size_t i = 0; i < 3; ++i) {
      if (i == 1 && reported == 0) continue;       // no offset before 0
      if (offsets[i] > text.size()) continue;      // insertion past end
      std::string candidate(text);
      candidate.insert(candidate.begin() + static_cast<long>(offsets[i]), c);
      ParseOutcome reparsed = parse_oas(candidate);
      if (!reparsed.has_blocking()) {
        result.repaired = true;
        result.repaired_text = std::move(candidate);
        result.inserted_char = c;
        result.insert_offset = offsets[i];
        return result;
      }
    }
  }
  return result;
}

}  // namespace oasgrade
