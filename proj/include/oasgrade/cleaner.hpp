// Response cleaning: turns a raw model reply into candidate OAS JSON text.
//
// Pipeline, in order:
//   1. if a fenced code block is present, keep only the first fence's body
//   2. extract the first balanced {...} region (brace counting is
//      string-literal aware, so "/loans/{loanId}" does not derail it)
//   3. undo one level of string escaping -- replace the two-character
//      sequences \n and \" with a line break and a double quote -- but only
//      when those sequences are present and the text does not already parse
//      as JSON
//
// Input that already parses as a JSON object is returned byte-identical.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oasgrade/json.hpp"

namespace oasgrade {

// Raised when no JSON object can be located in a response: no '{' at all or
// braces that never balance. The caller grades such a generation as a fatal
// parse.
struct NoJsonPayload : std::runtime_error {
  explicit NoJsonPayload(const std::string& what) : std::runtime_error(what) {}
};

enum class CleanStep {
  stripped_prose,
  stripped_fences,
  unescaped_newlines,
  unescaped_quotes,
  extracted_braces,
};

inline std::string_view to_string(CleanStep step) {
  switch (step) {
    case CleanStep::stripped_prose: return "stripped_prose";
    case CleanStep::stripped_fences: return "stripped_fences";
    case CleanStep::unescaped_newlines: return "unescaped_newlines";
    case CleanStep::unescaped_quotes: return "unescaped_quotes";
    case CleanStep::extracted_braces: return "extracted_braces";
  }
  return "?";
}

struct CleanedText {
  std::string text;
  std::vector<CleanStep> applied_steps;
};

namespace detail {

// A fence opener is ``` at the start of a line (markdown convention), so a
// stray ``` inside a JSON string value does not count.
inline size_t find_fence(std::string_view text, size_t from) {
  size_t pos = from;
  while (true) {
    pos = text.find("```", pos);
    if (pos == std::string_view::npos) return pos;
    size_t line_start = pos;
    while (line_start > 0 && text[line_start - 1] != '\n') {
      if (text[line_start - 1] != ' ' && text[line_start - 1] != '\t') break;
      --line_start;
    }
    if (line_start == 0 || text[line_start - 1] == '\n') return pos;
    pos += 3;
  }
}

// Body of the first fenced block: after the opener's line (skipping the
// language tag) up to the closing fence, or to the end when unterminated.
inline std::string_view first_fence_body(std::string_view text, size_t opener) {
  size_t body = text.find('\n', opener + 3);
  if (body == std::string_view::npos) return {};
  ++body;
  size_t closer = find_fence(text, body);
  if (closer == std::string_view::npos) return text.substr(body);
  return text.substr(body, closer - body);
}

// First balanced top-level {...} region. Outside string literals a
// backslash also skips the next character, so a one-level-escaped document
// ( {\"openapi\": ...} ) balances correctly. npos/0 when absent.
inline bool find_braced_region(std::string_view text, size_t& begin, size_t& end) {
  begin = text.find('{');
  if (begin == std::string_view::npos) return false;
  bool in_string = false;
  int depth = 0;
  for (size_t i = begin; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\\') {
      ++i;  // escape: skip next character in either mode
      continue;
    }
    if (in_string) {
      if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      --depth;
      if (depth == 0) {
        end = i + 1;
        return true;
      }
    }
  }
  return false;
}

inline bool has_non_whitespace(std::string_view text) {
  for (char c : text) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') return true;
  }
  return false;
}

}  // namespace detail

inline CleanedText clean_response(std::string_view raw) {
  // Already-valid JSON objects pass through untouched.
  if (parses_as_json_object(raw)) {
    return {std::string(raw), {}};
  }

  CleanedText out;
  std::string_view text = raw;

  size_t fence = detail::find_fence(text, 0);
  if (fence != std::string_view::npos) {
    text = detail::first_fence_body(text, fence);
    out.applied_steps.push_back(CleanStep::stripped_fences);
  }

  size_t begin = 0, end = 0;
  if (!detail::find_braced_region(text, begin, end)) {
    throw NoJsonPayload(text.find('{') == std::string_view::npos
                            ? "no '{' in response"
                            : "braces never balance in response");
  }
  std::string_view dropped_before = text.substr(0, begin);
  std::string_view dropped_after = text.substr(end);
  if (detail::has_non_whitespace(dropped_before) ||
      detail::has_non_whitespace(dropped_after)) {
    out.applied_steps.push_back(CleanStep::stripped_prose);
  }
  if (begin != 0 || end != text.size()) {
    out.applied_steps.push_back(CleanStep::extracted_braces);
  }
  text = text.substr(begin, end - begin);

  const bool has_escaped_newline = text.find("\\n") != std::string_view::npos;
  const bool has_escaped_quote = text.find("\\\"") != std::string_view::npos;
  if ((has_escaped_newline || has_escaped_quote) && !parses_as_json(text)) {
    std::string unescaped;
    unescaped.reserve(text.size());
    bool did_newline = false, did_quote = false;
    for (size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\\' && i + 1 < text.size() && text[i + 1] == 'n') {
        unescaped += '\n';
        did_newline = true;
        ++i;
      } else if (text[i] == '\\' && i + 1 < text.size() && text[i + 1] == '"') {
        unescaped += '"';
        did_quote = true;
        ++i;
      } else {
        unescaped += text[i];
      }
    }
    if (did_newline) out.applied_steps.push_back(CleanStep::unescaped_newlines);
    if (did_quote) out.applied_steps.push_back(CleanStep::unescaped_quotes);
    out.text = std::move(unescaped);
  } else {
    out.text = std::string(text);
  }
  return out;
}

}  // namespace oasgrade
