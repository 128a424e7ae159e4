// Tolerant JSON layer: ordered value model, recovering parser, serializer.
//
// The parser is deliberately not fail-fast. A local error inside one subtree
// records a finding and resynchronizes at the enclosing object/array
// boundary, so the rest of the document still materializes. Findings carry
// line/column and byte offset; a finding is marked blocking when the error
// forced the parser to drop content (the materialized tree is not the whole
// input), and non-blocking for recoverable oddities such as trailing commas
// or duplicate keys where nothing is lost.
//
// Strict well-formedness == parse succeeded with zero findings.

#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace oasgrade {

// ---------------- locations and findings ----------------

struct SourceLocation {
  size_t line = 0;    // 1-based; 0 means "no text position" (document-level)
  size_t column = 0;  // 1-based byte column
  size_t offset = 0;  // byte offset into the parsed text
};

struct SyntaxFinding {
  SourceLocation location;
  std::string message;
  bool blocks_render = false;
};

// ---------------- value model ----------------

struct JsonValue;
using JsonArray = std::vector<JsonValue>;
struct JsonMember;
// Insertion-ordered object. Key order is part of the model so that
// serialize/re-parse round-trips compare equal.
using JsonObject = std::vector<JsonMember>;

struct JsonValue {
  using Storage =
      std::variant<std::nullptr_t, bool, double, std::string, JsonArray, JsonObject>;
  Storage value;

  JsonValue() : value(nullptr) {}
  JsonValue(std::nullptr_t) : value(nullptr) {}
  JsonValue(bool b) : value(b) {}
  JsonValue(double n) : value(n) {}
  JsonValue(int n) : value(static_cast<double>(n)) {}
  JsonValue(std::string s) : value(std::move(s)) {}
  JsonValue(const char* s) : value(std::string(s)) {}
  JsonValue(JsonArray a) : value(std::move(a)) {}
  JsonValue(JsonObject o) : value(std::move(o)) {}

  bool is_null() const { return std::holds_alternative<std::nullptr_t>(value); }
  bool is_bool() const { return std::holds_alternative<bool>(value); }
  bool is_number() const { return std::holds_alternative<double>(value); }
  bool is_string() const { return std::holds_alternative<std::string>(value); }
  bool is_array() const { return std::holds_alternative<JsonArray>(value); }
  bool is_object() const { return std::holds_alternative<JsonObject>(value); }

  bool as_bool() const { return std::get<bool>(value); }
  double as_number() const { return std::get<double>(value); }
  const std::string& as_string() const { return std::get<std::string>(value); }
  const JsonArray& as_array() const { return std::get<JsonArray>(value); }
  const JsonObject& as_object() const { return std::get<JsonObject>(value); }
  JsonArray& as_array() { return std::get<JsonArray>(value); }
  JsonObject& as_object() { return std::get<JsonObject>(value); }

  // First member with the given key, or nullptr.
  const JsonValue* get(std::string_view key) const;

  bool operator==(const JsonValue& other) const;
};

struct JsonMember {
  std::string key;
  JsonValue value;
  bool operator==(const JsonMember& other) const {
    return key == other.key && value == other.value;
  }
};

inline const JsonValue* JsonValue::get(std::string_view key) const {
  if (!is_object()) return nullptr;
  for (const auto& m : as_object()) {
    if (m.key == key) return &m.value;
  }
  return nullptr;
}

inline bool JsonValue::operator==(const JsonValue& other) const {
  return value == other.value;
}

// ---------------- parse result ----------------

struct JsonParseResult {
  std::optional<JsonValue> root;       // possibly partial on errors
  std::vector<SyntaxFinding> findings; // JSON-level findings, in source order

  bool has_blocking() const {
    for (const auto& f : findings) {
      if (f.blocks_render) return true;
    }
    return false;
  }
};

// ---------------- utf-8 ----------------

inline bool is_valid_utf8(std::string_view text) {
  size_t i = 0;
  const auto byte = [&](size_t k) { return static_cast<unsigned char>(text[k]); };
  while (i < text.size()) {
    unsigned char c = byte(i);
    size_t extra = 0;
    if (c < 0x80) {
      i += 1;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      if (c < 0xC2) return false;  // overlong
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      if (c > 0xF4) return false;
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (size_t k = 1; k <= extra; ++k) {
      if ((byte(i + k) & 0xC0) != 0x80) return false;
    }
    if (extra == 2 && c == 0xE0 && byte(i + 1) < 0xA0) return false;   // overlong
    if (extra == 2 && c == 0xED && byte(i + 1) >= 0xA0) return false;  // surrogate
    if (extra == 3 && c == 0xF0 && byte(i + 1) < 0x90) return false;   // overlong
    if (extra == 3 && c == 0xF4 && byte(i + 1) >= 0x90) return false;  // > U+10FFFF
    i += extra + 1;
  }
  return true;
}

namespace detail {

// ---------------- tolerant parser ----------------

class JsonParser {
 public:
  explicit JsonParser(std::string_view text) : text_(text) {}

  JsonParseResult run() {
    JsonParseResult result;
    skip_ws();
    if (eof()) {
      finding("empty input", true);
    } else {
      result.root = parse_value(0);
      skip_ws();
      if (!eof()) {
        finding("content after end of document ignored", false);
      }
    }
    result.findings = std::move(findings_);
    return result;
  }

 private:
  static constexpr int kMaxDepth = 256;

  std::string_view text_;
  size_t pos_ = 0;
  size_t line_ = 1;
  size_t line_start_ = 0;
  std::vector<SyntaxFinding> findings_;

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      line_start_ = pos_ + 1;
    }
    ++pos_;
  }

  SourceLocation here() const { return location_at(pos_); }

  SourceLocation location_at(size_t offset) const {
    // line_/line_start_ track pos_; for offsets at/after pos_ (the common
    // case) the column is still derived from the current line start.
    SourceLocation loc;
    loc.offset = offset;
    loc.line = line_;
    loc.column = offset >= line_start_ ? offset - line_start_ + 1 : 1;
    return loc;
  }

  void finding(std::string message, bool blocking) {
    findings_.push_back({here(), std::move(message), blocking});
  }

  void finding_at(size_t offset, std::string message, bool blocking) {
    findings_.push_back({location_at(offset), std::move(message), blocking});
  }

  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  // Resynchronize after an error inside a container: stop before the next
  // ',' at this nesting level or before the container's closer. Returns
  // true when any byte was skipped (content was lost).
  bool recover_to_boundary() {
    size_t start = pos_;
    int depth = 0;
    while (!eof()) {
      char c = peek();
      if (c == '"') {
        skip_string_token();
        continue;
      }
      if (c == '{' || c == '[') {
        ++depth;
      } else if (c == '}' || c == ']') {
        if (depth == 0) break;
        --depth;
      } else if (c == ',' && depth == 0) {
        break;
      }
      advance();
    }
    return pos_ != start;
  }

  // Skips a string token without materializing it.
  void skip_string_token() {
    advance();  // opening quote
    while (!eof()) {
      char c = peek();
      if (c == '\\') {
        advance();
        if (!eof()) advance();
        continue;
      }
      if (c == '"' || c == '\n') {
        if (c == '"') advance();
        return;
      }
      advance();
    }
  }

  std::optional<JsonValue> parse_value(int depth) {
    if (depth > kMaxDepth) {
      finding("nesting too deep", true);
      recover_to_boundary();
      return std::nullopt;
    }
    skip_ws();
    if (eof()) {
      finding("unexpected end of input, expected a value", true);
      return std::nullopt;
    }
    char c = peek();
    switch (c) {
      case '{':
        return parse_object(depth);
      case '[':
        return parse_array(depth);
      case '"':
        return parse_string();
      case 't':
        return parse_literal("true", JsonValue(true));
      case 'f':
        return parse_literal("false", JsonValue(false));
      case 'n':
        return parse_literal("null", JsonValue(nullptr));
      default:
        if (c == '-' || (c >= '0' && c <= '9')) return parse_number();
        finding(std::string("unexpected character '") + c + "'", true);
        return std::nullopt;
    }
  }

  std::optional<JsonValue> parse_literal(std::string_view word, JsonValue v) {
    if (text_.substr(pos_, word.size()) == word) {
      for (size_t i = 0; i < word.size(); ++i) advance();
      return v;
    }
    finding("invalid literal", true);
    return std::nullopt;
  }

  std::optional<JsonValue> parse_number() {
    size_t start = pos_;
    if (!eof() && peek() == '-') advance();
    size_t int_start = pos_;
    while (!eof() && peek() >= '0' && peek() <= '9') advance();
    size_t int_len = pos_ - int_start;
    if (int_len == 0) {
      finding_at(start, "invalid number", true);
      return std::nullopt;
    }
    if (int_len > 1 && text_[int_start] == '0') {
      finding_at(int_start, "number has leading zeros", false);
    }
    if (!eof() && peek() == '.') {
      advance();
      size_t frac = 0;
      while (!eof() && peek() >= '0' && peek() <= '9') {
        advance();
        ++frac;
      }
      if (frac == 0) {
        finding("number has empty fraction", true);
        return std::nullopt;
      }
    }
    if (!eof() && (peek() == 'e' || peek() == 'E')) {
      advance();
      if (!eof() && (peek() == '+' || peek() == '-')) advance();
      size_t exp = 0;
      while (!eof() && peek() >= '0' && peek() <= '9') {
        advance();
        ++exp;
      }
      if (exp == 0) {
        finding("number has empty exponent", true);
        return std::nullopt;
      }
    }
    double out = 0.0;
    auto token = text_.substr(start, pos_ - start);
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      finding_at(start, "number out of range", false);
      out = 0.0;
    }
    return JsonValue(out);
  }

  std::optional<JsonValue> parse_string() {
    size_t open = pos_;
    advance();  // opening quote
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') {
        // Report at the point where the closing quote is missing so the
        // single-character repair can try inserting one right here.
        finding("unterminated string (opened at offset " + std::to_string(open) + ")",
                true);
        return std::nullopt;
      }
      char c = peek();
      if (c == '"') {
        advance();
        return JsonValue(std::move(out));
      }
      if (c == '\\') {
        advance();
        if (eof()) continue;  // reported as unterminated on next loop
        char e = peek();
        advance();
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case '/': out += '/'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 't': out += '\t'; break;
          case 'u': {
            if (!append_unicode_escape(out)) {
              finding("invalid \\u escape", false);
              out += "\xEF\xBF\xBD";  // U+FFFD
            }
            break;
          }
          default:
            finding("invalid escape sequence '\\" + std::string(1, e) + "'", false);
            out += '\\';
            out += e;
        }
        continue;
      }
      if (static_cast<unsigned char>(c) < 0x20) {
        finding("raw control character in string", false);
      }
      out += c;
      advance();
    }
  }

  bool append_unicode_escape(std::string& out) {
    auto hex4 = [&](uint32_t& v) -> bool {
      if (pos_ + 4 > text_.size()) return false;
      v = 0;
      for (int i = 0; i < 4; ++i) {
        char h = peek();
        v <<= 4;
        if (h >= '0' && h <= '9') v |= static_cast<uint32_t>(h - '0');
        else if (h >= 'a' && h <= 'f') v |= static_cast<uint32_t>(h - 'a' + 10);
        else if (h >= 'A' && h <= 'F') v |= static_cast<uint32_t>(h - 'A' + 10);
        else return false;
        advance();
      }
      return true;
    };
    uint32_t cp = 0;
    if (!hex4(cp)) return false;
    if (cp >= 0xD800 && cp <= 0xDBFF) {
      // expect a low surrogate
      if (pos_ + 1 < text_.size() && peek() == '\\' && text_[pos_ + 1] == 'u') {
        advance();
        advance();
        uint32_t low = 0;
        if (!hex4(low) || low < 0xDC00 || low > 0xDFFF) return false;
        cp = 0x10000 + ((cp - 0xD800) << 10) + (low - 0xDC00);
      } else {
        return false;
      }
    } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
      return false;  // lone low surrogate
    }
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return true;
  }

  std::optional<JsonValue> parse_object(int depth) {
    advance();  // '{'
    JsonObject members;
    bool need_separator = false;
    while (true) {
      skip_ws();
      if (eof()) {
        finding("unterminated object, expected '}'", true);
        break;
      }
      if (peek() == '}') {
        advance();
        break;
      }
      if (need_separator) {
        if (peek() == ',') {
          advance();
          need_separator = false;
          skip_ws();
          if (!eof() && peek() == '}') {
            finding("trailing comma in object", false);
            advance();
            break;
          }
          continue;
        }
        finding("expected ',' or '}' in object", true);
        if (!recover_skip_element('}')) break;
        need_separator = false;
        continue;
      }
      if (peek() != '"') {
        finding("expected object key string", true);
        if (!recover_skip_element('}')) break;
        continue;
      }
      auto key = parse_string();
      if (!key) {
        if (!recover_skip_element('}')) break;
        continue;
      }
      skip_ws();
      if (eof() || peek() != ':') {
        finding("expected ':' after object key", true);
        if (!recover_skip_element('}')) break;
        continue;
      }
      advance();  // ':'
      auto value = parse_value(depth + 1);
      if (!value) {
        if (!recover_skip_element('}')) break;
        continue;
      }
      bool duplicate = false;
      for (const auto& m : members) {
        if (m.key == key->as_string()) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) {
        finding("duplicate object key \"" + key->as_string() + "\"", false);
      } else {
        members.push_back({key->as_string(), std::move(*value)});
      }
      need_separator = true;
    }
    return JsonValue(std::move(members));
  }

  std::optional<JsonValue> parse_array(int depth) {
    advance();  // '['
    JsonArray items;
    bool need_separator = false;
    while (true) {
      skip_ws();
      if (eof()) {
        finding("unterminated array, expected ']'", true);
        break;
      }
      if (peek() == ']') {
        advance();
        break;
      }
      if (need_separator) {
        if (peek() == ',') {
          advance();
          need_separator = false;
          skip_ws();
          if (!eof() && peek() == ']') {
            finding("trailing comma in array", false);
            advance();
            break;
          }
          continue;
        }
        finding("expected ',' or ']' in array", true);
        if (!recover_skip_element(']')) break;
        continue;
      }
      auto value = parse_value(depth + 1);
      if (!value) {
        if (!recover_skip_element(']')) break;
        continue;
      }
      items.push_back(std::move(*value));
      need_separator = true;
    }
    return JsonValue(std::move(items));
  }

  // After an error inside a container, skip the broken region. Returns
  // true when positioned at the next element (separator consumed), false
  // when the container ended (closer consumed or input exhausted).
  bool recover_skip_element(char closer) {
    recover_to_boundary();
    if (eof()) return false;
    if (peek() == ',') {
      advance();
      return true;
    }
    if (peek() == closer) {
      advance();
      return false;
    }
    // Mismatched closer for this container; consume it and end the container.
    advance();
    return false;
  }
};

}  // namespace detail

// Parses with error recovery. root is absent only when nothing at all could
// be materialized.
inline JsonParseResult parse_json_tolerant(std::string_view text) {
  return detail::JsonParser(text).run();
}

// Strict well-formedness: parsed with zero findings.
inline bool parses_as_json(std::string_view text) {
  auto r = parse_json_tolerant(text);
  return r.root.has_value() && r.findings.empty();
}

inline bool parses_as_json_object(std::string_view text) {
  auto r = parse_json_tolerant(text);
  return r.root.has_value() && r.root->is_object() && r.findings.empty();
}

// ---------------- serializer ----------------

namespace detail {

inline void append_json_escaped(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static const char* hex = "0123456789abcdef";
          out += "\\u00";
          out += hex[(c >> 4) & 0xF];
          out += hex[c & 0xF];
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

inline void append_json_number(std::string& out, double v) {
  // Shortest representation that round-trips, so serialize/parse is a
  // fixpoint on the double.
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

inline void serialize_value(const JsonValue& v, std::string& out, int indent,
                            int level) {
  const bool pretty = indent > 0;
  auto newline_indent = [&](int lvl) {
    out += '\n';
    out.append(static_cast<size_t>(indent) * lvl, ' ');
  };
  if (v.is_null()) {
    out += "null";
  } else if (v.is_bool()) {
    out += v.as_bool() ? "true" : "false";
  } else if (v.is_number()) {
    append_json_number(out, v.as_number());
  } else if (v.is_string()) {
    append_json_escaped(out, v.as_string());
  } else if (v.is_array()) {
    const auto& a = v.as_array();
    if (a.empty()) {
      out += "[]";
      return;
    }
    out += '[';
    for (size_t i = 0; i < a.size(); ++i) {
      if (i) out += ',';
      if (pretty) newline_indent(level + 1);
      serialize_value(a[i], out, indent, level + 1);
    }
    if (pretty) newline_indent(level);
    out += ']';
  } else {
    const auto& o = v.as_object();
    if (o.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    for (size_t i = 0; i < o.size(); ++i) {
      if (i) out += ',';
      if (pretty) newline_indent(level + 1);
      append_json_escaped(out, o[i].key);
      out += ':';
      if (pretty) out += ' ';
      serialize_value(o[i].value, out, indent, level + 1);
    }
    if (pretty) newline_indent(level);
    out += '}';
  }
}

}  // namespace detail

inline std::string serialize_json(const JsonValue& v, int indent = 0) {
  std::string out;
  detail::serialize_value(v, out, indent, 0);
  return out;
}

}  // namespace oasgrade
