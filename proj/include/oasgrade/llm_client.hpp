// Provider-agnostic boundary for chat completion and text embedding.
//
// Two implementations: an HTTP provider (see llm_http.hpp) and the stub
// below. The stub replays canned responses from a fixture directory and
// produces embeddings with a seeded hash-to-unit-sphere map, so retrieval
// and experiment runs are reproducible across processes and platforms.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oasgrade {

// ---------------- requests and errors ----------------

struct CompletionRequest {
  std::string model_name;
  std::string prompt;
  double temperature = 1.0;
  int max_output_tokens = 4096;
  std::optional<int> seed;
};

struct EmbeddingVector {
  std::vector<double> values;
  size_t dimension() const { return values.size(); }
};

struct TransportError : std::runtime_error {
  explicit TransportError(const std::string& what) : std::runtime_error(what) {}
};
struct AuthError : std::runtime_error {
  explicit AuthError(const std::string& what) : std::runtime_error(what) {}
};
struct ProviderError : std::runtime_error {
  explicit ProviderError(const std::string& what) : std::runtime_error(what) {}
};

class LlmProvider {
 public:
  virtual ~LlmProvider() = default;

  // Returns the raw model text exactly as received; cleaning is the
  // caller's concern.
  virtual std::string complete(const CompletionRequest& request) = 0;

  // One vector per input text, all of equal dimension.
  virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
};

// ---------------- deterministic stub ----------------

namespace detail {

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Hash-to-unit-sphere embedding: coordinates derive from integer hashes of
// (text, coordinate index) only, so equal texts embed identically anywhere.
inline EmbeddingVector stub_embedding(std::string_view text, size_t dimension,
                                      uint64_t seed = 0x0a5) {
  EmbeddingVector out;
  out.values.resize(dimension);
  const uint64_t base = detail::splitmix64(detail::fnv1a64(text) ^ seed);
  double norm_sq = 0.0;
  for (size_t i = 0; i < dimension; ++i) {
    uint64_t u = detail::splitmix64(base + 0x9E3779B97F4A7C15ULL * (i + 1));
    // top 53 bits -> [0,1) -> [-1,1)
    double v = static_cast<double>(u >> 11) * (1.0 / 9007199254740992.0) * 2.0 - 1.0;
    out.values[i] = v;
    norm_sq += v * v;
  }
  if (norm_sq == 0.0) {
    out.values[0] = 1.0;
    return out;
  }
  double norm = std::sqrt(norm_sq);
  for (double& v : out.values) v /= norm;
  return out;
}

// Replays fixture files as completions. Fixtures are text files in one
// directory, keyed by filename without extension. complete() consumes a
// scripted key sequence; response_for() looks a key up directly.
class StubProvider : public LlmProvider {
 public:
  explicit StubProvider(const std::filesystem::path& fixtures_dir,
                        size_t embedding_dimension = 32)
      : embedding_dimension_(embedding_dimension) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(fixtures_dir)) {
      throw ProviderError("stub fixtures directory not found: " + fixtures_dir.string());
    }
    for (const auto& entry : fs::directory_iterator(fixtures_dir)) {
      if (!entry.is_regular_file()) continue;
      std::ifstream in(entry.path(), std::ios::binary);
      std::ostringstream content;
      content << in.rdbuf();
      fixtures_[entry.path().stem().string()] = content.str();
    }
  }

  // Embedding-only stub; complete() has no fixtures and no script to serve.
  static StubProvider embedder_only(size_t embedding_dimension) {
    return StubProvider(embedding_dimension, EmbedOnly{});
  }

  void set_script(std::vector<std::string> keys) {
    std::lock_guard<std::mutex> lock(mutex_);
    script_ = std::move(keys);
    cursor_ = 0;
  }

  const std::string& response_for(const std::string& key) const {
    auto it = fixtures_.find(key);
    if (it == fixtures_.end()) {
      throw ProviderError("no stub fixture named \"" + key + "\"");
    }
    return it->second;
  }

  std::string complete(const CompletionRequest& request) override {
    if (request.prompt.empty()) {
      throw std::invalid_argument("prompt must be non-empty");
    }
    std::lock_guard<std::mutex> lock(mutex_);
    if (cursor_ >= script_.size()) {
      throw ProviderError("stub script exhausted");
    }
    return response_for(script_[cursor_++]);
  }

  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override {
    if (texts.empty()) {
      throw std::invalid_argument("embed requires a non-empty list of texts");
    }
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
      if (t.empty()) {
        throw std::invalid_argument("embed requires non-empty texts");
      }
      out.push_back(stub_embedding(t, embedding_dimension_));
    }
    return out;
  }

 private:
  struct EmbedOnly {};
  StubProvider(size_t embedding_dimension, EmbedOnly)
      : embedding_dimension_(embedding_dimension) {}

  std::map<std::string, std::string> fixtures_;
  std::vector<std::string> script_;
  size_t cursor_ = 0;
  size_t embedding_dimension_;
  std::mutex mutex_;
};

}  // namespace oasgrade
