// Reference-document ingestion, vector indexing, cosine retrieval and prompt
// augmentation for the retrieval-augmented pipeline.
//
// Chunking is a sliding character window (size, overlap); retrieval is an
// exhaustive cosine scan, which is plenty at reference-corpus scale. The
// index serializes to JSON so an experiment can re-run without re-embedding.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oasgrade/json.hpp"
#include "oasgrade/llm_client.hpp"

namespace oasgrade {

struct EmptySource : std::runtime_error {
  explicit EmptySource(const std::string& what) : std::runtime_error(what) {}
};
struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

// ---------------- chunking ----------------

struct SourceDocument {
  std::string name;
  std::string text;
};

struct Chunk {
  size_t chunk_id = 0;  // global ingestion order
  std::string source_doc;
  std::string text;
  size_t span_begin = 0;
  size_t span_end = 0;
};

struct ChunkingConfig {
  size_t chunk_size = 1500;
  size_t overlap = 200;
};

inline std::vector<Chunk> ingest(const std::vector<SourceDocument>& sources,
                                 const ChunkingConfig& config = {}) {
  if (config.chunk_size <= config.overlap) {
    throw std::invalid_argument("chunk_size must be greater than overlap");
  }
  std::vector<Chunk> chunks;
  size_t next_id = 0;
  const size_t stride = config.chunk_size - config.overlap;
  for (const auto& source : sources) {
    if (source.text.empty()) {
      throw EmptySource("empty source document: " + source.name);
    }
    size_t start = 0;
    while (true) {
      size_t end = std::min(start + config.chunk_size, source.text.size());
      chunks.push_back({next_id++, source.name, source.text.substr(start, end - start),
                        start, end});
      if (end == source.text.size()) break;
      start += stride;
    }
  }
  return chunks;
}

// ---------------- index ----------------

struct VectorIndex {
  std::vector<Chunk> chunks;
  std::vector<EmbeddingVector> vectors;  // parallel to chunks
  size_t dimension = 0;

  bool empty() const { return chunks.empty(); }
  size_t size() const { return chunks.size(); }
};

inline VectorIndex build_index(std::vector<Chunk> chunks, LlmProvider& embedder) {
  if (chunks.empty()) {
    throw std::invalid_argument("cannot build an index from zero chunks");
  }
  std::vector<std::string> texts;
  texts.reserve(chunks.size());
  for (const auto& c : chunks) texts.push_back(c.text);

  VectorIndex index;
  index.vectors = embedder.embed(texts);  // one batch call
  index.chunks = std::move(chunks);
  index.dimension = index.vectors.front().dimension();
  for (const auto& v : index.vectors) {
    if (v.dimension() != index.dimension) {
      throw DimensionMismatch("embedder returned vectors of differing dimensions");
    }
  }
  return index;
}

// ---------------- retrieval ----------------

inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatch("cosine of vectors with different dimensions");
  }
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    norm_a += a.values[i] * a.values[i];
    norm_b += b.values[i] * b.values[i];
  }
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

struct RankedChunk {
  Chunk chunk;
  double similarity = 0.0;
};

// Top-k by similarity descending, ties broken by ascending chunk_id.
inline std::vector<RankedChunk> retrieve(const VectorIndex& index,
                                         const std::string& query, size_t k,
                                         LlmProvider& embedder) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (index.empty()) throw std::invalid_argument("index is empty");

  EmbeddingVector query_vector = embedder.embed({query}).front();
  std::vector<RankedChunk> ranked;
  ranked.reserve(index.size());
  for (size_t i = 0; i < index.size(); ++i) {
    ranked.push_back({index.chunks[i], cosine_similarity(query_vector, index.vectors[i])});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedChunk& a, const RankedChunk& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.chunk.chunk_id < b.chunk.chunk_id;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

// ---------------- prompt augmentation ----------------

// Context block (chunks in rank order, each labeled with its source), then
// the base prompt, then the reinforcement questions. With no context and no
// questions the output is the base prompt itself, byte-identical.
inline std::string augment_prompt(const std::string& base_prompt,
                                  const std::vector<RankedChunk>& context,
                                  const std::vector<std::string>& reinforcement) {
  if (context.empty() && reinforcement.empty()) return base_prompt;
  std::string out;
  if (!context.empty()) {
    out += "Use the following reference excerpts when answering.\n";
    for (const auto& rc : context) {
      out += "\n[" + rc.chunk.source_doc + " #" + std::to_string(rc.chunk.chunk_id) +
             "]\n";
      out += rc.chunk.text;
      if (out.back() != '\n') out += '\n';
    }
    out += '\n';
  }
  out += base_prompt;
  if (!reinforcement.empty()) {
    out += "\n";
    for (size_t i = 0; i < reinforcement.size(); ++i) {
      out += "\n" + std::to_string(i + 1) + ". " + reinforcement[i];
    }
  }
  return out;
}

// ---------------- persistence ----------------

inline JsonValue index_to_json(const VectorIndex& index) {
  JsonObject root;
  root.push_back({"dimension", JsonValue(static_cast<double>(index.dimension))});
  JsonArray chunks;
  for (const auto& c : index.chunks) {
    JsonObject chunk;
    chunk.push_back({"id", JsonValue(static_cast<double>(c.chunk_id))});
    chunk.push_back({"source", JsonValue(c.source_doc)});
    chunk.push_back({"span", JsonValue(JsonArray{JsonValue(static_cast<double>(c.span_begin)),
                                                 JsonValue(static_cast<double>(c.span_end))})});
    chunk.push_back({"text", JsonValue(c.text)});
    chunks.push_back(JsonValue(std::move(chunk)));
  }
  root.push_back({"chunks", JsonValue(std::move(chunks))});
  JsonArray vectors;
  for (const auto& v : index.vectors) {
    JsonArray values;
    for (double x : v.values) values.push_back(JsonValue(x));
    vectors.push_back(JsonValue(std::move(values)));
  }
  root.push_back({"vectors", JsonValue(std::move(vectors))});
  return JsonValue(std::move(root));
}

inline VectorIndex index_from_json(const JsonValue& root) {
  VectorIndex index;
  if (!root.is_object()) throw std::invalid_argument("index file: not a JSON object");
  if (const JsonValue* d = root.get("dimension"); d && d->is_number()) {
    index.dimension = static_cast<size_t>(d->as_number());
  }
  const JsonValue* chunks = root.get("chunks");
  const JsonValue* vectors = root.get("vectors");
  if (!chunks || !chunks->is_array() || !vectors || !vectors->is_array() ||
      chunks->as_array().size() != vectors->as_array().size()) {
    throw std::invalid_argument("index file: chunks/vectors missing or not parallel");
  }
  for (const auto& c : chunks->as_array()) {
    Chunk chunk;
    if (const JsonValue* v = c.get("id"); v && v->is_number()) {
      chunk.chunk_id = static_cast<size_t>(v->as_number());
    }
    if (const JsonValue* v = c.get("source"); v && v->is_string()) {
      chunk.source_doc = v->as_string();
    }
    if (const JsonValue* v = c.get("span"); v && v->is_array() && v->as_array().size() == 2) {
      chunk.span_begin = static_cast<size_t>(v->as_array()[0].as_number());
      chunk.span_end = static_cast<size_t>(v->as_array()[1].as_number());
    }
    if (const JsonValue* v = c.get("text"); v && v->is_string()) {
      chunk.text = v->as_string();
    }
    index.chunks.push_back(std::move(chunk));
  }
  for (const auto& v : vectors->as_array()) {
    EmbeddingVector vec;
    if (v.is_array()) {
      for (const auto& x : v.as_array()) {
        if (x.is_number()) vec.values.push_back(x.as_number());
      }
    }
    if (vec.dimension() != index.dimension) {
      throw DimensionMismatch("index file: vector dimension mismatch");
    }
    index.vectors.push_back(std::move(vec));
  }
  return index;
}

}  // namespace oasgrade
