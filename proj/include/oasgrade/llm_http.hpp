// HTTP provider speaking the common chat-completions / embeddings JSON shape
// against a configurable base URL. Credential and endpoint come from the
// environment by default:
//
//   OASGRADE_API_KEY    bearer credential
//   OASGRADE_BASE_URL   e.g. https://my-endpoint.example.com/v1
//
// Transient transport failures are retried with exponential backoff; a
// response, once received, is never re-requested.

#pragma once

#include <chrono>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>

#include <httplib.h>

#include "oasgrade/json.hpp"
#include "oasgrade/llm_client.hpp"

namespace oasgrade {

struct HttpProviderConfig {
  std::string base_url;  // scheme://host[:port][/prefix]
  std::string api_key;
  std::string completion_model = "gpt-35-turbo-0613";
  std::string embedding_model = "text-embedding-ada-002";
  int timeout_seconds = 60;
  int max_retries = 3;
  int backoff_initial_ms = 500;

  static HttpProviderConfig from_env() {
    HttpProviderConfig config;
    if (const char* v = std::getenv("OASGRADE_BASE_URL")) config.base_url = v;
    if (const char* v = std::getenv("OASGRADE_API_KEY")) config.api_key = v;
    return config;
  }
};

class HttpProvider : public LlmProvider {
 public:
  explicit HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) {
      throw ProviderError("no base URL configured (set OASGRADE_BASE_URL)");
    }
    split_base_url();
  }

  std::string complete(const CompletionRequest& request) override {
    if (request.prompt.empty()) {
      throw std::invalid_argument("prompt must be non-empty");
    }
    JsonObject message;
    message.push_back({"role", JsonValue("user")});
    message.push_back({"content", JsonValue(request.prompt)});
    JsonObject body;
    body.push_back({"model", JsonValue(request.model_name.empty()
                                           ? config_.completion_model
                                           : request.model_name)});
    body.push_back({"messages", JsonValue(JsonArray{JsonValue(std::move(message))})});
    body.push_back({"temperature", JsonValue(request.temperature)});
    body.push_back({"max_tokens", JsonValue(request.max_output_tokens)});
    if (request.seed) body.push_back({"seed", JsonValue(*request.seed)});

    JsonValue reply = post_json("/chat/completions", JsonValue(std::move(body)));
    const JsonValue* choices = reply.get("choices");
    if (choices && choices->is_array() && !choices->as_array().empty()) {
      const JsonValue& first = choices->as_array().front();
      if (const JsonValue* msg = first.get("message")) {
        if (const JsonValue* content = msg->get("content"); content && content->is_string()) {
          return content->as_string();
        }
      }
    }
    throw ProviderError("completion response missing choices[0].message.content");
  }

  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override {
    if (texts.empty()) {
      throw std::invalid_argument("embed requires a non-empty list of texts");
    }
    JsonArray input;
    for (const auto& t : texts) {
      if (t.empty()) throw std::invalid_argument("embed requires non-empty texts");
      input.push_back(JsonValue(t));
    }
    JsonObject body;
    body.push_back({"model", JsonValue(config_.embedding_model)});
    body.push_back({"input", JsonValue(std::move(input))});

    JsonValue reply = post_json("/embeddings", JsonValue(std::move(body)));
    const JsonValue* data = reply.get("data");
    if (!data || !data->is_array()) {
      throw ProviderError("embedding response missing data array");
    }
    std::vector<EmbeddingVector> out;
    for (const auto& item : data->as_array()) {
      const JsonValue* vec = item.get("embedding");
      if (!vec || !vec->is_array()) {
        throw ProviderError("embedding response entry missing embedding array");
      }
      EmbeddingVector v;
      for (const auto& x : vec->as_array()) {
        if (x.is_number()) v.values.push_back(x.as_number());
      }
      out.push_back(std::move(v));
    }
    if (out.size() != texts.size()) {
      throw ProviderError("embedding response count does not match input count");
    }
    return out;
  }

 private:
  HttpProviderConfig config_;
  std::string origin_;       // scheme://host:port
  std::string path_prefix_;  // /v1 or empty

  void split_base_url() {
    const std::string& url = config_.base_url;
    size_t scheme = url.find("://");
    size_t path = scheme == std::string::npos ? url.find('/')
                                              : url.find('/', scheme + 3);
    if (path == std::string::npos) {
      origin_ = url;
    } else {
      origin_ = url.substr(0, path);
      path_prefix_ = url.substr(path);
      while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    }
  }

  JsonValue post_json(const std::string& endpoint, const JsonValue& payload) {
    const std::string body = serialize_json(payload);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    }

    httplib::Result result;
    for (int attempt = 0;; ++attempt) {
      httplib::Client client(origin_);
      client.set_connection_timeout(config_.timeout_seconds);
      client.set_read_timeout(config_.timeout_seconds);
      result = client.Post(path_prefix_ + endpoint, headers, body, "application/json");
      if (result) break;  // got a response; never retry past this point
      if (attempt >= config_.max_retries) {
        throw TransportError("transport failure after " +
                             std::to_string(attempt + 1) + " attempts: " +
                             httplib::to_string(result.error()));
      }
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config_.backoff_initial_ms << attempt));
    }

    if (result->status == 401 || result->status == 403) {
      throw AuthError("credential rejected (HTTP " + std::to_string(result->status) + ")");
    }
    if (result->status < 200 || result->status >= 300) {
      throw ProviderError("HTTP " + std::to_string(result->status) + ": " + result->body);
    }
    auto parsed = parse_json_tolerant(result->body);
    if (!parsed.root || !parsed.findings.empty()) {
      throw ProviderError("provider returned malformed JSON");
    }
    return std::move(*parsed.root);
  }
};

}  // namespace oasgrade
