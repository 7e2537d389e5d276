// Copyright 2026 The Tempo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tempo/jsonl.hpp"

namespace tempo::llm {

enum class Role { system, user, assistant };

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

struct ChatMessage {
  Role role = Role::user;
  std::string content;
};

inline ChatMessage system_message(std::string content) {
  return {Role::system, std::move(content)};
}
inline ChatMessage user_message(std::string content) { return {Role::user, std::move(content)}; }
inline ChatMessage assistant_message(std::string content) {
  return {Role::assistant, std::move(content)};
}

struct SamplingParams {
  double temperature = 1.0;
  double top_p = 0.95;
  int max_tokens = 256;
};

/// Endpoint description. base_url "offline" (or the "offline:" scheme)
/// selects the built-in deterministic backend; anything else is treated as an
/// HTTP chat-completions endpoint. Credentials are only ever named
/// indirectly, via the environment variable in credential_env.
struct EndpointConfig {
  std::string base_url = "offline";
  std::string model_name = "offline-mini";
  std::string credential_env;
  std::string chat_path = "/chat/completions";
  int timeout_ms = 30000;
  int max_retries = 3;
  int max_concurrency = 4;
  int initial_backoff_ms = 500;
};

inline EndpointConfig endpoint_config_from_json(const nlohmann::json& j) {
  EndpointConfig cfg;
  if (j.contains("base_url")) cfg.base_url = j.at("base_url").get<std::string>();
  if (j.contains("model_name")) cfg.model_name = j.at("model_name").get<std::string>();
  if (j.contains("credential_env")) cfg.credential_env = j.at("credential_env").get<std::string>();
  if (j.contains("chat_path")) cfg.chat_path = j.at("chat_path").get<std::string>();
  if (j.contains("timeout_ms")) cfg.timeout_ms = j.at("timeout_ms").get<int>();
  if (j.contains("max_retries")) cfg.max_retries = j.at("max_retries").get<int>();
  if (j.contains("max_concurrency")) cfg.max_concurrency = j.at("max_concurrency").get<int>();
  if (j.contains("initial_backoff_ms"))
    cfg.initial_backoff_ms = j.at("initial_backoff_ms").get<int>();
  if (cfg.max_retries < 0) throw std::invalid_argument("endpoint config: max_retries must be >= 0");
  if (cfg.max_concurrency < 1)
    throw std::invalid_argument("endpoint config: max_concurrency must be >= 1");
  return cfg;
}

inline EndpointConfig load_endpoint_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open endpoint config: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw std::runtime_error("endpoint config is not valid JSON: " + path.string());
  return endpoint_config_from_json(j);
}

struct TokenAlternative {
  std::string token;
  double logprob = 0.0;
};

struct TokenLogProb {
  std::string token;
  double logprob = 0.0;
  std::vector<TokenAlternative> top;
};

struct Completion {
  std::string text;
  std::vector<TokenLogProb> logprobs;  // empty when the backend supplies none

  bool has_logprobs() const { return !logprobs.empty(); }
};

/// Raw transport result. status 0 plus transport_error means the request
/// never produced an HTTP response.
struct BackendResult {
  int status = 0;
  std::string body;
  std::string transport_error;

  bool transport_failed() const { return !transport_error.empty(); }
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendResult post_chat(const std::string& request_json) = 0;
};

enum class GatewayErrorKind { config, auth, retries_exhausted, malformed_payload, rejected };

class GatewayError : public std::runtime_error {
 public:
  GatewayError(GatewayErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  GatewayErrorKind kind() const { return kind_; }

 private:
  GatewayErrorKind kind_;
};

namespace detail {

inline bool retryable_status(int status) {
  return status == 408 || status == 409 || status == 429 || status >= 500;
}

// Jitter only affects pacing, never outputs, so a nondeterministic seed is
// fine here.
inline int jitter_ms(int upper) {
  if (upper <= 0) return 0;
  thread_local std::mt19937 gen(std::random_device{}());
  return static_cast<int>(gen() % static_cast<unsigned>(upper));
}

class ConcurrencyLimiter {
 public:
  explicit ConcurrencyLimiter(int limit) : limit_(limit) {}

  void acquire() {
    std::unique_lock lock(m_);
    cv_.wait(lock, [this] { return in_flight_ < limit_; });
    ++in_flight_;
  }

  void release() {
    {
      std::lock_guard lock(m_);
      --in_flight_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex m_;
  std::condition_variable cv_;
  int limit_;
  int in_flight_ = 0;
};

}  // namespace detail

/// Chat-completions client: JSON encode/decode, bounded concurrency, retry
/// with exponential backoff + jitter on transient failures (transport errors,
/// 408/409/429, 5xx). Shareable across threads. Construct via make_client()
/// in backends.hpp to pick the backend from the endpoint config.
class ChatClient {
 public:
  ChatClient(EndpointConfig cfg, std::shared_ptr<Backend> backend)
      : cfg_(std::move(cfg)),
        backend_(std::move(backend)),
        limiter_(std::make_shared<detail::ConcurrencyLimiter>(cfg_.max_concurrency)) {
    if (!backend_) throw GatewayError(GatewayErrorKind::config, "ChatClient: null backend");
  }

  const EndpointConfig& config() const { return cfg_; }

  Completion complete(std::span<const ChatMessage> messages, const SamplingParams& params = {},
                      bool want_logprobs = false) {
    if (messages.empty()) throw GatewayError(GatewayErrorKind::config, "complete: no messages");

    nlohmann::json req;
    req["model"] = cfg_.model_name;
    nlohmann::json msgs = nlohmann::json::array();
    for (const ChatMessage& m : messages)
      msgs.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
    req["messages"] = std::move(msgs);
    req["temperature"] = params.temperature;
    req["top_p"] = params.top_p;
    req["max_tokens"] = params.max_tokens;
    if (want_logprobs) {
      req["logprobs"] = true;
      req["top_logprobs"] = 5;
    }
    const std::string body = req.dump();

    limiter_->acquire();
    struct Release {
      detail::ConcurrencyLimiter* l;
      ~Release() { l->release(); }
    } release{limiter_.get()};

    std::string last_failure;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) {
        const int base = cfg_.initial_backoff_ms * (1 << (attempt - 1));
        std::this_thread::sleep_for(
            std::chrono::milliseconds(base + detail::jitter_ms(cfg_.initial_backoff_ms)));
      }
      BackendResult res = backend_->post_chat(body);
      if (res.transport_failed()) {
        last_failure = "transport: " + res.transport_error;
        continue;
      }
      if (res.status == 401 || res.status == 403)
        throw GatewayError(GatewayErrorKind::auth,
                           "authentication failed (HTTP " + std::to_string(res.status) + ")");
      if (detail::retryable_status(res.status)) {
        last_failure = "HTTP " + std::to_string(res.status);
        continue;
      }
      if (res.status != 200)
        throw GatewayError(GatewayErrorKind::rejected,
                           "backend rejected request (HTTP " + std::to_string(res.status) + ")");
      return parse_completion(res.body);
    }
    throw GatewayError(GatewayErrorKind::retries_exhausted,
                       "retries exhausted after " + std::to_string(cfg_.max_retries + 1) +
                           " attempts; last failure: " + last_failure);
  }

  /// Runs every request under the endpoint's concurrency cap and returns
  /// results in input order regardless of completion order.
  std::vector<Completion> complete_batch(const std::vector<std::vector<ChatMessage>>& batch,
                                         const SamplingParams& params = {},
                                         bool want_logprobs = false) {
    std::vector<Completion> results(batch.size());
    std::vector<std::exception_ptr> errors(batch.size());
    if (batch.empty()) return results;

    const std::size_t workers =
        std::min<std::size_t>(batch.size(), static_cast<std::size_t>(cfg_.max_concurrency));
    if (workers <= 1) {
      for (std::size_t i = 0; i < batch.size(); ++i) results[i] = complete(batch[i], params, want_logprobs);
      return results;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= batch.size()) return;
          try {
            results[i] = complete(batch[i], params, want_logprobs);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
    return results;
  }

 private:
  static Completion parse_completion(const std::string& body) {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded())
      throw GatewayError(GatewayErrorKind::malformed_payload, "backend payload is not JSON");
    if (!j.contains("choices") || !j.at("choices").is_array() || j.at("choices").empty())
      throw GatewayError(GatewayErrorKind::malformed_payload, "backend payload has no choices");
    const nlohmann::json& choice = j.at("choices").at(0);
    if (!choice.contains("message") || !choice.at("message").contains("content"))
      throw GatewayError(GatewayErrorKind::malformed_payload,
                         "backend payload has no message content");
    Completion c;
    c.text = choice.at("message").at("content").get<std::string>();
    if (choice.contains("logprobs") && choice.at("logprobs").is_object() &&
        choice.at("logprobs").contains("content")) {
      for (const nlohmann::json& tok : choice.at("logprobs").at("content")) {
        TokenLogProb t;
        t.token = tok.value("token", "");
        t.logprob = tok.value("logprob", 0.0);
        if (tok.contains("top_logprobs")) {
          for (const nlohmann::json& alt : tok.at("top_logprobs"))
            t.top.push_back({alt.value("token", ""), alt.value("logprob", 0.0)});
        }
        c.logprobs.push_back(std::move(t));
      }
    }
    return c;
  }

  EndpointConfig cfg_;
  std::shared_ptr<Backend> backend_;
  std::shared_ptr<detail::ConcurrencyLimiter> limiter_;
};

}  // namespace tempo::llm
