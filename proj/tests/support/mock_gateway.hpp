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
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tempo/gateway.hpp"

namespace tempo::test {

inline std::string chat_body(const std::string& text) {
  nlohmann::json res;
  res["choices"] = nlohmann::json::array(
      {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", text}}}}});
  return res.dump();
}

inline llm::BackendResult ok_reply(const std::string& text) { return {200, chat_body(text), ""}; }

inline llm::BackendResult throttled() { return {429, "{}", ""}; }

inline std::string last_user_content(const std::string& request_json) {
  nlohmann::json req = nlohmann::json::parse(request_json);
  std::string content;
  for (const nlohmann::json& m : req.at("messages"))
    if (m.value("role", "") == "user") content = m.value("content", "");
  return content;
}

/// Pops scripted results in order; when the script runs dry, repeats the last
/// entry. Records every request body.
class ScriptedBackend final : public llm::Backend {
 public:
  explicit ScriptedBackend(std::deque<llm::BackendResult> script) : script_(std::move(script)) {}

  llm::BackendResult post_chat(const std::string& request_json) override {
    std::lock_guard lock(m_);
    requests_.push_back(request_json);
    if (script_.empty()) return last_;
    last_ = script_.front();
    if (script_.size() > 1) script_.pop_front();
    else script_.front() = last_;
    return last_;
  }

  std::size_t call_count() {
    std::lock_guard lock(m_);
    return requests_.size();
  }

  std::vector<std::string> requests() {
    std::lock_guard lock(m_);
    return requests_;
  }

 private:
  std::mutex m_;
  std::deque<llm::BackendResult> script_;
  llm::BackendResult last_ = ok_reply("");
  std::vector<std::string> requests_;
};

/// Computes the reply from the prompt text.
class RuleBackend final : public llm::Backend {
 public:
  using Rule = std::function<std::string(const std::string& prompt)>;

  explicit RuleBackend(Rule rule) : rule_(std::move(rule)) {}

  llm::BackendResult post_chat(const std::string& request_json) override {
    {
      std::lock_guard lock(m_);
      requests_.push_back(request_json);
    }
    return ok_reply(rule_(last_user_content(request_json)));
  }

  std::vector<std::string> requests() {
    std::lock_guard lock(m_);
    return requests_;
  }

 private:
  std::mutex m_;
  Rule rule_;
  std::vector<std::string> requests_;
};

inline std::shared_ptr<RuleBackend> echo_backend() {
  return std::make_shared<RuleBackend>([](const std::string& prompt) { return prompt; });
}

/// Tracks the peak number of concurrent in-flight requests.
class CountingBackend final : public llm::Backend {
 public:
  explicit CountingBackend(std::string reply, std::chrono::milliseconds hold)
      : reply_(std::move(reply)), hold_(hold) {}

  llm::BackendResult post_chat(const std::string&) override {
    const int now = ++in_flight_;
    int seen = max_in_flight_.load();
    while (now > seen && !max_in_flight_.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(hold_);
    --in_flight_;
    ++calls_;
    return ok_reply(reply_);
  }

  int max_in_flight() const { return max_in_flight_.load(); }
  int calls() const { return calls_.load(); }

 private:
  std::string reply_;
  std::chrono::milliseconds hold_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  std::atomic<int> calls_{0};
};

/// Response with first-token top-logprobs, for weighted-score tests.
inline llm::BackendResult logprob_reply(const std::string& text,
                                        const std::vector<std::pair<std::string, double>>& top) {
  nlohmann::json alternatives = nlohmann::json::array();
  for (const auto& [token, prob] : top)
    alternatives.push_back({{"token", token}, {"logprob", std::log(prob)}});
  nlohmann::json content = nlohmann::json::array();
  content.push_back({{"token", text.substr(0, 1)},
                     {"logprob", top.empty() ? 0.0 : std::log(top.front().second)},
                     {"top_logprobs", alternatives}});
  nlohmann::json res;
  res["choices"] = nlohmann::json::array(
      {{{"index", 0},
        {"message", {{"role", "assistant"}, {"content", text}}},
        {"logprobs", {{"content", content}}}}});
  return {200, res.dump(), ""};
}

inline llm::EndpointConfig test_endpoint(int max_retries = 3, int max_concurrency = 4) {
  llm::EndpointConfig cfg;
  cfg.base_url = "test";
  cfg.model_name = "test-model";
  cfg.max_retries = max_retries;
  cfg.max_concurrency = max_concurrency;
  cfg.initial_backoff_ms = 1;  // keep retry tests fast
  return cfg;
}

}  // namespace tempo::test
