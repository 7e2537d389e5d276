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

#include <cstdlib>
#include <memory>
#include <string>

#include <httplib.h>

#include "tempo/gateway.hpp"
#include "tempo/offline.hpp"

namespace tempo::llm {

/// HTTP chat-completions transport. A fresh connection per request; the
/// ChatClient above it owns retries and pacing. API keys are read from the
/// environment variable named in the config, never from the config itself.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(EndpointConfig cfg) : cfg_(std::move(cfg)) {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (cfg_.base_url.starts_with("https://"))
      throw GatewayError(GatewayErrorKind::config,
                         "https endpoints require a TLS-enabled build (TEMPO_ENABLE_TLS)");
#endif
    if (!cfg_.credential_env.empty()) {
      const char* key = std::getenv(cfg_.credential_env.c_str());
      if (key == nullptr || *key == '\0')
        throw GatewayError(GatewayErrorKind::config,
                           "credential environment variable '" + cfg_.credential_env +
                               "' is not set");
      api_key_ = key;
    }
  }

  BackendResult post_chat(const std::string& request_json) override {
    httplib::Client client(cfg_.base_url);
    client.set_connection_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
    client.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
    client.set_write_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);

    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    httplib::Result res = client.Post(cfg_.chat_path, headers, request_json, "application/json");
    if (!res) return {0, "", httplib::to_string(res.error())};
    return {res->status, res->body, ""};
  }

 private:
  EndpointConfig cfg_;
  std::string api_key_;
};

inline std::shared_ptr<Backend> make_backend(const EndpointConfig& cfg) {
  if (cfg.base_url == "offline" || cfg.base_url.starts_with("offline:"))
    return std::make_shared<OfflineBackend>(cfg.model_name);
  return std::make_shared<HttpBackend>(cfg);
}

inline ChatClient make_client(const EndpointConfig& cfg) {
  return ChatClient(cfg, make_backend(cfg));
}

}  // namespace tempo::llm
