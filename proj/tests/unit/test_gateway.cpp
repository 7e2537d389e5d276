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

#include "tempo/gateway.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "tempo/backends.hpp"
#include "tempo/offline.hpp"
#include "../support/mock_gateway.hpp"

using namespace tempo;
using namespace tempo::llm;
using tempo::test::test_endpoint;

TEST_CASE("echo mock returns the last user message") {
  ChatClient client(test_endpoint(), test::echo_backend());
  const std::vector<ChatMessage> messages = {system_message("be brief"),
                                             user_message("hello there")};
  CHECK(client.complete(messages).text == "hello there");
}

TEST_CASE("throttle twice then success lands after two retries") {
  auto backend = std::make_shared<test::ScriptedBackend>(std::deque<BackendResult>{
      test::throttled(), test::throttled(), test::ok_reply("finally")});
  ChatClient client(test_endpoint(/*max_retries=*/3), backend);
  const std::vector<ChatMessage> messages = {user_message("x")};
  CHECK(client.complete(messages).text == "finally");
  CHECK(backend->call_count() == 3);
}

TEST_CASE("max_retries = 0 plus one failure exhausts") {
  auto backend =
      std::make_shared<test::ScriptedBackend>(std::deque<BackendResult>{test::throttled()});
  ChatClient client(test_endpoint(/*max_retries=*/0), backend);
  const std::vector<ChatMessage> messages = {user_message("x")};
  try {
    client.complete(messages);
    FAIL("expected GatewayError");
  } catch (const GatewayError& e) {
    CHECK(e.kind() == GatewayErrorKind::retries_exhausted);
  }
  CHECK(backend->call_count() == 1);
}

TEST_CASE("transport failures retry, auth failures do not") {
  auto transport = std::make_shared<test::ScriptedBackend>(std::deque<BackendResult>{
      BackendResult{0, "", "connection refused"}, test::ok_reply("ok")});
  ChatClient flaky(test_endpoint(2), transport);
  const std::vector<ChatMessage> messages = {user_message("x")};
  CHECK(flaky.complete(messages).text == "ok");

  auto denied = std::make_shared<test::ScriptedBackend>(
      std::deque<BackendResult>{BackendResult{401, "{}", ""}});
  ChatClient auth_client(test_endpoint(5), denied);
  try {
    auth_client.complete(messages);
    FAIL("expected GatewayError");
  } catch (const GatewayError& e) {
    CHECK(e.kind() == GatewayErrorKind::auth);
  }
  CHECK(denied->call_count() == 1);  // no retry on auth failure
}

TEST_CASE("malformed payloads are reported, not retried") {
  auto backend = std::make_shared<test::ScriptedBackend>(
      std::deque<BackendResult>{BackendResult{200, "not json", ""}});
  ChatClient client(test_endpoint(3), backend);
  const std::vector<ChatMessage> messages = {user_message("x")};
  try {
    client.complete(messages);
    FAIL("expected GatewayError");
  } catch (const GatewayError& e) {
    CHECK(e.kind() == GatewayErrorKind::malformed_payload);
  }
  CHECK(backend->call_count() == 1);
}

TEST_CASE("complete never exceeds max_concurrency in-flight requests") {
  auto backend =
      std::make_shared<test::CountingBackend>("ok", std::chrono::milliseconds(5));
  ChatClient client(test_endpoint(0, /*max_concurrency=*/3), backend);

  std::vector<std::vector<ChatMessage>> batch(24, {user_message("go")});
  const auto results = client.complete_batch(batch);
  CHECK(results.size() == 24);
  CHECK(backend->calls() == 24);
  CHECK(backend->max_in_flight() <= 3);
  CHECK(backend->max_in_flight() >= 2);  // the pool did overlap
}

TEST_CASE("complete_batch preserves input order") {
  auto backend = std::make_shared<test::RuleBackend>(
      [](const std::string& prompt) { return "reply to " + prompt; });
  ChatClient client(test_endpoint(0, 4), backend);
  std::vector<std::vector<ChatMessage>> batch;
  for (int i = 0; i < 17; ++i) batch.push_back({user_message("msg" + std::to_string(i))});
  const auto results = client.complete_batch(batch);
  REQUIRE(results.size() == 17);
  for (int i = 0; i < 17; ++i) REQUIRE(results[i].text == "reply to msg" + std::to_string(i));
}

TEST_CASE("empty message list is a config error") {
  ChatClient client(test_endpoint(), test::echo_backend());
  CHECK_THROWS_AS(client.complete(std::vector<ChatMessage>{}), GatewayError);
}

TEST_CASE("logprob parsing surfaces token alternatives") {
  auto backend = std::make_shared<test::ScriptedBackend>(std::deque<BackendResult>{
      test::logprob_reply("4", {{"4", 0.5}, {"5", 0.5}})});
  ChatClient client(test_endpoint(), backend);
  const std::vector<ChatMessage> messages = {user_message("score it")};
  const Completion c = client.complete(messages, {}, /*want_logprobs=*/true);
  REQUIRE(c.has_logprobs());
  REQUIRE(c.logprobs.front().top.size() == 2);
  CHECK(c.logprobs.front().top[0].token == "4");
}

TEST_CASE("endpoint config parses and validates") {
  const nlohmann::json j = {{"base_url", "http://localhost:8000"},
                            {"model_name", "local-model"},
                            {"credential_env", "TEMPO_KEY"},
                            {"max_retries", 2},
                            {"max_concurrency", 8}};
  const EndpointConfig cfg = endpoint_config_from_json(j);
  CHECK(cfg.base_url == "http://localhost:8000");
  CHECK(cfg.max_concurrency == 8);

  nlohmann::json bad = j;
  bad["max_concurrency"] = 0;
  CHECK_THROWS_AS(endpoint_config_from_json(bad), std::invalid_argument);
}

TEST_CASE("sampling defaults match the documented values") {
  const SamplingParams p;
  CHECK(p.temperature == 1.0);
  CHECK(p.top_p == 0.95);
}

TEST_CASE("offline backend is deterministic and shape-compatible") {
  OfflineBackend backend;
  nlohmann::json req;
  req["model"] = "offline-mini";
  req["messages"] = nlohmann::json::array(
      {{{"role", "user"},
        {"content", "Your task is to estimate the typical duration of the key event"
                    "\n\nStatement: Jane cooks dinner."}}});
  const std::string body = req.dump();
  const BackendResult a = backend.post_chat(body);
  const BackendResult b = backend.post_chat(body);
  CHECK(a.status == 200);
  CHECK(a.body == b.body);

  ChatClient client(test_endpoint(), std::make_shared<OfflineBackend>());
  const std::vector<ChatMessage> messages = {
      user_message("estimate the typical duration\n\nStatement: Jane cooks dinner.")};
  const std::string reply = client.complete(messages).text;
  CHECK(reply.find("Key event:") != std::string::npos);
  CHECK(reply.find("Duration:") != std::string::npos);
}

TEST_CASE("make_backend selects offline by scheme") {
  EndpointConfig cfg;
  cfg.base_url = "offline";
  auto backend = make_backend(cfg);
  CHECK(std::dynamic_pointer_cast<OfflineBackend>(backend) != nullptr);
}

TEST_CASE("http backend requires the named credential variable") {
  EndpointConfig cfg;
  cfg.base_url = "http://localhost:9";
  cfg.credential_env = "TEMPO_TEST_SURELY_UNSET_VAR";
  CHECK_THROWS_AS(HttpBackend(cfg), GatewayError);
}

TEST_CASE("http backend round-trips against a loopback server") {
  httplib::Server server;
  int hits = 0;
  server.Post("/chat/completions", [&hits](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    if (hits == 1) {  // first request throttled, to exercise the retry path
      res.status = 429;
      res.set_content("{}", "application/json");
      return;
    }
    CHECK(req.get_header_value("Authorization") == "Bearer sekret");
    res.set_content(test::chat_body("pong: " + std::to_string(hits)), "application/json");
  });

  const int port = server.bind_to_any_port("127.0.0.1");
  if (port <= 0) {
    WARN("cannot bind a loopback port in this environment; skipping");
    return;
  }
  std::thread server_thread([&server] { server.listen_after_bind(); });
  server.wait_until_ready();

  setenv("TEMPO_TEST_KEY", "sekret", 1);
  EndpointConfig cfg;
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
  cfg.credential_env = "TEMPO_TEST_KEY";
  cfg.max_retries = 2;
  cfg.initial_backoff_ms = 1;
  ChatClient client(cfg, std::make_shared<HttpBackend>(cfg));
  const std::vector<ChatMessage> messages = {user_message("ping")};
  CHECK(client.complete(messages).text == "pong: 2");

  server.stop();
  server_thread.join();
}
