#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "core/backend.hpp"

using namespace cs;

namespace {

ChatRequest simple_request(const std::string& text) {
  ChatRequest req;
  req.messages = {{"user", text}};
  req.model_id = "test-model";
  return req;
}

std::string chat_body(const std::string& content) {
  nlohmann::json reply;
  reply["choices"] = {{{"message", {{"content", content}}},
                       {"finish_reason", "stop"}}};
  reply["usage"] = {{"prompt_tokens", 10}, {"completion_tokens", 5}};
  return reply.dump();
}

struct TestServer {
  httplib::Server server;
  int port = 0;
  std::thread thread;

  explicit TestServer(httplib::Server::Handler handler) {
    server.Post("/v1/chat/completions", std::move(handler));
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~TestServer() {
    server.stop();
    thread.join();
  }
};

}  // namespace

TEST_SUITE("backend") {

TEST_CASE("scripted backend walks the sequence then fails loudly") {
  ScriptedBackend backend({"one", "two"});
  CHECK(backend.complete(simple_request("a")).text == "one");
  CHECK(backend.complete(simple_request("b")).text == "two");
  CHECK_THROWS_AS(backend.complete(simple_request("c")), CsError);
  CHECK(backend.call_count() == 3);
  CHECK(backend.request_log()[1].messages[0].text == "b");
}

TEST_CASE("matchers win over the sequence; default catches the rest") {
  ScriptedBackend backend({"seq"}, {{"magic", "matched"}}, "fallback");
  CHECK(backend.complete(simple_request("contains magic word")).text ==
        "matched");
  CHECK(backend.complete(simple_request("plain")).text == "seq");
  CHECK(backend.complete(simple_request("plain again")).text == "fallback");
}

TEST_CASE("scripted backend config file loads") {
  auto path = std::filesystem::temp_directory_path() / "script-test.json";
  {
    std::ofstream out(path);
    out << R"({"sequence": ["alpha"],
               "matchers": [{"contains": "ping", "response": "pong"}],
               "default_response": "dflt"})";
  }
  auto backend = load_scripted_backend(path.string());
  CHECK(backend->complete(simple_request("ping me")).text == "pong");
  CHECK(backend->complete(simple_request("x")).text == "alpha");
  CHECK(backend->complete(simple_request("y")).text == "dflt");
  std::filesystem::remove(path);
}

TEST_CASE("http backend refuses to start without credentials") {
  BackendConfig cfg;
  cfg.api_key_env = "CS_AGENT_TEST_KEY_UNSET";
  unsetenv(cfg.api_key_env.c_str());
  HttpBackend backend(cfg);
  CHECK_THROWS_AS(backend.complete(simple_request("hi")), CsError);
}

TEST_CASE("http backend retries transient failures and parses replies") {
  std::atomic<int> hits{0};
  TestServer server([&](const httplib::Request&, httplib::Response& res) {
    int call = ++hits;
    if (call <= 2) {
      res.status = 503;
      res.set_content("busy", "text/plain");
    } else {
      res.set_content(chat_body("hello there"), "application/json");
    }
  });

  setenv("CS_AGENT_TEST_KEY", "sk-sensitive-value", 1);
  BackendConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(server.port) +
                 "/v1/chat/completions";
  cfg.api_key_env = "CS_AGENT_TEST_KEY";
  cfg.max_attempts = 4;
  cfg.backoff_base_s = 0.01;
  HttpBackend backend(cfg);
  ChatResponse response = backend.complete(simple_request("hi"));
  CHECK(response.text == "hello there");
  CHECK(response.attempts == 3);
  CHECK(response.usage.prompt == 10);
  CHECK(response.usage.completion == 5);
  CHECK(hits.load() == 3);
}

TEST_CASE("http backend gives up after max attempts") {
  TestServer server([](const httplib::Request&, httplib::Response& res) {
    res.status = 429;
    res.set_content("slow down", "text/plain");
  });
  setenv("CS_AGENT_TEST_KEY", "sk-sensitive-value", 1);
  BackendConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(server.port) +
                 "/v1/chat/completions";
  cfg.api_key_env = "CS_AGENT_TEST_KEY";
  cfg.max_attempts = 2;
  cfg.backoff_base_s = 0.01;
  HttpBackend backend(cfg);
  CHECK_THROWS_WITH_AS(backend.complete(simple_request("hi")),
                       doctest::Contains("gave up after 2 attempts"), CsError);
}

TEST_CASE("wire log captures traffic but never the api key") {
  auto log_path = std::filesystem::temp_directory_path() / "wire-test.log";
  std::filesystem::remove(log_path);
  TestServer server([](const httplib::Request& req, httplib::Response& res) {
    CHECK(req.get_header_value("Authorization") ==
          "Bearer sk-super-secret-key");
    res.set_content(chat_body("ok"), "application/json");
  });
  setenv("CS_AGENT_TEST_KEY", "sk-super-secret-key", 1);
  BackendConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(server.port) +
                 "/v1/chat/completions";
  cfg.api_key_env = "CS_AGENT_TEST_KEY";
  cfg.log_wire = true;
  cfg.wire_log_path = log_path.string();
  HttpBackend backend(cfg);
  backend.complete(simple_request("log me"));

  std::ifstream in(log_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string logged = buffer.str();
  CHECK(logged.find("log me") != std::string::npos);
  CHECK(logged.find("sk-super-secret-key") == std::string::npos);
  CHECK(logged.find("Bearer") == std::string::npos);
  std::filesystem::remove(log_path);
}

}  // TEST_SUITE
