#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace cs {

struct ChatMessage {
  std::string role;  // "system", "user", "assistant"
  std::string text;
};

struct TokenUsage {
  long long prompt = 0;
  long long completion = 0;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.5;
  std::string model_id;
  std::optional<int> max_tokens;
};

struct ChatResponse {
  std::string text;
  std::string finish_reason = "stop";
  TokenUsage usage;
  int attempts = 1;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse complete(const ChatRequest& req) = 0;
};

struct BackendConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model_id = "gpt-3.5-turbo";
  std::string api_key_env = "CS_AGENT_API_KEY";
  double timeout_s = 60.0;
  int max_attempts = 3;
  double backoff_base_s = 0.5;
  double default_temperature = 0.5;
  bool log_wire = false;
  std::string wire_log_path;
};

// Live chat-completions client with bounded exponential-backoff retries on
// transient failures. Never retries malformed requests; never logs secrets.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(BackendConfig config);
  ChatResponse complete(const ChatRequest& req) override;

 private:
  BackendConfig config_;
  std::mutex log_mutex_;
};

struct ScriptMatcher {
  std::string contains;  // substring of the last user message
  std::string response;
};

// Deterministic replay backend for tests: ordered script and/or substring
// matchers; records every request.
class ScriptedBackend : public ChatBackend {
 public:
  ScriptedBackend(std::vector<std::string> script,
                  std::vector<ScriptMatcher> matchers = {},
                  std::string default_response = "");

  ChatResponse complete(const ChatRequest& req) override;

  std::vector<ChatRequest> request_log() const;
  std::size_t call_count() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> script_;
  std::size_t next_ = 0;
  std::vector<ScriptMatcher> matchers_;
  std::string default_response_;
  std::vector<ChatRequest> requests_;
};

// Loads a scripted backend description from a JSON file with optional keys
// "sequence", "matchers" ([{"contains", "response"}]) and "default_response".
std::unique_ptr<ScriptedBackend> load_scripted_backend(const std::string& path);

}  // namespace cs
