#include "core/backend.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace cs {

namespace {

using nlohmann::json;

json request_to_json(const ChatRequest& req) {
  json body;
  body["model"] = req.model_id;
  body["temperature"] = req.temperature;
  json messages = json::array();
  for (const auto& msg : req.messages) {
    messages.push_back({{"role", msg.role}, {"content", msg.text}});
  }
  body["messages"] = std::move(messages);
  if (req.max_tokens) body["max_tokens"] = *req.max_tokens;
  return body;
}

long long approximate_tokens(const std::string& text) {
  return static_cast<long long>(text.size() / 4 + 1);
}

}  // namespace

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
  if (config_.timeout_s <= 0 || config_.max_attempts < 1) {
    throw CsError(ErrorCode::ConfigInvalid, "timeout_s > 0, max_attempts >= 1");
  }
}

ChatResponse HttpBackend::complete(const ChatRequest& req) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw CsError(ErrorCode::AuthMissing,
                  "environment variable " + config_.api_key_env + " not set");
  }

  auto scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw CsError(ErrorCode::ConfigInvalid, "endpoint needs a scheme");
  }
  auto path_start = config_.endpoint.find('/', scheme_end + 3);
  std::string base = path_start == std::string::npos
                         ? config_.endpoint
                         : config_.endpoint.substr(0, path_start);
  std::string path = path_start == std::string::npos
                         ? std::string("/")
                         : config_.endpoint.substr(path_start);

  json body = request_to_json(req);
  const std::string payload = body.dump();

  auto log_exchange = [&](int status, const std::string& response_body) {
    if (!config_.log_wire || config_.wire_log_path.empty()) return;
    std::lock_guard<std::mutex> lock(log_mutex_);
    std::ofstream log(config_.wire_log_path, std::ios::app);
    json entry;
    entry["request"] = body;  // never contains the api key
    entry["status"] = status;
    entry["response"] = response_body;
    log << entry.dump() << '\n';
  };

  ErrorCode last_error = ErrorCode::ProviderError;
  std::string last_detail = "no attempt made";
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    if (attempt > 1) {
      auto delay = std::chrono::duration<double>(
          config_.backoff_base_s * static_cast<double>(1 << (attempt - 2)));
      std::this_thread::sleep_for(delay);
    }
    httplib::Client client(base);
    client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(config_.timeout_s));
    client.set_bearer_token_auth(key);

    auto result = client.Post(path, payload, "application/json");
    if (!result) {
      last_error = result.error() == httplib::Error::ConnectionTimeout ||
                           result.error() == httplib::Error::Read
                       ? ErrorCode::Timeout
                       : ErrorCode::ProviderError;
      last_detail = httplib::to_string(result.error());
      continue;  // transport failure: retry
    }
    log_exchange(result->status, result->body);
    if (result->status == 429) {
      last_error = ErrorCode::RateLimited;
      last_detail = "429: " + result->body;
      continue;
    }
    if (result->status >= 500) {
      last_error = ErrorCode::ProviderError;
      last_detail = std::to_string(result->status) + ": " + result->body;
      continue;
    }
    if (result->status != 200) {
      // Malformed-request class: surface immediately, never retry.
      throw CsError(ErrorCode::ProviderError,
                    std::to_string(result->status) + ": " + result->body);
    }
    try {
      json reply = json::parse(result->body);
      ChatResponse response;
      response.text = reply.at("choices").at(0).at("message").at("content")
                          .get<std::string>();
      if (reply.at("choices").at(0).contains("finish_reason") &&
          !reply.at("choices").at(0).at("finish_reason").is_null()) {
        response.finish_reason =
            reply.at("choices").at(0).at("finish_reason").get<std::string>();
      }
      if (reply.contains("usage")) {
        response.usage.prompt =
            reply["usage"].value("prompt_tokens", 0LL);
        response.usage.completion =
            reply["usage"].value("completion_tokens", 0LL);
      }
      response.attempts = attempt;
      return response;
    } catch (const std::exception& e) {
      throw CsError(ErrorCode::ProviderError,
                    std::string("unparseable provider body: ") + e.what());
    }
  }
  throw CsError(last_error, "gave up after " +
                                std::to_string(config_.max_attempts) +
                                " attempts: " + last_detail);
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> script,
                                 std::vector<ScriptMatcher> matchers,
                                 std::string default_response)
    : script_(std::move(script)),
      matchers_(std::move(matchers)),
      default_response_(std::move(default_response)) {
  if (script_.empty() && matchers_.empty() && default_response_.empty()) {
    throw CsError(ErrorCode::ConfigInvalid,
                  "scripted backend needs a script, matchers, or a default");
  }
}

ChatResponse ScriptedBackend::complete(const ChatRequest& req) {
  std::lock_guard<std::mutex> lock(mutex_);
  requests_.push_back(req);

  std::string rendered;
  for (const auto& msg : req.messages) {
    rendered += msg.role;
    rendered += ": ";
    rendered += msg.text;
    rendered += '\n';
  }

  const std::string* reply = nullptr;
  for (const auto& matcher : matchers_) {
    if (rendered.find(matcher.contains) != std::string::npos) {
      reply = &matcher.response;
      break;
    }
  }
  if (reply == nullptr && next_ < script_.size()) reply = &script_[next_++];
  if (reply == nullptr && !default_response_.empty()) {
    reply = &default_response_;
  }
  if (reply == nullptr) {
    if (!matchers_.empty() && script_.empty()) {
      throw CsError(ErrorCode::NoMatch, "no matcher applies");
    }
    throw CsError(ErrorCode::ScriptExhausted,
                  "script exhausted after " + std::to_string(next_) +
                      " replies");
  }

  ChatResponse response;
  response.text = *reply;
  response.usage.prompt = approximate_tokens(rendered);
  response.usage.completion = approximate_tokens(*reply);
  return response;
}

std::vector<ChatRequest> ScriptedBackend::request_log() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return requests_;
}

std::size_t ScriptedBackend::call_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return requests_.size();
}

std::unique_ptr<ScriptedBackend> load_scripted_backend(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsError(ErrorCode::IoError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CsError(ErrorCode::ConfigInvalid,
                  path + ": bad script json: " + e.what());
  }
  std::vector<std::string> sequence;
  if (j.contains("sequence")) {
    sequence = j["sequence"].get<std::vector<std::string>>();
  }
  std::vector<ScriptMatcher> matchers;
  if (j.contains("matchers")) {
    for (const auto& m : j["matchers"]) {
      matchers.push_back({m.at("contains").get<std::string>(),
                          m.at("response").get<std::string>()});
    }
  }
  std::string fallback = j.value("default_response", "");
  return std::make_unique<ScriptedBackend>(std::move(sequence),
                                           std::move(matchers),
                                           std::move(fallback));
}

}  // namespace cs
