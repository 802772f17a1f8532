#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "wdn/forecast.hpp"

namespace wdn {

using nlohmann::json;

void LlmClientConfig::validate() const {
  if (base_url.empty()) throw std::invalid_argument("LLM base_url is empty");
  if (!(timeout_seconds > 0.0)) throw std::invalid_argument("LLM timeout must be > 0");
  if (max_retries < 0) throw std::invalid_argument("LLM max_retries must be >= 0");
  if (session_memory_depth < 0) throw std::invalid_argument("session memory depth must be >= 0");
  if (backoff_seconds < 0.0) throw std::invalid_argument("backoff must be >= 0");
}

LlmClientConfig LlmClientConfig::from_env(const char* env_var) {
  LlmClientConfig c;
  if (const char* key = std::getenv(env_var)) c.api_key = key;
  return c;
}

ChatClient::ChatClient(LlmClientConfig config) : config_(std::move(config)) {
  config_.validate();
}

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& base_url) {
  const auto scheme = base_url.find("://");
  if (scheme == std::string::npos)
    throw std::invalid_argument("LLM base_url needs a scheme: " + base_url);
  const auto slash = base_url.find('/', scheme + 3);
  Endpoint e;
  e.origin = base_url.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : base_url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  e.path = prefix + "/chat/completions";
  return e;
}

}  // namespace

std::string ChatClient::request_body(const std::string& session_id,
                                     const std::vector<ChatMessage>& messages) const {
  json msgs = json::array();
  std::size_t i = 0;
  for (; i < messages.size() && messages[i].first == "system"; ++i)
    msgs.push_back({{"role", messages[i].first}, {"content", messages[i].second}});
  {
    std::lock_guard lock(mutex_);
    auto it = memory_.find(session_id);
    if (it != memory_.end())
      for (const auto& ex : it->second) {
        msgs.push_back({{"role", "user"}, {"content", ex.user}});
        msgs.push_back({{"role", "assistant"}, {"content", ex.assistant}});
      }
  }
  for (; i < messages.size(); ++i)
    msgs.push_back({{"role", messages[i].first}, {"content", messages[i].second}});
  json body = {{"model", config_.model}, {"temperature", config_.temperature}, {"messages", msgs}};
  return body.dump();
}

std::string ChatClient::call(const std::string& session_id,
                             const std::vector<ChatMessage>& messages) {
  if (messages.empty()) throw std::invalid_argument("chat call needs at least one message");
  const Endpoint ep = split_url(config_.base_url);
  const std::string body = request_body(session_id, messages);

  httplib::Client cli(ep.origin);
  const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  std::string last_error;
  double backoff = config_.backoff_seconds;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= 2.0;
    }
    auto res = cli.Post(ep.path, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    const json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.is_object())
      throw ChatError(ChatError::Kind::BadBody, "chat endpoint returned a non-JSON body");
    const auto choices = reply.find("choices");
    if (choices == reply.end() || !choices->is_array() || choices->empty())
      throw ChatError(ChatError::Kind::NoChoices, "chat response has no choices");
    const auto& first = (*choices)[0];
    if (!first.contains("message") || !first["message"].contains("content") ||
        !first["message"]["content"].is_string())
      throw ChatError(ChatError::Kind::BadBody, "chat response choice has no message content");
    std::string content = first["message"]["content"].get<std::string>();

    std::string user;
    for (const auto& [role, text] : messages)
      if (role != "system") user += user.empty() ? text : "\n" + text;
    {
      std::lock_guard lock(mutex_);
      auto& mem = memory_[session_id];
      mem.push_back({std::move(user), content});
      while (mem.size() > static_cast<std::size_t>(config_.session_memory_depth)) mem.pop_front();
    }
    return content;
  }
  throw ChatError(last_error.rfind("HTTP", 0) == 0 ? ChatError::Kind::HttpStatus
                                                   : ChatError::Kind::Transport,
                  "chat call failed after " + std::to_string(config_.max_retries + 1) +
                      " attempts: " + last_error);
}

std::size_t ChatClient::memory_size(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  auto it = memory_.find(session_id);
  return it == memory_.end() ? 0 : it->second.size();
}

}  // namespace wdn
