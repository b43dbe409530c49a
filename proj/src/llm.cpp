// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/llm.hpp"

#include <cstdlib>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "flowforge/value.hpp"

namespace flowforge {

const char* role_name(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "unknown";
}

void check_messages(const std::vector<ChatMessage>& messages) {
  if (messages.empty()) raise(Errc::Precondition, "message list must be non-empty");
  if (messages.front().role != Role::System) {
    raise(Errc::Precondition, "first message must be a system message");
  }
  for (const ChatMessage& m : messages) {
    if (m.role != Role::Assistant && m.content.empty()) {
      raise(Errc::Precondition, "system and user messages must have non-empty content");
    }
  }
}

std::int64_t approx_token_count(const std::string& text) {
  std::int64_t count = 0;
  bool in_word = false;
  for (char c : text) {
    bool ws = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (!ws && !in_word) {
      ++count;
      in_word = true;
    } else if (ws) {
      in_word = false;
    }
  }
  return count;
}

// --- ScriptedBackend ---------------------------------------------------------

ScriptedBackend::ScriptedBackend(std::vector<std::string> transcript)
    : transcript_(transcript.begin(), transcript.end()) {}

Completion ScriptedBackend::complete(const std::vector<ChatMessage>& messages) {
  check_messages(messages);
  std::lock_guard<std::mutex> lock(mu_);
  if (transcript_.empty()) {
    raise(Errc::TranscriptExhausted, "transcript exhausted");
  }
  Completion out;
  out.text = transcript_.front();
  transcript_.pop_front();
  for (const ChatMessage& m : messages) out.usage.prompt_tokens += approx_token_count(m.content);
  out.usage.output_tokens = approx_token_count(out.text);
  return out;
}

std::size_t ScriptedBackend::remaining() const {
  std::lock_guard<std::mutex> lock(mu_);
  return transcript_.size();
}

// --- HttpBackend --------------------------------------------------------------

std::string build_request_body(const BackendConfig& config,
                               const std::vector<ChatMessage>& messages) {
  Json body = Json::object();
  body["model"] = config.model;
  body["temperature"] = config.temperature;
  body["max_tokens"] = config.max_output_tokens;
  Json msgs = Json::array();
  for (const ChatMessage& m : messages) {
    msgs.push_back(Json{{"role", role_name(m.role)}, {"content", m.content}});
  }
  body["messages"] = msgs;
  if (config.json_constraint) {
    body["response_format"] = Json{{"type", "json_object"}};
  }
  return body.dump();
}

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // leading path prefix, may be empty
};

SplitUrl split_url(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    raise(Errc::Precondition, "endpoint must be an http(s) URL: " + url);
  }
  std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

}  // namespace

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
  if (config_.api_key.empty()) {
    const char* env = std::getenv("FLOWFORGE_API_KEY");
    if (env != nullptr) config_.api_key = env;
  }
}

Completion HttpBackend::complete(const std::vector<ChatMessage>& messages) {
  check_messages(messages);
  SplitUrl url = split_url(config_.endpoint);
  std::string path = url.path + "/chat/completions";

  httplib::Client client(url.origin);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  client.set_connection_timeout(std::max<long>(1, secs.count()), 0);
  client.set_read_timeout(std::max<long>(1, secs.count()), 0);
  client.set_write_timeout(std::max<long>(1, secs.count()), 0);

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  std::string body = build_request_body(config_, messages);
  std::string last_error = "no attempts made";
  bool last_was_timeout = false;

  for (int attempt = 0; attempt < std::max(1, config_.retry.max_attempts); ++attempt) {
    if (attempt > 0) {
      auto delay = config_.retry.backoff_base * (1 << (attempt - 1));
      if (delay.count() > 0) std::this_thread::sleep_for(delay);
    }
    httplib::Result res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_was_timeout = res.error() == httplib::Error::ConnectionTimeout ||
                         res.error() == httplib::Error::Read || res.error() == httplib::Error::Write;
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_was_timeout = false;
      last_error = "provider returned status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProviderError(res->status, excerpt(res->body));
    }
    Json doc = Json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.contains("choices") || doc.at("choices").empty() ||
        !doc.at("choices").at(0).contains("message")) {
      throw ProviderError(res->status, "malformed completion body: " + excerpt(res->body));
    }
    Completion out;
    out.text = doc.at("choices").at(0).at("message").value("content", "");
    if (doc.contains("usage") && doc.at("usage").is_object()) {
      out.usage.prompt_tokens = doc.at("usage").value("prompt_tokens", std::int64_t{0});
      out.usage.output_tokens = doc.at("usage").value("completion_tokens", std::int64_t{0});
    } else {
      for (const ChatMessage& m : messages) {
        out.usage.prompt_tokens += approx_token_count(m.content);
      }
      out.usage.output_tokens = approx_token_count(out.text);
    }
    return out;
  }

  if (last_was_timeout) {
    raise(Errc::TimeoutError, "request timed out after " +
                                  std::to_string(config_.retry.max_attempts) + " attempts");
  }
  raise(Errc::TransportError, last_error + " (after " +
                                  std::to_string(config_.retry.max_attempts) + " attempts)");
}

}  // namespace flowforge
