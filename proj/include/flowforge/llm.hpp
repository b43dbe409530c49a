// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "flowforge/errors.hpp"

namespace flowforge {

enum class Role { System, User, Assistant };

const char* role_name(Role r);

struct ChatMessage {
  Role role;
  std::string content;
};

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t output_tokens = 0;

  Usage& operator+=(const Usage& other) {
    prompt_tokens += other.prompt_tokens;
    output_tokens += other.output_tokens;
    return *this;
  }
  bool operator==(const Usage& other) const = default;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{200};
};

struct BackendConfig {
  std::string endpoint;  // e.g. "http://127.0.0.1:8080/v1"
  std::string model = "desk-model";
  double temperature = 0.0;
  int max_output_tokens = 4096;
  std::chrono::milliseconds timeout{30000};
  RetryPolicy retry;
  // Adds the structured-output "response_format" field to requests. OFF by
  // default; the robust parser handles mixed-format replies instead.
  bool json_constraint = false;
  std::string api_key;  // falls back to the FLOWFORGE_API_KEY env var
};

struct Completion {
  std::string text;
  Usage usage;
};

class ProviderError : public Error {
 public:
  ProviderError(int status, const std::string& body_excerpt)
      : Error(Errc::ProviderError,
              "provider returned status " + std::to_string(status) + ": " + body_excerpt),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  // Messages must be non-empty, start with a System message, and System/User
  // contents must be non-empty.
  virtual Completion complete(const std::vector<ChatMessage>& messages) = 0;
};

// Replays a canned transcript; each complete() pops the next entry. Token
// usage is synthesized by whitespace word counts.
class ScriptedBackend : public LlmBackend {
 public:
  explicit ScriptedBackend(std::vector<std::string> transcript);
  Completion complete(const std::vector<ChatMessage>& messages) override;
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::deque<std::string> transcript_;
};

// Speaks the chat-completions HTTP wire protocol with retry/backoff.
class HttpBackend : public LlmBackend {
 public:
  explicit HttpBackend(BackendConfig config);
  Completion complete(const std::vector<ChatMessage>& messages) override;

  const BackendConfig& config() const { return config_; }

 private:
  BackendConfig config_;
};

void check_messages(const std::vector<ChatMessage>& messages);
std::int64_t approx_token_count(const std::string& text);

// Request body for one completion call; exposed so tests can assert the
// exact wire shape (presence/absence of response_format).
std::string build_request_body(const BackendConfig& config,
                               const std::vector<ChatMessage>& messages);

}  // namespace flowforge
