// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "flowforge/errors.hpp"
#include "flowforge/value.hpp"

namespace flowforge {

// One decoded agent step.
struct Action {
  std::string reasoning;
  std::string action;      // tool name, non-empty
  Json action_input;       // argument object
};

struct Plan {
  std::string analysis;
  std::vector<std::string> steps;  // non-empty
};

class ParseFailure : public Error {
 public:
  ParseFailure(int stage, const std::string& message)
      : Error(Errc::ParseFailure, message), stage_(stage) {}
  // Last pipeline stage consulted (1 = strict, 2 = fenced blocks, 3 = brace scan).
  int stage() const { return stage_; }

 private:
  int stage_;
};

// Three-stage pipeline: strict whole-string parse, code-fence stripping,
// then a left-to-right scan over balanced-brace substrings. The first
// object carrying exactly the required fields wins.
Action parse_action(const std::string& raw);
Plan parse_plan(const std::string& raw);

// The verbatim format-recovery user message.
std::string recovery_prompt();

// Callback that appends a user message to the session and returns the next
// assistant reply.
using Requery = std::function<std::string(const std::string& user_message)>;

// Retries with recovery_prompt() on ParseFailure, at most `max_retries`
// re-queries; then throws Error(FormatExhausted).
Action decode_action_with_recovery(const std::string& first_raw, const Requery& requery,
                                   int max_retries = 5, int* retries_used = nullptr);
Plan decode_plan_with_recovery(const std::string& first_raw, const Requery& requery,
                               int max_retries = 5, int* retries_used = nullptr);

}  // namespace flowforge
