// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/codec.hpp"

#include <optional>

#include "flowforge/prompts.hpp"
#include "flowforge/text.hpp"

namespace flowforge {

namespace {

// Schema checkers return an error string, or empty when the object matches.
// Exactness is deliberate: missing or extra fields both fail.
std::string action_schema(const Json& j) {
  if (!j.is_object()) return "not a JSON object";
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "reasoning" && it.key() != "action" && it.key() != "action_input") {
      return "unexpected field '" + it.key() + "'";
    }
  }
  if (!j.contains("reasoning") || !j.at("reasoning").is_string()) {
    return "missing or non-string 'reasoning'";
  }
  if (!j.contains("action") || !j.at("action").is_string() ||
      j.at("action").get<std::string>().empty()) {
    return "missing or empty 'action'";
  }
  if (!j.contains("action_input") || !j.at("action_input").is_object()) {
    return "missing or non-object 'action_input'";
  }
  return "";
}

std::string plan_schema(const Json& j) {
  if (!j.is_object()) return "not a JSON object";
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "analysis" && it.key() != "steps") {
      return "unexpected field '" + it.key() + "'";
    }
  }
  if (!j.contains("analysis") || !j.at("analysis").is_string()) {
    return "missing or non-string 'analysis'";
  }
  if (!j.contains("steps") || !j.at("steps").is_array()) return "missing or non-array 'steps'";
  if (j.at("steps").empty()) return "'steps' must be non-empty";
  for (const Json& s : j.at("steps")) {
    if (!s.is_string()) return "'steps' must contain only strings";
  }
  return "";
}

std::optional<Json> try_parse(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

// Matching '}' for the '{' at `open`, honouring JSON string syntax so braces
// inside quoted text do not count.
std::optional<std::size_t> matching_brace(const std::string& s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      --depth;
      if (depth == 0) return i;
    }
  }
  return std::nullopt;
}

// Fenced blocks: content between ``` pairs, with an optional language tag on
// the opening fence line.
std::vector<std::string> fenced_blocks(const std::string& raw) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = raw.find("```", pos);
    if (open == std::string::npos) break;
    std::size_t content = open + 3;
    std::size_t nl = raw.find('\n', content);
    std::size_t close = raw.find("```", content);
    if (close == std::string::npos) break;
    if (nl != std::string::npos && nl < close) content = nl + 1;
    out.push_back(raw.substr(content, close - content));
    pos = close + 3;
  }
  return out;
}

struct Extracted {
  Json object;
  int stage;
};

Extracted extract_structured(const std::string& raw,
                             const std::function<std::string(const Json&)>& schema) {
  std::string last_schema_error;

  // Stage 1: strict whole-string parse.
  std::string trimmed = trim(raw);
  if (auto j = try_parse(trimmed)) {
    std::string err = schema(*j);
    if (err.empty()) return {*j, 1};
    last_schema_error = err;
  }

  // Stage 2: code-fenced blocks.
  for (const std::string& block : fenced_blocks(raw)) {
    if (auto j = try_parse(trim(block))) {
      std::string err = schema(*j);
      if (err.empty()) return {*j, 2};
      if (last_schema_error.empty()) last_schema_error = err;
    }
  }

  // Stage 3: balanced-brace substrings, left to right; the first span that
  // parses and matches the schema wins.
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '{') continue;
    auto end = matching_brace(raw, i);
    if (!end.has_value()) continue;
    if (auto j = try_parse(raw.substr(i, *end - i + 1))) {
      std::string err = schema(*j);
      if (err.empty()) return {*j, 3};
      if (last_schema_error.empty()) last_schema_error = err;
    }
  }

  std::string diag = "no parseable structured object found";
  if (!last_schema_error.empty()) diag += " (closest candidate: " + last_schema_error + ")";
  throw ParseFailure(3, diag);
}

}  // namespace

Action parse_action(const std::string& raw) {
  Extracted ex = extract_structured(raw, action_schema);
  Action a;
  a.reasoning = ex.object.at("reasoning").get<std::string>();
  a.action = ex.object.at("action").get<std::string>();
  a.action_input = ex.object.at("action_input");
  return a;
}

Plan parse_plan(const std::string& raw) {
  Extracted ex = extract_structured(raw, plan_schema);
  Plan p;
  p.analysis = ex.object.at("analysis").get<std::string>();
  for (const Json& s : ex.object.at("steps")) p.steps.push_back(s.get<std::string>());
  return p;
}

std::string recovery_prompt() { return prompts::format_recovery(); }

namespace {

template <typename T, typename ParseFn>
T decode_with_recovery(const std::string& first_raw, const Requery& requery, int max_retries,
                       int* retries_used, ParseFn parse_fn) {
  std::string raw = first_raw;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    try {
      T result = parse_fn(raw);
      if (retries_used != nullptr) *retries_used = attempt;
      return result;
    } catch (const ParseFailure&) {
      if (attempt == max_retries) break;
      raw = requery(recovery_prompt());
    }
  }
  if (retries_used != nullptr) *retries_used = max_retries;
  raise(Errc::FormatExhausted,
        "response could not be parsed after " + std::to_string(max_retries) + " format retries");
}

}  // namespace

Action decode_action_with_recovery(const std::string& first_raw, const Requery& requery,
                                   int max_retries, int* retries_used) {
  return decode_with_recovery<Action>(first_raw, requery, max_retries, retries_used,
                                      [](const std::string& raw) { return parse_action(raw); });
}

Plan decode_plan_with_recovery(const std::string& first_raw, const Requery& requery,
                               int max_retries, int* retries_used) {
  return decode_with_recovery<Plan>(first_raw, requery, max_retries, retries_used,
                                    [](const std::string& raw) { return parse_plan(raw); });
}

}  // namespace flowforge
