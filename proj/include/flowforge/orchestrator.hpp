// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flowforge/codec.hpp"
#include "flowforge/graph.hpp"
#include "flowforge/llm.hpp"
#include "flowforge/tools.hpp"

namespace flowforge {

enum class StepPhase { Execute, PostHoc, Summarize };
enum class TraceStatus { Success, Failed };
enum class FailReason {
  None,
  StepLimit,
  FormatExhausted,
  ToolRetriesExhausted,
  TransportError,
  TranscriptExhausted,
};

const char* phase_name(StepPhase p);
const char* fail_reason_name(FailReason r);

struct TraceStep {
  int index = 0;
  std::string reasoning;
  std::string action;  // empty when format recovery exhausted before any action
  Json args = Json::object();
  std::string observation;  // tool result or error text
  std::optional<Partition> partition;
  Usage usage;  // delta for this step, including its format-retry queries
  int format_retries = 0;
  int tool_retries = 0;  // consecutive tool failures when this attempt ran
  bool ok = true;
  StepPhase phase = StepPhase::Execute;
};

struct Trace {
  std::string task_id;
  std::string strategy;
  std::string query;
  std::vector<TraceStep> steps;
  std::optional<Plan> plan;
  std::optional<std::string> final_answer;
  TraceStatus status = TraceStatus::Failed;
  FailReason fail_reason = FailReason::None;
  Usage usage;           // preamble_usage + sum of step usage deltas
  Usage preamble_usage;  // planning-phase usage for plan-first strategies
  bool has_business_call = false;
  std::optional<std::size_t> posthoc_from;

  bool succeeded() const { return status == TraceStatus::Success; }
};

struct SessionLimits {
  int max_steps = 30;
  int max_tool_retries = 3;
  int max_format_retries = 5;
};

struct TaskPrompt {
  std::string id;
  std::string text;
};

struct SessionResult {
  Trace trace;
  std::optional<WorkflowGraph> graph;
};

// Reasoning-action loop shared by all strategies. Owns the conversation,
// decoding with format recovery, tool dispatch, the tool-error recovery
// loop, and step accounting.
class AgentSession {
 public:
  enum class StepOutcome { Finished, ToolOk, ToolFailed };

  AgentSession(LlmBackend& backend, ToolRegistry tools, SessionLimits limits,
               WorkflowGraph* graph = nullptr);

  void set_system(const std::string& system_prompt);
  void set_phase(StepPhase phase) { phase_ = phase; }
  void set_next_user(const std::string& message) { next_user_ = message; }
  const std::string& next_user() const { return next_user_; }

  // One decode + dispatch using the pending user message.
  StepOutcome attempt();
  // Loop until finish or a limit trips.
  void run_loop(const std::string& initial_user);
  // Fails with StepLimit and returns true when the step budget is spent.
  bool guard_step_limit();
  // Appends a user message without querying (e.g. the injected plan context).
  void seed_user_context(const std::string& content);
  // Continue a finished-successfully session in a new phase with a new tool
  // set (Enhanced ReAct post-hoc graph phase).
  void reopen(ToolRegistry tools, StepPhase phase);

  bool finished() const { return finished_; }
  Trace& trace() { return trace_; }
  const ToolRegistry& tools() const { return tools_; }

 private:
  std::string ask(const std::string& user_message);
  void record_step(TraceStep step);
  void fail(FailReason reason);
  std::string observation_message(Partition partition, const std::string& result_str) const;

  LlmBackend& backend_;
  ToolRegistry tools_;
  SessionLimits limits_;
  WorkflowGraph* graph_;
  std::vector<ChatMessage> messages_;
  Trace trace_;
  Usage pending_usage_;
  std::string next_user_;
  StepPhase phase_ = StepPhase::Execute;
  int consecutive_tool_failures_ = 0;
  bool finished_ = false;
};

// Single-stage strategies. The caller controls the tool set: business-only
// for ES execution rollouts, business+graph for the one-stage baselines.
// When `bind_graph_tools` is set, a fresh session graph backs the five
// graph-construction tools and is returned if anything was built.
SessionResult run_react(const TaskPrompt& task, const ToolRegistry& business_tools,
                        LlmBackend& backend, const SessionLimits& limits,
                        bool bind_graph_tools = false);
SessionResult run_plan_execute(const TaskPrompt& task, const ToolRegistry& business_tools,
                               LlmBackend& backend, const SessionLimits& limits,
                               bool bind_graph_tools = false);
SessionResult run_enhanced_react(const TaskPrompt& task, const ToolRegistry& business_tools,
                                 LlmBackend& backend, const SessionLimits& limits);

// "Step 3: `add(a=1, b=2)` -> `3`" line used in accumulated context and
// trace formatting.
std::string step_context_line(int number, const TraceStep& step);

std::string trace_to_jsonl(const Trace& trace, const std::string& config_hash = "");
Trace trace_from_jsonl(const std::string& text);

}  // namespace flowforge
