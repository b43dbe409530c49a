// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/orchestrator.hpp"

#include <sstream>

#include "flowforge/prompts.hpp"
#include "flowforge/text.hpp"

namespace flowforge {

const char* phase_name(StepPhase p) {
  switch (p) {
    case StepPhase::Execute: return "execute";
    case StepPhase::PostHoc: return "posthoc";
    case StepPhase::Summarize: return "summarize";
  }
  return "unknown";
}

const char* fail_reason_name(FailReason r) {
  switch (r) {
    case FailReason::None: return "none";
    case FailReason::StepLimit: return "step_limit";
    case FailReason::FormatExhausted: return "format_exhausted";
    case FailReason::ToolRetriesExhausted: return "tool_retries_exhausted";
    case FailReason::TransportError: return "transport_error";
    case FailReason::TranscriptExhausted: return "transcript_exhausted";
  }
  return "unknown";
}

namespace {

FailReason reason_for(const Error& e) {
  switch (e.code()) {
    case Errc::TranscriptExhausted: return FailReason::TranscriptExhausted;
    case Errc::FormatExhausted: return FailReason::FormatExhausted;
    default: return FailReason::TransportError;
  }
}

std::string finish_answer(const Json& action_input) {
  if (!action_input.contains("answer")) return "";
  const Json& answer = action_input.at("answer");
  if (!json_is_valueish(answer)) return answer.dump();
  return canonical_text(value_from_json(answer));
}

}  // namespace

// --- AgentSession -------------------------------------------------------------

AgentSession::AgentSession(LlmBackend& backend, ToolRegistry tools, SessionLimits limits,
                           WorkflowGraph* graph)
    : backend_(backend), tools_(std::move(tools)), limits_(limits), graph_(graph) {}

void AgentSession::set_system(const std::string& system_prompt) {
  messages_.clear();
  messages_.push_back({Role::System, system_prompt});
}

std::string AgentSession::ask(const std::string& user_message) {
  messages_.push_back({Role::User, user_message});
  Completion c = backend_.complete(messages_);
  messages_.push_back({Role::Assistant, c.text});
  pending_usage_ += c.usage;
  trace_.usage += c.usage;
  return c.text;
}

void AgentSession::record_step(TraceStep step) {
  step.index = static_cast<int>(trace_.steps.size());
  step.usage = pending_usage_;
  pending_usage_ = Usage{};
  step.phase = phase_;
  trace_.steps.push_back(std::move(step));
}

void AgentSession::fail(FailReason reason) {
  trace_.status = TraceStatus::Failed;
  trace_.fail_reason = reason;
  finished_ = true;
}

std::string AgentSession::observation_message(Partition partition,
                                              const std::string& result_str) const {
  if (partition == Partition::GraphConstruction && graph_ != nullptr) {
    return prompts::graph_observation(result_str, render_state(*graph_));
  }
  return prompts::business_observation(result_str);
}

AgentSession::StepOutcome AgentSession::attempt() {
  std::string raw;
  Action action;
  int format_retries = 0;
  try {
    raw = ask(next_user_);
    action = decode_action_with_recovery(
        raw, [this](const std::string& msg) { return ask(msg); }, limits_.max_format_retries,
        &format_retries);
  } catch (const Error& e) {
    if (e.code() == Errc::FormatExhausted) {
      TraceStep step;
      step.action = "";
      step.observation = "format recovery exhausted";
      step.format_retries = format_retries;
      step.ok = false;
      record_step(std::move(step));
      fail(FailReason::FormatExhausted);
    } else {
      fail(reason_for(e));
    }
    return StepOutcome::Finished;
  }

  TraceStep step;
  step.reasoning = action.reasoning;
  step.action = action.action;
  step.args = action.action_input;
  step.format_retries = format_retries;
  step.tool_retries = consecutive_tool_failures_;
  step.partition = tools_.partition_of(action.action);

  if (step.partition == Partition::Terminal) {
    std::string answer = finish_answer(action.action_input);
    step.observation = answer;
    record_step(std::move(step));
    trace_.final_answer = answer;
    trace_.status = TraceStatus::Success;
    finished_ = true;
    return StepOutcome::Finished;
  }

  try {
    Value result = tools_.execute(action.action, action.action_input);
    step.observation = canonical_text(result);
    step.ok = true;
    Partition part = step.partition.value();
    if (part == Partition::Business) trace_.has_business_call = true;
    std::string obs = step.observation;
    record_step(std::move(step));
    consecutive_tool_failures_ = 0;
    next_user_ = observation_message(part, obs);
    return StepOutcome::ToolOk;
  } catch (const ToolError& e) {
    step.observation = e.what();
    step.ok = false;
    ++consecutive_tool_failures_;
    step.tool_retries = consecutive_tool_failures_;
    record_step(std::move(step));
    if (consecutive_tool_failures_ > limits_.max_tool_retries) {
      fail(FailReason::ToolRetriesExhausted);
      return StepOutcome::Finished;
    }
    const std::vector<std::string>* params = nullptr;
    std::vector<std::string> param_names;
    if (const ToolSpec* spec = tools_.find(action.action)) {
      param_names = spec->param_names();
      params = &param_names;
    }
    next_user_ = prompts::error_recovery(action.action, render_args_str(action.action_input, params),
                                         e.what(), e.signature_info(), consecutive_tool_failures_,
                                         limits_.max_tool_retries);
    return StepOutcome::ToolFailed;
  }
}

void AgentSession::run_loop(const std::string& initial_user) {
  next_user_ = initial_user;
  while (!finished_) {
    if (guard_step_limit()) break;
    attempt();
  }
}

bool AgentSession::guard_step_limit() {
  if (static_cast<int>(trace_.steps.size()) >= limits_.max_steps) {
    fail(FailReason::StepLimit);
    return true;
  }
  return false;
}

void AgentSession::seed_user_context(const std::string& content) {
  messages_.push_back({Role::User, content});
}

void AgentSession::reopen(ToolRegistry tools, StepPhase phase) {
  tools_ = std::move(tools);
  phase_ = phase;
  finished_ = false;
  consecutive_tool_failures_ = 0;
}

// --- strategies ---------------------------------------------------------------

std::string step_context_line(int number, const TraceStep& step) {
  return "Step " + std::to_string(number) + ": `" + step.action + "(" +
         render_args_str(step.args) + ")` -> `" + step.observation + "`";
}

namespace {

struct SessionSetup {
  ToolRegistry tools;
  std::unique_ptr<WorkflowGraph> graph;
};

SessionSetup make_session_tools(const ToolRegistry& business_tools, bool bind_graph_tools) {
  SessionSetup setup;
  setup.tools = business_tools.filtered({Partition::Business});
  if (bind_graph_tools) {
    setup.graph = std::make_unique<WorkflowGraph>();
    register_graph_tools(setup.tools, *setup.graph);
  }
  return setup;
}

std::optional<WorkflowGraph> take_graph(SessionSetup& setup) {
  if (setup.graph == nullptr || setup.graph->empty()) return std::nullopt;
  return *setup.graph;
}

std::string plan_context_message(const std::string& task_text, const Plan& plan) {
  std::string out = "## Task\n" + task_text + "\n\n## Execution Plan\n**Analysis**: " +
                    plan.analysis + "\n\n**Steps**:\n";
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    out += std::to_string(i + 1) + ". " + plan.steps[i] + "\n";
  }
  return out;
}

// Planning call in its own conversation; usage lands in preamble_usage.
std::optional<Plan> run_planning_phase(const std::string& system_prompt,
                                       const std::string& user_text, LlmBackend& backend,
                                       const SessionLimits& limits, Trace& trace) {
  std::vector<ChatMessage> messages{{Role::System, system_prompt}, {Role::User, user_text}};
  auto ask = [&backend, &messages, &trace](const std::string& msg) {
    if (!msg.empty()) messages.push_back({Role::User, msg});
    Completion c = backend.complete(messages);
    messages.push_back({Role::Assistant, c.text});
    trace.preamble_usage += c.usage;
    trace.usage += c.usage;
    return c.text;
  };
  try {
    std::string raw = ask("");
    // The first ask uses the already-present user text; retries append the
    // recovery prompt.
    Plan plan = decode_plan_with_recovery(
        raw, [&ask](const std::string& msg) { return ask(msg); }, limits.max_format_retries);
    return plan;
  } catch (const Error& e) {
    trace.status = TraceStatus::Failed;
    trace.fail_reason = reason_for(e);
    return std::nullopt;
  }
}

// Plan steps each trigger exactly one successful action; tool errors retry
// within the step. Any remaining work happens in a trailing observation loop
// until finish.
void run_planned_execution(AgentSession& session, const Plan& plan) {
  std::vector<std::string> accumulated;
  for (std::size_t i = 0; i < plan.steps.size() && !session.finished(); ++i) {
    std::string context = accumulated.empty() ? "(none)" : join(accumulated, "\n");
    session.set_next_user(
        prompts::step_instruction(static_cast<int>(i + 1), plan.steps[i], context));
    while (!session.finished()) {
      if (session.guard_step_limit()) break;
      AgentSession::StepOutcome outcome = session.attempt();
      if (outcome == AgentSession::StepOutcome::ToolOk) {
        const TraceStep& step = session.trace().steps.back();
        accumulated.push_back(step_context_line(static_cast<int>(accumulated.size()) + 1, step));
        break;
      }
      if (outcome == AgentSession::StepOutcome::Finished) break;
      // ToolFailed: recovery message pending, stay on this plan step.
    }
  }
  // Trailing loop: keep going with observation feedback until finish.
  while (!session.finished()) {
    if (session.guard_step_limit()) break;
    session.attempt();
  }
}

}  // namespace

SessionResult run_react(const TaskPrompt& task, const ToolRegistry& business_tools,
                        LlmBackend& backend, const SessionLimits& limits, bool bind_graph_tools) {
  SessionSetup setup = make_session_tools(business_tools, bind_graph_tools);
  AgentSession session(backend, setup.tools, limits, setup.graph.get());
  session.trace().task_id = task.id;
  session.trace().strategy = "react";
  session.trace().query = task.text;
  session.set_system(prompts::react_system(
      session.tools().render_signatures({Partition::Business, Partition::GraphConstruction,
                                         Partition::Terminal})));
  session.run_loop(task.text);
  return {std::move(session.trace()), take_graph(setup)};
}

SessionResult run_plan_execute(const TaskPrompt& task, const ToolRegistry& business_tools,
                               LlmBackend& backend, const SessionLimits& limits,
                               bool bind_graph_tools) {
  SessionSetup setup = make_session_tools(business_tools, bind_graph_tools);
  AgentSession session(backend, setup.tools, limits, setup.graph.get());
  session.trace().task_id = task.id;
  session.trace().strategy = "plan_execute";
  session.trace().query = task.text;

  std::string functions_text = session.tools().render_signatures(
      {Partition::Business, Partition::GraphConstruction, Partition::Terminal});
  std::optional<Plan> plan =
      run_planning_phase(prompts::planning_system(functions_text), task.text, backend, limits,
                         session.trace());
  if (!plan.has_value()) {
    return {std::move(session.trace()), take_graph(setup)};
  }
  session.trace().plan = plan;

  session.set_system(prompts::execution_system(functions_text));
  session.seed_user_context(plan_context_message(task.text, *plan));
  run_planned_execution(session, *plan);
  return {std::move(session.trace()), take_graph(setup)};
}

SessionResult run_enhanced_react(const TaskPrompt& task, const ToolRegistry& business_tools,
                                 LlmBackend& backend, const SessionLimits& limits) {
  SessionSetup setup = make_session_tools(business_tools, /*bind_graph_tools=*/true);
  AgentSession session(backend, setup.tools, limits, setup.graph.get());
  session.trace().task_id = task.id;
  session.trace().strategy = "enhanced_react";
  session.trace().query = task.text;
  session.set_system(prompts::react_system(
      session.tools().render_signatures({Partition::Business, Partition::GraphConstruction,
                                         Partition::Terminal})));
  session.run_loop(task.text);

  bool graph_touched = false;
  for (const TraceStep& step : session.trace().steps) {
    if (step.partition == Partition::GraphConstruction && step.ok) graph_touched = true;
  }

  if (session.trace().succeeded() && !graph_touched) {
    // Post-hoc intervention: graph tools only, same conversation.
    session.trace().posthoc_from = session.trace().steps.size();
    ToolRegistry posthoc_tools;
    register_graph_tools(posthoc_tools, *setup.graph);
    session.reopen(std::move(posthoc_tools), StepPhase::PostHoc);
    std::string saved_answer = session.trace().final_answer.value_or("");
    session.run_loop(prompts::posthoc_graph_prompt());
    bool posthoc_finished = session.trace().succeeded();
    // The execution verdict stands regardless of how the post-hoc phase went.
    session.trace().status = TraceStatus::Success;
    session.trace().fail_reason = FailReason::None;
    session.trace().final_answer = saved_answer;
    if (!posthoc_finished) {
      return {std::move(session.trace()), std::nullopt};
    }
  }
  return {std::move(session.trace()), take_graph(setup)};
}

// --- trace serialization -------------------------------------------------------

std::string trace_to_jsonl(const Trace& trace, const std::string& config_hash) {
  std::ostringstream out;
  Json header = Json::object();
  header["type"] = "header";
  header["task_id"] = trace.task_id;
  header["strategy"] = trace.strategy;
  header["query"] = trace.query;
  header["config_hash"] = config_hash;
  if (trace.plan.has_value()) {
    header["plan"] = Json{{"analysis", trace.plan->analysis}, {"steps", trace.plan->steps}};
  }
  out << header.dump() << "\n";
  for (const TraceStep& s : trace.steps) {
    Json js = Json::object();
    js["type"] = "step";
    js["index"] = s.index;
    js["reasoning"] = s.reasoning;
    js["action"] = s.action;
    js["args"] = s.args;
    js["observation"] = s.observation;
    if (s.partition.has_value()) js["partition"] = partition_name(*s.partition);
    js["usage"] = Json{{"prompt", s.usage.prompt_tokens}, {"output", s.usage.output_tokens}};
    js["format_retries"] = s.format_retries;
    js["tool_retries"] = s.tool_retries;
    js["ok"] = s.ok;
    js["phase"] = phase_name(s.phase);
    out << js.dump() << "\n";
  }
  Json footer = Json::object();
  footer["type"] = "result";
  footer["status"] = trace.succeeded() ? "success" : "failed";
  footer["fail_reason"] = fail_reason_name(trace.fail_reason);
  if (trace.final_answer.has_value()) footer["final_answer"] = *trace.final_answer;
  footer["usage"] = Json{{"prompt", trace.usage.prompt_tokens}, {"output", trace.usage.output_tokens}};
  footer["preamble_usage"] =
      Json{{"prompt", trace.preamble_usage.prompt_tokens}, {"output", trace.preamble_usage.output_tokens}};
  footer["has_business_call"] = trace.has_business_call;
  if (trace.posthoc_from.has_value()) footer["posthoc_from"] = *trace.posthoc_from;
  out << footer.dump() << "\n";
  return out.str();
}

namespace {

StepPhase phase_from_string(const std::string& s) {
  if (s == "execute") return StepPhase::Execute;
  if (s == "posthoc") return StepPhase::PostHoc;
  if (s == "summarize") return StepPhase::Summarize;
  raise(Errc::SchemaError, "unknown step phase '" + s + "'");
}

FailReason fail_reason_from_string(const std::string& s) {
  for (FailReason r : {FailReason::None, FailReason::StepLimit, FailReason::FormatExhausted,
                       FailReason::ToolRetriesExhausted, FailReason::TransportError,
                       FailReason::TranscriptExhausted}) {
    if (s == fail_reason_name(r)) return r;
  }
  raise(Errc::SchemaError, "unknown fail reason '" + s + "'");
}

std::optional<Partition> partition_from_string(const std::string& s) {
  if (s == "business") return Partition::Business;
  if (s == "graph") return Partition::GraphConstruction;
  if (s == "terminal") return Partition::Terminal;
  return std::nullopt;
}

}  // namespace

Trace trace_from_jsonl(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) raise(Errc::SchemaError, "trace line is not valid JSON: " + line);
    std::string type = j.value("type", "");
    if (type == "header") {
      trace.task_id = j.value("task_id", "");
      trace.strategy = j.value("strategy", "");
      trace.query = j.value("query", "");
      if (j.contains("plan")) {
        Plan p;
        p.analysis = j.at("plan").value("analysis", "");
        for (const Json& s : j.at("plan").at("steps")) p.steps.push_back(s.get<std::string>());
        trace.plan = p;
      }
    } else if (type == "step") {
      TraceStep s;
      s.index = j.value("index", 0);
      s.reasoning = j.value("reasoning", "");
      s.action = j.value("action", "");
      s.args = j.value("args", Json::object());
      s.observation = j.value("observation", "");
      if (j.contains("partition")) {
        s.partition = partition_from_string(j.at("partition").get<std::string>());
      }
      s.usage.prompt_tokens = j.at("usage").value("prompt", std::int64_t{0});
      s.usage.output_tokens = j.at("usage").value("output", std::int64_t{0});
      s.format_retries = j.value("format_retries", 0);
      s.tool_retries = j.value("tool_retries", 0);
      s.ok = j.value("ok", true);
      s.phase = phase_from_string(j.value("phase", "execute"));
      trace.steps.push_back(std::move(s));
    } else if (type == "result") {
      trace.status = j.value("status", "") == "success" ? TraceStatus::Success : TraceStatus::Failed;
      trace.fail_reason = fail_reason_from_string(j.value("fail_reason", "none"));
      if (j.contains("final_answer")) trace.final_answer = j.at("final_answer").get<std::string>();
      trace.usage.prompt_tokens = j.at("usage").value("prompt", std::int64_t{0});
      trace.usage.output_tokens = j.at("usage").value("output", std::int64_t{0});
      trace.preamble_usage.prompt_tokens = j.at("preamble_usage").value("prompt", std::int64_t{0});
      trace.preamble_usage.output_tokens = j.at("preamble_usage").value("output", std::int64_t{0});
      trace.has_business_call = j.value("has_business_call", false);
      if (j.contains("posthoc_from")) trace.posthoc_from = j.at("posthoc_from").get<std::size_t>();
    }
  }
  return trace;
}

}  // namespace flowforge
