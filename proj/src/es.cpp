// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/es.hpp"

#include <random>

#include "flowforge/prompts.hpp"
#include "flowforge/text.hpp"

namespace flowforge {

const char* exec_strategy_name(ExecStrategy s) {
  return s == ExecStrategy::React ? "react" : "plan_execute";
}

const char* build_strategy_name(BuildStrategy s) {
  return s == BuildStrategy::React ? "react" : "plan_and_build";
}

const char* selection_name(TraceSelection s) {
  switch (s) {
    case TraceSelection::All: return "all";
    case TraceSelection::AllSuccess: return "all_success";
    case TraceSelection::RandomSuccess: return "random_success";
  }
  return "unknown";
}

ExecStrategy exec_strategy_from_string(const std::string& s) {
  if (s == "react") return ExecStrategy::React;
  if (s == "plan_execute") return ExecStrategy::PlanExecute;
  raise(Errc::SchemaError, "unknown execution strategy '" + s + "'");
}

BuildStrategy build_strategy_from_string(const std::string& s) {
  if (s == "react") return BuildStrategy::React;
  if (s == "plan_and_build") return BuildStrategy::PlanAndBuild;
  raise(Errc::SchemaError, "unknown build strategy '" + s + "'");
}

TraceSelection selection_from_string(const std::string& s) {
  if (s == "all") return TraceSelection::All;
  if (s == "all_success") return TraceSelection::AllSuccess;
  if (s == "random_success") return TraceSelection::RandomSuccess;
  raise(Errc::SchemaError, "unknown trace selection '" + s + "'");
}

std::vector<Trace> run_execute_stage(const TaskPrompt& task, const ToolRegistry& business_tools,
                                     LlmBackend& backend, ExecStrategy strategy, int n_rollouts,
                                     const SessionLimits& limits) {
  if (n_rollouts < 1) raise(Errc::Precondition, "n_rollouts must be >= 1");
  if (!business_tools.names(Partition::GraphConstruction).empty()) {
    raise(Errc::Precondition, "execute-stage tool set must not contain graph tools");
  }
  std::vector<Trace> traces;
  traces.reserve(static_cast<std::size_t>(n_rollouts));
  for (int i = 0; i < n_rollouts; ++i) {
    // Each rollout is a fresh conversation; failures are recorded, never
    // propagated.
    SessionResult result = strategy == ExecStrategy::React
                               ? run_react(task, business_tools, backend, limits)
                               : run_plan_execute(task, business_tools, backend, limits);
    traces.push_back(std::move(result.trace));
  }
  return traces;
}

std::vector<std::size_t> select_traces(const std::vector<Trace>& traces, TraceSelection selection,
                                       std::uint64_t seed) {
  std::vector<std::size_t> all;
  std::vector<std::size_t> successes;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    all.push_back(i);
    if (traces[i].succeeded()) successes.push_back(i);
  }
  switch (selection) {
    case TraceSelection::All:
      return all;
    case TraceSelection::AllSuccess:
      return successes;
    case TraceSelection::RandomSuccess: {
      if (successes.empty()) return {};
      std::mt19937_64 rng(seed);
      return {successes[rng() % successes.size()]};
    }
  }
  return {};
}

std::string format_trace_input(const std::vector<Trace>& traces,
                               const std::vector<std::size_t>& selected) {
  if (selected.empty()) {
    raise(Errc::NoTracesToSummarize, "no traces selected for summarization");
  }
  std::string out = "## Execution Trace(s) to Convert\n";
  int n = 0;
  for (std::size_t idx : selected) {
    const Trace& t = traces.at(idx);
    ++n;
    out += "\n### Execution " + std::to_string(n) + ": " + t.task_id + "\n";
    out += "**Query**: " + t.query + "\n";
    out += std::string("**Status**: ") + (t.succeeded() ? "Success" : "Failed") + "\n";
    out += "**Final Answer**: " + t.final_answer.value_or("") + "\n";
    out += "\n**Function Calls**:\n";
    int step_no = 0;
    for (const TraceStep& s : t.steps) {
      if (!s.ok || s.partition != Partition::Business) continue;
      ++step_no;
      out += "- " + step_context_line(step_no, s) + "\n";
    }
  }
  out += "\n---\n";
  out += "Now build a workflow graph that represents this execution.\n";
  out += "Start by adding the start node, then add function nodes for each step.\n";
  out += "Respond with JSON only.";
  return out;
}

namespace {

// Planning call for Plan-and-Build, in its own conversation.
std::optional<Plan> plan_graph_build(const std::string& trace_text, const std::string& tools_prompt,
                                     LlmBackend& backend, const SessionLimits& limits,
                                     Trace& trace) {
  std::vector<ChatMessage> messages{{Role::System, prompts::graph_plan_system(tools_prompt)},
                                    {Role::User, trace_text}};
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
    return decode_plan_with_recovery(
        raw, [&ask](const std::string& msg) { return ask(msg); }, limits.max_format_retries);
  } catch (const Error& e) {
    trace.status = TraceStatus::Failed;
    trace.fail_reason = e.code() == Errc::TranscriptExhausted ? FailReason::TranscriptExhausted
                        : e.code() == Errc::FormatExhausted   ? FailReason::FormatExhausted
                                                              : FailReason::TransportError;
    return std::nullopt;
  }
}

}  // namespace

std::pair<std::optional<WorkflowGraph>, Trace> run_summarize_stage(const std::string& trace_text,
                                                                   LlmBackend& backend,
                                                                   BuildStrategy strategy,
                                                                   const SessionLimits& limits) {
  // The tool set is graph tools + finish by construction; no business tool
  // can reach this session.
  WorkflowGraph graph;
  ToolRegistry tools;
  register_graph_tools(tools, graph);
  std::string tools_prompt = tools.render_signatures({Partition::GraphConstruction,
                                                      Partition::Terminal});

  AgentSession session(backend, std::move(tools), limits, &graph);
  session.set_phase(StepPhase::Summarize);
  session.trace().strategy =
      std::string("graph_") + (strategy == BuildStrategy::React ? "react" : "plan_and_build");
  session.trace().query = trace_text;

  if (strategy == BuildStrategy::React) {
    session.set_system(prompts::graph_build_system(tools_prompt));
    session.run_loop(trace_text);
  } else {
    std::optional<Plan> plan =
        plan_graph_build(trace_text, tools_prompt, backend, limits, session.trace());
    if (!plan.has_value()) {
      return {std::nullopt, std::move(session.trace())};
    }
    session.trace().plan = plan;
    session.set_system(prompts::graph_exec_system(tools_prompt));
    std::string context = trace_text + "\n\n## Construction Plan\n**Analysis**: " +
                          plan->analysis + "\n\n**Steps**:\n";
    for (std::size_t i = 0; i < plan->steps.size(); ++i) {
      context += std::to_string(i + 1) + ". " + plan->steps[i] + "\n";
    }
    session.seed_user_context(context);
    std::vector<std::string> accumulated;
    for (std::size_t i = 0; i < plan->steps.size() && !session.finished(); ++i) {
      session.set_next_user(prompts::step_instruction(
          static_cast<int>(i + 1), plan->steps[i],
          accumulated.empty() ? "(none)" : join(accumulated, "\n")));
      while (!session.finished()) {
        if (session.guard_step_limit()) break;
        AgentSession::StepOutcome outcome = session.attempt();
        if (outcome == AgentSession::StepOutcome::ToolOk) {
          accumulated.push_back(step_context_line(static_cast<int>(accumulated.size()) + 1,
                                                  session.trace().steps.back()));
          break;
        }
        if (outcome == AgentSession::StepOutcome::Finished) break;
      }
    }
    while (!session.finished()) {
      if (session.guard_step_limit()) break;
      session.attempt();
    }
  }

  Trace trace = std::move(session.trace());
  if (!trace.succeeded() || graph.empty()) {
    return {std::nullopt, std::move(trace)};
  }
  return {std::move(graph), std::move(trace)};
}

ESResult run_es(const TaskPrompt& task, const ToolRegistry& business_tools, LlmBackend& backend,
                const ESConfig& config, const SessionLimits& limits) {
  ESResult result;
  ToolRegistry exec_tools = business_tools.filtered({Partition::Business});
  result.traces =
      run_execute_stage(task, exec_tools, backend, config.exec_strategy, config.n_rollouts, limits);
  for (const Trace& t : result.traces) result.exec_usage += t.usage;

  result.selected = select_traces(result.traces, config.selection, config.seed);
  if (result.selected.empty()) {
    result.skip_reason = "no traces to summarize under selection '" +
                         std::string(selection_name(config.selection)) + "'";
    return result;
  }

  std::string trace_text = format_trace_input(result.traces, result.selected);
  auto [graph, build_trace] =
      run_summarize_stage(trace_text, backend, config.build_strategy, limits);
  result.summarize_usage = build_trace.usage;
  result.graph = std::move(graph);
  result.build_trace = std::move(build_trace);
  return result;
}

}  // namespace flowforge
