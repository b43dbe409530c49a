// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowforge/orchestrator.hpp"

namespace flowforge {

enum class ExecStrategy { React, PlanExecute };
enum class BuildStrategy { React, PlanAndBuild };
enum class TraceSelection { All, AllSuccess, RandomSuccess };

const char* exec_strategy_name(ExecStrategy s);
const char* build_strategy_name(BuildStrategy s);
const char* selection_name(TraceSelection s);
ExecStrategy exec_strategy_from_string(const std::string& s);
BuildStrategy build_strategy_from_string(const std::string& s);
TraceSelection selection_from_string(const std::string& s);

struct ESConfig {
  ExecStrategy exec_strategy = ExecStrategy::PlanExecute;
  BuildStrategy build_strategy = BuildStrategy::PlanAndBuild;
  int n_rollouts = 3;
  TraceSelection selection = TraceSelection::RandomSuccess;
  std::uint64_t seed = 0;
};

struct ESResult {
  std::vector<Trace> traces;          // execution rollouts
  std::vector<std::size_t> selected;  // indices fed to summarization
  std::optional<WorkflowGraph> graph;
  std::optional<Trace> build_trace;  // absent when summarization never ran
  std::string skip_reason;           // why summarization was skipped, if it was
  Usage exec_usage;
  Usage summarize_usage;
};

// Independent execution rollouts over business tools only; no
// graph-construction tool is reachable from these sessions.
std::vector<Trace> run_execute_stage(const TaskPrompt& task, const ToolRegistry& business_tools,
                                     LlmBackend& backend, ExecStrategy strategy, int n_rollouts,
                                     const SessionLimits& limits);

std::vector<std::size_t> select_traces(const std::vector<Trace>& traces, TraceSelection selection,
                                       std::uint64_t seed);

// "## Execution Trace(s) to Convert" prompt; throws NoTracesToSummarize on
// an empty selection.
std::string format_trace_input(const std::vector<Trace>& traces,
                               const std::vector<std::size_t>& selected);

// Graph building over graph tools + finish only; strict tool partitioning is
// enforced by construction. Returns the graph as built at finish; failed
// sessions yield no graph.
std::pair<std::optional<WorkflowGraph>, Trace> run_summarize_stage(const std::string& trace_text,
                                                                   LlmBackend& backend,
                                                                   BuildStrategy strategy,
                                                                   const SessionLimits& limits);

ESResult run_es(const TaskPrompt& task, const ToolRegistry& business_tools, LlmBackend& backend,
                const ESConfig& config, const SessionLimits& limits);

}  // namespace flowforge
