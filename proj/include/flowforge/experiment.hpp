// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "flowforge/dataset.hpp"
#include "flowforge/es.hpp"
#include "flowforge/evaluator.hpp"

namespace flowforge {

enum class Mode { React, PlanExecute, EnhancedReact, ES };

const char* mode_name(Mode m);
Mode mode_from_string(const std::string& s);

struct ExperimentConfig {
  std::filesystem::path dataset;
  std::vector<std::string> instance_filter;  // empty = all instances
  Mode mode = Mode::ES;
  ESConfig es;
  SessionLimits limits;
  // "scripted-golden" replays transcripts derived from the bundled golden
  // workflows; "http" talks to a live endpoint.
  std::string backend_kind = "scripted-golden";
  BackendConfig backend;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
};

// Label used in reports; carries the stage strategies for ES runs.
std::string mode_label(const ExperimentConfig& config);

Json config_to_json(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

struct RunSummary {
  int cases = 0;
  int errors = 0;  // cases that failed to evaluate (recorded as EmptyError)
  std::filesystem::path dir;
};

// Per-instance case directories with traces, graph, run logs, and the
// CaseResult; aggregate metrics and reports at the top. Completed case
// directories with a matching config hash are skipped on rerun.
RunSummary run_experiment(const ExperimentConfig& config);

std::vector<CaseResult> load_case_results(const std::filesystem::path& run_dir);
std::string report(const std::filesystem::path& run_dir, const std::string& format);
std::string matrix_report_markdown(const std::vector<std::filesystem::path>& run_dirs);

// Scripted transcripts derived from a golden workflow: the action sequence
// an ideal agent would emit for the instance's first example.
std::vector<std::string> golden_execute_transcript(const Instance& instance,
                                                   const WorkflowGraph& golden,
                                                   ExecStrategy strategy, int rollout_index);
std::vector<std::string> golden_build_transcript(const WorkflowGraph& golden,
                                                 BuildStrategy strategy);
std::unique_ptr<LlmBackend> make_case_backend(const ExperimentConfig& config,
                                              const Instance& instance,
                                              const WorkflowGraph* golden);

// Evaluation of one finished case; exposed for tests that drive modes
// directly.
struct CaseOutputs {
  std::vector<Trace> exec_traces;
  std::optional<Trace> build_trace;
  std::optional<WorkflowGraph> graph;
  std::vector<std::size_t> selected;
  std::string skip_reason;
  Usage exec_usage;
  Usage summarize_usage;
};

CaseResult evaluate_case(const Instance& instance, const std::string& mode,
                         const CaseOutputs& outputs, const ToolRegistry& registry);

}  // namespace flowforge
