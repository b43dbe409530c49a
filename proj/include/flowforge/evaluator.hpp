// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flowforge/executor.hpp"
#include "flowforge/orchestrator.hpp"

namespace flowforge {

enum class Verdict { Pass, Fail, Error };

const char* verdict_name(Verdict v);

struct TestVerdict {
  Verdict verdict = Verdict::Fail;
  std::string answer;
  std::string golden;
  std::string reason;  // failure/error explanation
};

enum class MtiClass { Clean, Interleaved, Interrupted, FrontLoaded };
enum class FailureClass { ExecOnlyNoGraph, GraphOnlyNoExec, BothPartialFailed, EmptyError };
enum class TrajectoryQuality { CompleteErrorFree, IncompleteOrErroneous };

const char* mti_name(MtiClass c);
const char* failure_name(FailureClass c);

struct CaseResult {
  std::string instance_id;
  std::string mode;
  std::vector<TestVerdict> verdicts;
  bool exec_complete = false;
  bool graph_valid = false;
  bool graph_produced = false;
  std::optional<MtiClass> mti;           // single-stage traces only
  std::optional<FailureClass> failure;   // failed cases only
  TrajectoryQuality quality = TrajectoryQuality::IncompleteOrErroneous;
  Usage exec_usage;
  Usage summarize_usage;
  // Trace-shape facts the failure classifier needs.
  int total_steps = 0;
  int business_steps = 0;
  bool transport_abort = false;

  bool case_pass() const;
  int tests_passed() const;
  double test_pass_rate() const;  // fraction in [0, 1]
};

// Black-box: execute the graph on every held-out test independently and
// exact-match canonical answers. A missing graph fails every test with the
// standard reason; executor errors become error verdicts.
inline constexpr const char* kNoGraphReason = "No Graph available for validation";

std::vector<TestVerdict> run_blackbox(const std::optional<WorkflowGraph>& graph,
                                      const ToolRegistry& registry,
                                      const std::vector<std::pair<ArgMap, std::string>>& tests,
                                      const ExecLimits& limits = {});

// Success + at least one business call + an answered finish.
bool exec_completeness(const Trace& trace);

// Projects the step sequence onto B/G tags (Terminal dropped) and applies
// the precedence Interleaved > FrontLoaded > Interrupted > Clean.
MtiClass classify_mti(const Trace& trace);

struct MtiBreakdown {
  int total = 0;
  int clean = 0;
  int mti = 0;
  double rate_pct = 0.0;
};

MtiBreakdown mti_rate(const std::vector<Trace>& traces);
MtiBreakdown mti_breakdown_from_counts(int total, int mti);

FailureClass classify_failure(const CaseResult& result);  // throws CalledOnPassingCase

struct MetricsTable {
  int cases = 0;
  int tests = 0;
  int cases_passed = 0;
  int tests_passed = 0;
  int exec_complete = 0;
  int graph_valid = 0;
  int both_succ = 0;

  double crate_pct() const;
  double trate_pct() const;
  double exec_compl_pct() const;
  double graph_valid_pct() const;
  double both_succ_pct() const;
};

MetricsTable compute_metrics(const std::vector<CaseResult>& results);

double pct(int numerator, int denominator);
// Half-up (away from zero) at the table's printed precision, e.g.
// format_rate(pct(8, 141), 1) == "5.7".
std::string format_rate(double value_pct, int decimals);

struct ConditionCell {
  int cases = 0;
  double mean_case_rate_pct = 0.0;  // mean of per-case test pass rates
  double pooled_rate_pct = 0.0;     // pooled passed tests / all tests
};

struct ConditionedRates {
  ConditionCell exec_success;
  ConditionCell exec_failure;
  ConditionCell complete_error_free;
  ConditionCell incomplete_or_erroneous;
  // [execution success?][graph valid?]
  ConditionCell quadrant[2][2];
};

ConditionedRates condition_on_execution(const std::vector<CaseResult>& results);

struct TokenRow {
  std::string mode;
  double exec_mean = 0.0;
  std::optional<double> sum_mean;  // absent for single-stage modes
  double total_mean = 0.0;
  std::optional<double> delta_pct;  // vs the named baseline mode
};

double token_delta_pct(double total, double baseline);
std::vector<TokenRow> token_report(const std::map<std::string, std::vector<CaseResult>>& by_mode,
                                   const std::map<std::string, std::string>& baseline_of);

// Report emitters.
std::string metrics_markdown(const std::vector<std::pair<std::string, MetricsTable>>& by_mode);
std::string metrics_csv(const std::vector<std::pair<std::string, MetricsTable>>& by_mode);
std::string mti_markdown(const std::vector<std::pair<std::string, MtiBreakdown>>& by_mode);
std::string failure_markdown(
    const std::vector<std::pair<std::string, std::map<FailureClass, int>>>& by_mode);
std::string token_markdown(const std::vector<TokenRow>& rows);

Json case_result_to_json(const CaseResult& result);
CaseResult case_result_from_json(const Json& j);

}  // namespace flowforge
