// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/evaluator.hpp"

#include <cmath>
#include <sstream>

#include "flowforge/text.hpp"

namespace flowforge {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Error: return "error";
  }
  return "unknown";
}

const char* mti_name(MtiClass c) {
  switch (c) {
    case MtiClass::Clean: return "clean";
    case MtiClass::Interleaved: return "interleaved";
    case MtiClass::Interrupted: return "interrupted";
    case MtiClass::FrontLoaded: return "front_loaded";
  }
  return "unknown";
}

const char* failure_name(FailureClass c) {
  switch (c) {
    case FailureClass::ExecOnlyNoGraph: return "exec_only_no_graph";
    case FailureClass::GraphOnlyNoExec: return "graph_only_no_exec";
    case FailureClass::BothPartialFailed: return "both_partial_failed";
    case FailureClass::EmptyError: return "empty_error";
  }
  return "unknown";
}

bool CaseResult::case_pass() const {
  if (verdicts.empty()) return false;
  for (const TestVerdict& v : verdicts) {
    if (v.verdict != Verdict::Pass) return false;
  }
  return true;
}

int CaseResult::tests_passed() const {
  int n = 0;
  for (const TestVerdict& v : verdicts) {
    if (v.verdict == Verdict::Pass) ++n;
  }
  return n;
}

double CaseResult::test_pass_rate() const {
  if (verdicts.empty()) return 0.0;
  return static_cast<double>(tests_passed()) / static_cast<double>(verdicts.size());
}

std::vector<TestVerdict> run_blackbox(const std::optional<WorkflowGraph>& graph,
                                      const ToolRegistry& registry,
                                      const std::vector<std::pair<ArgMap, std::string>>& tests,
                                      const ExecLimits& limits) {
  if (tests.empty()) raise(Errc::Precondition, "black-box evaluation needs at least one test");
  std::vector<TestVerdict> out;
  out.reserve(tests.size());
  for (const auto& [input, golden] : tests) {
    TestVerdict v;
    v.golden = canonical_text(Value::text(golden));
    if (!graph.has_value()) {
      v.verdict = Verdict::Fail;
      v.reason = kNoGraphReason;
      out.push_back(std::move(v));
      continue;
    }
    try {
      ExecResult result = execute_graph(*graph, registry, input, limits);
      v.answer = result.answer;
      if (v.answer == v.golden) {
        v.verdict = Verdict::Pass;
      } else {
        v.verdict = Verdict::Fail;
        v.reason = "expected '" + v.golden + "', got '" + v.answer + "'";
      }
    } catch (const ExecError& e) {
      v.verdict = Verdict::Error;
      v.reason = e.what();
    }
    out.push_back(std::move(v));
  }
  return out;
}

bool exec_completeness(const Trace& trace) {
  if (!trace.succeeded()) return false;
  if (!trace.has_business_call) return false;
  return trace.final_answer.has_value() && !trace.final_answer->empty();
}

namespace {

// Whether a Terminal step with a non-empty answer appears before step `limit`.
bool business_finish_before(const Trace& trace, std::size_t limit) {
  for (std::size_t i = 0; i < limit && i < trace.steps.size(); ++i) {
    const TraceStep& s = trace.steps[i];
    if (s.partition == Partition::Terminal && !s.observation.empty()) return true;
  }
  return false;
}

}  // namespace

MtiClass classify_mti(const Trace& trace) {
  // Projection: indices of steps tagged B or G, Terminal and unknown dropped.
  std::vector<std::pair<std::size_t, Partition>> tagged;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& part = trace.steps[i].partition;
    if (part == Partition::Business || part == Partition::GraphConstruction) {
      tagged.emplace_back(i, *part);
    }
  }
  if (tagged.empty()) return MtiClass::Clean;

  bool has_b = false;
  bool has_g = false;
  for (const auto& [idx, p] : tagged) {
    (void)idx;
    if (p == Partition::Business) has_b = true;
    if (p == Partition::GraphConstruction) has_g = true;
  }
  if (!has_b || !has_g) return MtiClass::Clean;

  // Interleaved: some G strictly between two B steps.
  std::size_t first_b = tagged.size();
  std::size_t last_b = 0;
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    if (tagged[i].second == Partition::Business) {
      first_b = std::min(first_b, i);
      last_b = std::max(last_b, i);
    }
  }
  for (std::size_t i = first_b; i <= last_b && i < tagged.size(); ++i) {
    if (tagged[i].second == Partition::GraphConstruction) return MtiClass::Interleaved;
  }

  // FrontLoaded: starts with G, business follows.
  if (tagged.front().second == Partition::GraphConstruction) return MtiClass::FrontLoaded;

  // Sequence is now B+ G+. Clean when the business block was closed by a
  // terminal finish before the first G step; Interrupted otherwise.
  std::size_t first_g_step = trace.steps.size();
  for (const auto& [idx, p] : tagged) {
    if (p == Partition::GraphConstruction) {
      first_g_step = idx;
      break;
    }
  }
  if (business_finish_before(trace, first_g_step)) return MtiClass::Clean;
  return MtiClass::Interrupted;
}

MtiBreakdown mti_rate(const std::vector<Trace>& traces) {
  MtiBreakdown b;
  b.total = static_cast<int>(traces.size());
  for (const Trace& t : traces) {
    if (classify_mti(t) == MtiClass::Clean) {
      ++b.clean;
    } else {
      ++b.mti;
    }
  }
  b.rate_pct = pct(b.mti, b.total);
  return b;
}

MtiBreakdown mti_breakdown_from_counts(int total, int mti) {
  MtiBreakdown b;
  b.total = total;
  b.mti = mti;
  b.clean = total - mti;
  b.rate_pct = pct(mti, total);
  return b;
}

FailureClass classify_failure(const CaseResult& result) {
  if (result.case_pass()) {
    raise(Errc::CalledOnPassingCase, "classify_failure called on a passing case");
  }
  if (result.exec_complete && !result.graph_produced) return FailureClass::ExecOnlyNoGraph;
  if (result.graph_produced && result.business_steps == 0) return FailureClass::GraphOnlyNoExec;
  if (result.total_steps == 0 || result.transport_abort) return FailureClass::EmptyError;
  return FailureClass::BothPartialFailed;
}

double pct(int numerator, int denominator) {
  if (denominator == 0) return 0.0;
  return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::string format_rate(double value_pct, int decimals) {
  double scale = std::pow(10.0, decimals);
  double rounded = static_cast<double>(std::llround(value_pct * scale)) / scale;
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(decimals);
  out << rounded;
  return out.str();
}

MetricsTable compute_metrics(const std::vector<CaseResult>& results) {
  if (results.empty()) raise(Errc::Precondition, "compute_metrics needs at least one case");
  MetricsTable t;
  t.cases = static_cast<int>(results.size());
  for (const CaseResult& r : results) {
    t.tests += static_cast<int>(r.verdicts.size());
    t.tests_passed += r.tests_passed();
    if (r.case_pass()) ++t.cases_passed;
    if (r.exec_complete) ++t.exec_complete;
    if (r.graph_valid) ++t.graph_valid;
    if (r.exec_complete && r.graph_valid) ++t.both_succ;
  }
  return t;
}

double MetricsTable::crate_pct() const { return pct(cases_passed, cases); }
double MetricsTable::trate_pct() const { return pct(tests_passed, tests); }
double MetricsTable::exec_compl_pct() const { return pct(exec_complete, cases); }
double MetricsTable::graph_valid_pct() const { return pct(graph_valid, cases); }
double MetricsTable::both_succ_pct() const { return pct(both_succ, cases); }

namespace {

ConditionCell make_cell(const std::vector<const CaseResult*>& members) {
  ConditionCell cell;
  cell.cases = static_cast<int>(members.size());
  if (members.empty()) return cell;
  double rate_sum = 0.0;
  int tests = 0;
  int passed = 0;
  for (const CaseResult* r : members) {
    rate_sum += r->test_pass_rate();
    tests += static_cast<int>(r->verdicts.size());
    passed += r->tests_passed();
  }
  cell.mean_case_rate_pct = 100.0 * rate_sum / static_cast<double>(members.size());
  cell.pooled_rate_pct = pct(passed, tests);
  return cell;
}

}  // namespace

ConditionedRates condition_on_execution(const std::vector<CaseResult>& results) {
  std::vector<const CaseResult*> exec_ok, exec_bad, q_good, q_bad;
  std::vector<const CaseResult*> quadrant[2][2];
  for (const CaseResult& r : results) {
    (r.exec_complete ? exec_ok : exec_bad).push_back(&r);
    (r.quality == TrajectoryQuality::CompleteErrorFree ? q_good : q_bad).push_back(&r);
    quadrant[r.exec_complete ? 1 : 0][r.graph_valid ? 1 : 0].push_back(&r);
  }
  ConditionedRates out;
  out.exec_success = make_cell(exec_ok);
  out.exec_failure = make_cell(exec_bad);
  out.complete_error_free = make_cell(q_good);
  out.incomplete_or_erroneous = make_cell(q_bad);
  for (int e = 0; e < 2; ++e) {
    for (int g = 0; g < 2; ++g) out.quadrant[e][g] = make_cell(quadrant[e][g]);
  }
  return out;
}

double token_delta_pct(double total, double baseline) {
  if (baseline == 0.0) raise(Errc::Precondition, "baseline token total must be non-zero");
  return 100.0 * (total - baseline) / baseline;
}

std::vector<TokenRow> token_report(const std::map<std::string, std::vector<CaseResult>>& by_mode,
                                   const std::map<std::string, std::string>& baseline_of) {
  for (const auto& [mode, baseline] : baseline_of) {
    (void)mode;
    if (by_mode.count(baseline) == 0) {
      raise(Errc::UnknownBaseline, "baseline mode '" + baseline + "' has no recorded cases");
    }
  }
  std::vector<TokenRow> rows;
  for (const auto& [mode, results] : by_mode) {
    TokenRow row;
    row.mode = mode;
    if (results.empty()) {
      rows.push_back(row);
      continue;
    }
    double exec = 0.0;
    double summarize = 0.0;
    bool any_summarize = false;
    for (const CaseResult& r : results) {
      exec += static_cast<double>(r.exec_usage.output_tokens);
      summarize += static_cast<double>(r.summarize_usage.output_tokens);
      if (r.summarize_usage.output_tokens > 0) any_summarize = true;
    }
    double n = static_cast<double>(results.size());
    row.exec_mean = exec / n;
    if (any_summarize) row.sum_mean = summarize / n;
    row.total_mean = row.exec_mean + (row.sum_mean.value_or(0.0));
    rows.push_back(row);
  }
  for (TokenRow& row : rows) {
    auto it = baseline_of.find(row.mode);
    if (it == baseline_of.end()) continue;
    for (const TokenRow& base : rows) {
      if (base.mode == it->second) {
        row.delta_pct = token_delta_pct(row.total_mean, base.total_mean);
      }
    }
  }
  return rows;
}

// --- emitters -----------------------------------------------------------------

std::string metrics_markdown(const std::vector<std::pair<std::string, MetricsTable>>& by_mode) {
  std::string out =
      "| Mode | CRate | TRate | Exec. Compl. | Graph Valid. | Both Succ. |\n"
      "|------|-------|-------|--------------|--------------|------------|\n";
  for (const auto& [mode, t] : by_mode) {
    out += "| " + mode + " | " + format_rate(t.crate_pct(), 1) + " | " +
           format_rate(t.trate_pct(), 1) + " | " + format_rate(t.exec_compl_pct(), 2) + " | " +
           format_rate(t.graph_valid_pct(), 2) + " | " + format_rate(t.both_succ_pct(), 2) +
           " |\n";
  }
  return out;
}

std::string metrics_csv(const std::vector<std::pair<std::string, MetricsTable>>& by_mode) {
  std::string out =
      "mode,cases,cases_passed,tests,tests_passed,exec_complete,graph_valid,both_succ\n";
  for (const auto& [mode, t] : by_mode) {
    out += mode + "," + std::to_string(t.cases) + "," + std::to_string(t.cases_passed) + "," +
           std::to_string(t.tests) + "," + std::to_string(t.tests_passed) + "," +
           std::to_string(t.exec_complete) + "," + std::to_string(t.graph_valid) + "," +
           std::to_string(t.both_succ) + "\n";
  }
  return out;
}

std::string mti_markdown(const std::vector<std::pair<std::string, MtiBreakdown>>& by_mode) {
  std::string out =
      "| Strategy | Total | Clean | MTI | MTI Rate |\n"
      "|----------|-------|-------|-----|----------|\n";
  for (const auto& [mode, b] : by_mode) {
    out += "| " + mode + " | " + std::to_string(b.total) + " | " + std::to_string(b.clean) +
           " | " + std::to_string(b.mti) + " | " + format_rate(b.rate_pct, 1) + "% |\n";
  }
  return out;
}

std::string failure_markdown(
    const std::vector<std::pair<std::string, std::map<FailureClass, int>>>& by_mode) {
  std::string out =
      "| Mode | Failure Mode | Count | % |\n"
      "|------|--------------|-------|---|\n";
  for (const auto& [mode, counts] : by_mode) {
    int total = 0;
    for (const auto& [cls, n] : counts) {
      (void)cls;
      total += n;
    }
    for (FailureClass cls : {FailureClass::ExecOnlyNoGraph, FailureClass::GraphOnlyNoExec,
                             FailureClass::BothPartialFailed, FailureClass::EmptyError}) {
      auto it = counts.find(cls);
      int n = it == counts.end() ? 0 : it->second;
      out += "| " + mode + " | " + failure_name(cls) + " | " + std::to_string(n) + " | " +
             format_rate(pct(n, total), 1) + " |\n";
    }
  }
  return out;
}

std::string token_markdown(const std::vector<TokenRow>& rows) {
  std::string out =
      "| Mode | Exec. | Sum. | Total | Delta |\n"
      "|------|-------|------|-------|-------|\n";
  for (const TokenRow& r : rows) {
    out += "| " + r.mode + " | " + format_rate(r.exec_mean, 1) + " | " +
           (r.sum_mean.has_value() ? format_rate(*r.sum_mean, 1) : std::string("--")) + " | " +
           format_rate(r.total_mean, 1) + " | " +
           (r.delta_pct.has_value() ? format_rate(*r.delta_pct, 1) + "%" : std::string("--")) +
           " |\n";
  }
  return out;
}

// --- persistence ----------------------------------------------------------------

Json case_result_to_json(const CaseResult& r) {
  Json j = Json::object();
  j["instance_id"] = r.instance_id;
  j["mode"] = r.mode;
  Json verdicts = Json::array();
  for (const TestVerdict& v : r.verdicts) {
    verdicts.push_back(Json{{"verdict", verdict_name(v.verdict)},
                            {"answer", v.answer},
                            {"golden", v.golden},
                            {"reason", v.reason}});
  }
  j["verdicts"] = verdicts;
  j["exec_complete"] = r.exec_complete;
  j["graph_valid"] = r.graph_valid;
  j["graph_produced"] = r.graph_produced;
  if (r.mti.has_value()) j["mti"] = mti_name(*r.mti);
  if (r.failure.has_value()) j["failure"] = failure_name(*r.failure);
  j["quality"] = r.quality == TrajectoryQuality::CompleteErrorFree ? "complete_error_free"
                                                                   : "incomplete_or_erroneous";
  j["exec_usage"] = Json{{"prompt", r.exec_usage.prompt_tokens},
                         {"output", r.exec_usage.output_tokens}};
  j["summarize_usage"] = Json{{"prompt", r.summarize_usage.prompt_tokens},
                              {"output", r.summarize_usage.output_tokens}};
  j["total_steps"] = r.total_steps;
  j["business_steps"] = r.business_steps;
  j["transport_abort"] = r.transport_abort;
  return j;
}

namespace {

Verdict verdict_from_string(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "error") return Verdict::Error;
  raise(Errc::SchemaError, "unknown verdict '" + s + "'");
}

MtiClass mti_from_string(const std::string& s) {
  for (MtiClass c : {MtiClass::Clean, MtiClass::Interleaved, MtiClass::Interrupted,
                     MtiClass::FrontLoaded}) {
    if (s == mti_name(c)) return c;
  }
  raise(Errc::SchemaError, "unknown MTI class '" + s + "'");
}

FailureClass failure_from_string(const std::string& s) {
  for (FailureClass c : {FailureClass::ExecOnlyNoGraph, FailureClass::GraphOnlyNoExec,
                         FailureClass::BothPartialFailed, FailureClass::EmptyError}) {
    if (s == failure_name(c)) return c;
  }
  raise(Errc::SchemaError, "unknown failure class '" + s + "'");
}

}  // namespace

CaseResult case_result_from_json(const Json& j) {
  CaseResult r;
  r.instance_id = j.value("instance_id", "");
  r.mode = j.value("mode", "");
  for (const Json& v : j.value("verdicts", Json::array())) {
    TestVerdict tv;
    tv.verdict = verdict_from_string(v.value("verdict", "fail"));
    tv.answer = v.value("answer", "");
    tv.golden = v.value("golden", "");
    tv.reason = v.value("reason", "");
    r.verdicts.push_back(std::move(tv));
  }
  r.exec_complete = j.value("exec_complete", false);
  r.graph_valid = j.value("graph_valid", false);
  r.graph_produced = j.value("graph_produced", false);
  if (j.contains("mti")) r.mti = mti_from_string(j.at("mti").get<std::string>());
  if (j.contains("failure")) r.failure = failure_from_string(j.at("failure").get<std::string>());
  r.quality = j.value("quality", "") == "complete_error_free"
                  ? TrajectoryQuality::CompleteErrorFree
                  : TrajectoryQuality::IncompleteOrErroneous;
  r.exec_usage.prompt_tokens = j.at("exec_usage").value("prompt", std::int64_t{0});
  r.exec_usage.output_tokens = j.at("exec_usage").value("output", std::int64_t{0});
  r.summarize_usage.prompt_tokens = j.at("summarize_usage").value("prompt", std::int64_t{0});
  r.summarize_usage.output_tokens = j.at("summarize_usage").value("output", std::int64_t{0});
  r.total_steps = j.value("total_steps", 0);
  r.business_steps = j.value("business_steps", 0);
  r.transport_abort = j.value("transport_abort", false);
  return r;
}

}  // namespace flowforge
