// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "flowforge/executor.hpp"
#include "flowforge/text.hpp"

namespace flowforge {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::React: return "react";
    case Mode::PlanExecute: return "plan_execute";
    case Mode::EnhancedReact: return "enhanced_react";
    case Mode::ES: return "es";
  }
  return "unknown";
}

Mode mode_from_string(const std::string& s) {
  if (s == "react") return Mode::React;
  if (s == "plan_execute") return Mode::PlanExecute;
  if (s == "enhanced_react") return Mode::EnhancedReact;
  if (s == "es") return Mode::ES;
  raise(Errc::SchemaError, "unknown mode '" + s + "'");
}

std::string mode_label(const ExperimentConfig& config) {
  if (config.mode != Mode::ES) return mode_name(config.mode);
  return std::string("es-") + exec_strategy_name(config.es.exec_strategy) + "-" +
         build_strategy_name(config.es.build_strategy);
}

Json config_to_json(const ExperimentConfig& config) {
  Json j = Json::object();
  j["dataset"] = config.dataset.string();
  j["instance_filter"] = config.instance_filter;
  j["mode"] = mode_name(config.mode);
  j["es"] = Json{{"exec_strategy", exec_strategy_name(config.es.exec_strategy)},
                 {"build_strategy", build_strategy_name(config.es.build_strategy)},
                 {"n_rollouts", config.es.n_rollouts},
                 {"selection", selection_name(config.es.selection)},
                 {"seed", config.es.seed}};
  j["limits"] = Json{{"max_steps", config.limits.max_steps},
                     {"max_tool_retries", config.limits.max_tool_retries},
                     {"max_format_retries", config.limits.max_format_retries}};
  j["backend_kind"] = config.backend_kind;
  j["backend"] = Json{{"endpoint", config.backend.endpoint},
                      {"model", config.backend.model},
                      {"temperature", config.backend.temperature},
                      {"json_constraint", config.backend.json_constraint}};
  j["seed"] = config.seed;
  return j;
}

std::string config_hash(const ExperimentConfig& config) {
  // out_dir and jobs deliberately excluded: they do not change results.
  return fnv1a64_hex(config_to_json(config).dump());
}

// --- golden-derived scripted transcripts ---------------------------------------

namespace {

std::string action_json(const std::string& reasoning, const std::string& action,
                        const Json& action_input) {
  return Json{{"reasoning", reasoning}, {"action", action}, {"action_input", action_input}}.dump();
}

std::vector<std::string> plan_steps_for(const std::vector<std::string>& call_summaries) {
  // One plan step per action when that fits in five steps, else a generic
  // five-step plan. The runner feeds one action per step instruction and
  // drains the rest in its trailing loop, so steps <= actions + 1 must hold.
  std::size_t actions = call_summaries.size();
  std::vector<std::string> steps;
  if (actions + 1 <= 5) {
    for (std::size_t i = 0; i < actions; ++i) {
      steps.push_back("Step " + std::to_string(i + 1) + ": " + call_summaries[i]);
    }
    steps.push_back("Step " + std::to_string(actions + 1) + ": Return the computed result");
  } else {
    steps = {
        "Step 1: " + call_summaries.front(),
        "Step 2: Continue applying the required functions to the intermediate results",
        "Step 3: Iterate until the termination condition is met",
        "Step 4: Verify the computed value matches the expected output",
        "Step 5: Return the computed result",
    };
  }
  return steps;
}

}  // namespace

std::vector<std::string> golden_execute_transcript(const Instance& instance,
                                                   const WorkflowGraph& golden,
                                                   ExecStrategy strategy, int rollout_index) {
  ToolRegistry registry = registry_for(instance);
  ExecResult run = execute_graph(golden, registry, instance.examples.front().input);

  std::vector<std::string> out;
  std::vector<std::string> summaries;
  for (const CallRecord& call : run.log.calls) {
    summaries.push_back("Use " + call.tool + " to process the data");
  }
  if (strategy == ExecStrategy::PlanExecute) {
    out.push_back(Json{{"analysis", "Apply the instance's tools to the example input, then "
                                    "return the computed result."},
                       {"steps", plan_steps_for(summaries)}}
                      .dump());
  }
  int step_no = 0;
  for (const CallRecord& call : run.log.calls) {
    ++step_no;
    out.push_back(action_json("Rollout " + std::to_string(rollout_index + 1) + ", step " +
                                  std::to_string(step_no) + ": call " + call.tool + ".",
                              call.tool, argmap_to_json(call.args)));
  }
  out.push_back(action_json("The computed result matches the expected output.", kFinishTool,
                            Json{{"answer", run.answer}}));
  return out;
}

std::vector<std::string> golden_build_transcript(const WorkflowGraph& golden,
                                                 BuildStrategy strategy) {
  std::vector<std::pair<std::string, Json>> actions;
  for (const Node& n : golden.nodes()) {
    switch (n.kind) {
      case NodeKind::Start: {
        Json data = Json::object();
        for (const auto& [k, v] : n.initial_data) data[k] = to_json(v);
        actions.emplace_back("add_start_node", Json{{"initial_data", data}});
        break;
      }
      case NodeKind::FunctionCall: {
        Json keys = Json::object();
        for (const auto& [param, key] : n.input_keys) keys[param] = key;
        actions.emplace_back("add_function_node", Json{{"id", n.id},
                                                       {"function", n.function},
                                                       {"input_keys", keys},
                                                       {"output_key", n.output_key}});
        break;
      }
      case NodeKind::Condition:
        actions.emplace_back("add_condition_node",
                             Json{{"id", n.id}, {"condition_expr", n.condition_expr}});
        break;
      case NodeKind::End: {
        Json args = Json::object();
        if (n.result_key.has_value()) args["result_key"] = *n.result_key;
        actions.emplace_back("add_end_node", args);
        break;
      }
      case NodeKind::Llm:
        break;  // not constructible through the builder tools
    }
  }
  for (const Edge& e : golden.edges()) {
    Json args = Json{{"from", e.from}, {"to", e.to}};
    if (!e.label.empty()) args["label"] = e.label;
    actions.emplace_back("add_edge", args);
  }

  std::vector<std::string> out;
  if (strategy == BuildStrategy::PlanAndBuild) {
    std::vector<std::string> summaries;
    for (const auto& [tool, args] : actions) {
      (void)args;
      summaries.push_back("Call " + tool);
    }
    out.push_back(Json{{"analysis", "Recreate the executed control flow as a workflow graph: "
                                    "start node, one function node per call, condition nodes "
                                    "for loops and branches, then connect everything."},
                       {"steps", plan_steps_for(summaries)}}
                      .dump());
  }
  int n = 0;
  for (const auto& [tool, args] : actions) {
    ++n;
    out.push_back(action_json("Build step " + std::to_string(n) + ": " + tool + ".", tool, args));
  }
  out.push_back(action_json("All nodes and edges are in place; the graph mirrors the trace.",
                            kFinishTool, Json{{"answer", "Workflow graph complete."}}));
  return out;
}

std::unique_ptr<LlmBackend> make_case_backend(const ExperimentConfig& config,
                                              const Instance& instance,
                                              const WorkflowGraph* golden) {
  if (config.backend_kind == "http") {
    return std::make_unique<HttpBackend>(config.backend);
  }
  if (config.backend_kind != "scripted-golden") {
    raise(Errc::Precondition, "unknown backend kind '" + config.backend_kind + "'");
  }
  if (golden == nullptr) {
    raise(Errc::Precondition,
          "scripted-golden backend needs a golden workflow for instance '" + instance.id + "'");
  }

  std::vector<std::string> transcript;
  auto append = [&transcript](std::vector<std::string> part) {
    for (std::string& s : part) transcript.push_back(std::move(s));
  };

  switch (config.mode) {
    case Mode::React:
    case Mode::PlanExecute: {
      // Single stage: business calls, then inline graph construction, then
      // one finish carrying the business answer.
      ExecStrategy strategy =
          config.mode == Mode::React ? ExecStrategy::React : ExecStrategy::PlanExecute;
      std::vector<std::string> exec = golden_execute_transcript(instance, *golden, strategy, 0);
      std::vector<std::string> build =
          golden_build_transcript(*golden, BuildStrategy::React);
      std::string finish = exec.back();
      exec.pop_back();          // business finish moves to the very end
      build.pop_back();         // drop the build finish
      append(std::move(exec));
      append(std::move(build));
      transcript.push_back(std::move(finish));
      break;
    }
    case Mode::EnhancedReact: {
      // Business phase finishes first; the post-hoc phase rebuilds the graph.
      append(golden_execute_transcript(instance, *golden, ExecStrategy::React, 0));
      append(golden_build_transcript(*golden, BuildStrategy::React));
      break;
    }
    case Mode::ES: {
      for (int r = 0; r < config.es.n_rollouts; ++r) {
        append(golden_execute_transcript(instance, *golden, config.es.exec_strategy, r));
      }
      append(golden_build_transcript(*golden, config.es.build_strategy));
      break;
    }
  }
  return std::make_unique<ScriptedBackend>(std::move(transcript));
}

// --- case evaluation -------------------------------------------------------------

CaseResult evaluate_case(const Instance& instance, const std::string& mode,
                         const CaseOutputs& outputs, const ToolRegistry& registry) {
  CaseResult result;
  result.instance_id = instance.id;
  result.mode = mode;
  result.graph_produced = outputs.graph.has_value();
  if (outputs.graph.has_value()) {
    result.graph_valid = validate(*outputs.graph, registry.names(Partition::Business)).valid();
  }

  std::vector<std::pair<ArgMap, std::string>> tests;
  for (const HeldOutTest& t : instance.tests) tests.emplace_back(t.input, t.golden);
  result.verdicts = run_blackbox(outputs.graph, registry, tests);

  result.exec_usage = outputs.exec_usage;
  result.summarize_usage = outputs.summarize_usage;

  MtiClass worst = MtiClass::Clean;
  auto consider = [&worst](MtiClass c) {
    auto rank = [](MtiClass m) {
      switch (m) {
        case MtiClass::Interleaved: return 3;
        case MtiClass::FrontLoaded: return 2;
        case MtiClass::Interrupted: return 1;
        case MtiClass::Clean: return 0;
      }
      return 0;
    };
    if (rank(c) > rank(worst)) worst = c;
  };

  for (const Trace& t : outputs.exec_traces) {
    if (exec_completeness(t)) result.exec_complete = true;
    result.total_steps += static_cast<int>(t.steps.size());
    for (const TraceStep& s : t.steps) {
      if (s.ok && s.partition == Partition::Business) ++result.business_steps;
    }
    if (t.fail_reason == FailReason::TransportError ||
        t.fail_reason == FailReason::TranscriptExhausted) {
      result.transport_abort = true;
    }
    consider(classify_mti(t));
    bool error_free = t.succeeded() && t.has_business_call;
    for (const TraceStep& s : t.steps) {
      if (!s.ok || s.format_retries > 0 || s.tool_retries > 0) error_free = false;
    }
    if (error_free) result.quality = TrajectoryQuality::CompleteErrorFree;
  }
  if (outputs.build_trace.has_value()) {
    result.total_steps += static_cast<int>(outputs.build_trace->steps.size());
    if (outputs.build_trace->fail_reason == FailReason::TransportError ||
        outputs.build_trace->fail_reason == FailReason::TranscriptExhausted) {
      result.transport_abort = true;
    }
  }
  result.mti = worst;

  if (!result.case_pass()) {
    result.failure = classify_failure(result);
  }
  return result;
}

// --- run directory plumbing -------------------------------------------------------

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::Precondition, "cannot write file: " + path.string());
  out << content;
}

std::string read_file_or_empty(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct CaseRun {
  CaseOutputs outputs;
  CaseResult result;
};

std::uint64_t instance_seed(std::uint64_t run_seed, const std::string& instance_id) {
  return fnv1a64(instance_id + ":" + std::to_string(run_seed));
}

CaseOutputs drive_case(const ExperimentConfig& config, const Instance& instance,
                       const WorkflowGraph* golden) {
  std::unique_ptr<LlmBackend> backend = make_case_backend(config, instance, golden);
  ToolRegistry registry = registry_for(instance);
  TaskPrompt task{instance.id, task_prompt_text(instance)};

  CaseOutputs out;
  switch (config.mode) {
    case Mode::React: {
      SessionResult r = run_react(task, registry, *backend, config.limits,
                                  /*bind_graph_tools=*/true);
      out.exec_usage = r.trace.usage;
      out.exec_traces.push_back(std::move(r.trace));
      out.graph = std::move(r.graph);
      break;
    }
    case Mode::PlanExecute: {
      SessionResult r = run_plan_execute(task, registry, *backend, config.limits,
                                         /*bind_graph_tools=*/true);
      out.exec_usage = r.trace.usage;
      out.exec_traces.push_back(std::move(r.trace));
      out.graph = std::move(r.graph);
      break;
    }
    case Mode::EnhancedReact: {
      SessionResult r = run_enhanced_react(task, registry, *backend, config.limits);
      out.exec_usage = r.trace.usage;
      out.exec_traces.push_back(std::move(r.trace));
      out.graph = std::move(r.graph);
      break;
    }
    case Mode::ES: {
      ESConfig es = config.es;
      es.seed = instance_seed(config.seed, instance.id);
      ESResult r = run_es(task, registry, *backend, es, config.limits);
      out.exec_traces = std::move(r.traces);
      out.build_trace = std::move(r.build_trace);
      out.graph = std::move(r.graph);
      out.selected = std::move(r.selected);
      out.skip_reason = std::move(r.skip_reason);
      out.exec_usage = r.exec_usage;
      out.summarize_usage = r.summarize_usage;
      break;
    }
  }
  return out;
}

void persist_case(const std::filesystem::path& case_dir, const ExperimentConfig& config,
                  const Instance& instance, const CaseRun& run, const std::string& hash) {
  std::filesystem::create_directories(case_dir);
  if (config.mode == Mode::ES) {
    for (std::size_t i = 0; i < run.outputs.exec_traces.size(); ++i) {
      write_file(case_dir / ("rollout_" + std::to_string(i) + ".trace.jsonl"),
                 trace_to_jsonl(run.outputs.exec_traces[i], hash));
    }
    Json meta = Json::object();
    meta["selected"] = run.outputs.selected;
    meta["skip_reason"] = run.outputs.skip_reason;
    write_file(case_dir / "es_meta.json", meta.dump(2) + "\n");
  } else if (!run.outputs.exec_traces.empty()) {
    write_file(case_dir / "session.trace.jsonl",
               trace_to_jsonl(run.outputs.exec_traces.front(), hash));
  }
  if (run.outputs.build_trace.has_value()) {
    write_file(case_dir / "build.trace.jsonl", trace_to_jsonl(*run.outputs.build_trace, hash));
  }
  if (run.outputs.graph.has_value()) {
    write_file(case_dir / "graph.json", serialize(*run.outputs.graph));
  }

  // Black-box run logs, one line per held-out test.
  if (run.outputs.graph.has_value()) {
    ToolRegistry registry = registry_for(instance);
    std::string lines;
    for (const HeldOutTest& t : instance.tests) {
      Json record = Json::object();
      record["input"] = argmap_to_json(t.input);
      try {
        ExecResult er = execute_graph(*run.outputs.graph, registry, t.input);
        record["answer"] = er.answer;
        record["runlog"] = runlog_to_json(er.log);
      } catch (const ExecError& e) {
        record["error"] = e.what();
      }
      lines += record.dump() + "\n";
    }
    write_file(case_dir / "blackbox.runlog.jsonl", lines);
  }

  write_file(case_dir / "case_result.json", case_result_to_json(run.result).dump(2) + "\n");
  write_file(case_dir / "done.json", Json{{"config_hash", hash}}.dump() + "\n");
}

CaseResult empty_error_result(const Instance& instance, const std::string& mode,
                              const std::string& what) {
  CaseResult result;
  result.instance_id = instance.id;
  result.mode = mode;
  for (const HeldOutTest& t : instance.tests) {
    TestVerdict v;
    v.verdict = Verdict::Error;
    v.golden = canonical_text(Value::text(t.golden));
    v.reason = what;
    result.verdicts.push_back(std::move(v));
  }
  result.transport_abort = true;
  result.failure = FailureClass::EmptyError;
  return result;
}

std::string aggregate_reports(const ExperimentConfig& config,
                              const std::vector<CaseResult>& results, int expected_cases);

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config) {
  std::vector<Instance> instances = load_dataset(config.dataset);
  if (!config.instance_filter.empty()) {
    std::vector<Instance> kept;
    for (Instance& inst : instances) {
      for (const std::string& want : config.instance_filter) {
        if (inst.id == want) kept.push_back(std::move(inst));
      }
    }
    instances = std::move(kept);
  }
  std::sort(instances.begin(), instances.end(),
            [](const Instance& a, const Instance& b) { return a.id < b.id; });

  std::string hash = config_hash(config);
  std::string label = mode_label(config);
  std::filesystem::path cases_dir = config.out_dir / "cases";
  std::filesystem::create_directories(cases_dir);
  write_file(config.out_dir / "run_config.json",
             Json{{"config", config_to_json(config)},
                  {"config_hash", hash},
                  {"mode_label", label},
                  {"instances", static_cast<int>(instances.size())}}
                     .dump(2) +
                 "\n");

  std::vector<CaseResult> results(instances.size());
  std::atomic<int> errors{0};
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= instances.size()) return;
      const Instance& instance = instances[i];
      std::filesystem::path case_dir = cases_dir / instance.id;

      // Resume: a completed case under the same config hash is reused.
      Json done = Json::parse(read_file_or_empty(case_dir / "done.json"), nullptr, false);
      if (done.is_object() && done.value("config_hash", "") == hash) {
        Json stored =
            Json::parse(read_file_or_empty(case_dir / "case_result.json"), nullptr, false);
        if (stored.is_object()) {
          results[i] = case_result_from_json(stored);
          continue;
        }
      }

      try {
        std::optional<WorkflowGraph> golden = load_golden_graph(config.dataset, instance.id);
        CaseRun run;
        run.outputs =
            drive_case(config, instance, golden.has_value() ? &*golden : nullptr);
        run.result = evaluate_case(instance, label, run.outputs, registry_for(instance));
        persist_case(case_dir, config, instance, run, hash);
        results[i] = std::move(run.result);
      } catch (const std::exception& e) {
        // Per-case errors never abort the run.
        CaseRun run;
        run.result = empty_error_result(instance, label, e.what());
        persist_case(case_dir, config, instance, run, hash);
        results[i] = std::move(run.result);
        ++errors;
      }
    }
  };

  int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  aggregate_reports(config, results, static_cast<int>(instances.size()));

  RunSummary summary;
  summary.cases = static_cast<int>(results.size());
  summary.errors = errors.load();
  summary.dir = config.out_dir;
  return summary;
}

// --- reports -------------------------------------------------------------------

namespace {

std::string render_markdown_report(const std::string& label, const std::string& hash,
                                   const std::vector<CaseResult>& results, int expected_cases) {
  MetricsTable metrics = compute_metrics(results);
  std::string out = "# FlowForge run report\n\n";
  out += "- mode: " + label + "\n";
  out += "- config hash: " + hash + "\n";
  out += "- coverage: " + std::to_string(results.size()) + "/" + std::to_string(expected_cases) +
         " cases";
  if (static_cast<int>(results.size()) < expected_cases) out += " (partial)";
  out += "\n- tests: " + std::to_string(metrics.tests) + "\n\n";

  out += "## Pass rates\n\n" + metrics_markdown({{label, metrics}}) + "\n";

  std::map<FailureClass, int> failures;
  int failed = 0;
  for (const CaseResult& r : results) {
    if (r.failure.has_value()) {
      ++failures[*r.failure];
      ++failed;
    }
  }
  if (failed > 0) {
    out += "## Failure modes (" + std::to_string(failed) + " failed cases)\n\n" +
           failure_markdown({{label, failures}}) + "\n";
  }

  MtiBreakdown mti;
  mti.total = static_cast<int>(results.size());
  for (const CaseResult& r : results) {
    if (r.mti.has_value() && *r.mti != MtiClass::Clean) {
      ++mti.mti;
    } else {
      ++mti.clean;
    }
  }
  mti.rate_pct = pct(mti.mti, mti.total);
  out += "## Mixed tool invocation\n\n" + mti_markdown({{label, mti}}) + "\n";

  std::map<std::string, std::vector<CaseResult>> by_mode{{label, results}};
  out += "## Output tokens per case\n\n" + token_markdown(token_report(by_mode, {})) + "\n";
  return out;
}

std::string aggregate_reports(const ExperimentConfig& config,
                              const std::vector<CaseResult>& results, int expected_cases) {
  std::string label = mode_label(config);
  std::string hash = config_hash(config);
  MetricsTable metrics = compute_metrics(results);

  Json metrics_json = Json::object();
  metrics_json["mode"] = label;
  metrics_json["config_hash"] = hash;
  metrics_json["cases"] = metrics.cases;
  metrics_json["cases_passed"] = metrics.cases_passed;
  metrics_json["tests"] = metrics.tests;
  metrics_json["tests_passed"] = metrics.tests_passed;
  metrics_json["exec_complete"] = metrics.exec_complete;
  metrics_json["graph_valid"] = metrics.graph_valid;
  metrics_json["both_succ"] = metrics.both_succ;
  write_file(config.out_dir / "metrics.json", metrics_json.dump(2) + "\n");

  std::string md = render_markdown_report(label, hash, results, expected_cases);
  write_file(config.out_dir / "report.md", md);
  write_file(config.out_dir / "report.csv", metrics_csv({{label, metrics}}));
  return md;
}

}  // namespace

std::vector<CaseResult> load_case_results(const std::filesystem::path& run_dir) {
  std::vector<CaseResult> results;
  std::filesystem::path cases_dir = run_dir / "cases";
  if (!std::filesystem::exists(cases_dir)) return results;
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(cases_dir)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const std::filesystem::path& dir : dirs) {
    Json j = Json::parse(read_file_or_empty(dir / "case_result.json"), nullptr, false);
    if (j.is_object()) results.push_back(case_result_from_json(j));
  }
  return results;
}

std::string report(const std::filesystem::path& run_dir, const std::string& format) {
  std::vector<CaseResult> results = load_case_results(run_dir);
  if (results.empty()) raise(Errc::EmptyRun, "no case results under " + run_dir.string());
  Json cfg = Json::parse(read_file_or_empty(run_dir / "run_config.json"), nullptr, false);
  std::string label = cfg.is_object() ? cfg.value("mode_label", "run") : "run";
  std::string hash = cfg.is_object() ? cfg.value("config_hash", "") : "";
  int expected = cfg.is_object() ? cfg.value("instances", static_cast<int>(results.size()))
                                 : static_cast<int>(results.size());
  if (format == "csv") {
    return metrics_csv({{label, compute_metrics(results)}});
  }
  if (format != "md") raise(Errc::Precondition, "unknown report format '" + format + "'");
  return render_markdown_report(label, hash, results, expected);
}

std::string matrix_report_markdown(const std::vector<std::filesystem::path>& run_dirs) {
  std::vector<std::pair<std::string, MetricsTable>> tables;
  std::map<std::string, std::vector<CaseResult>> by_mode;
  for (const std::filesystem::path& dir : run_dirs) {
    std::vector<CaseResult> results = load_case_results(dir);
    if (results.empty()) raise(Errc::EmptyRun, "no case results under " + dir.string());
    Json cfg = Json::parse(read_file_or_empty(dir / "run_config.json"), nullptr, false);
    std::string label = cfg.is_object() ? cfg.value("mode_label", dir.filename().string())
                                        : dir.filename().string();
    tables.emplace_back(label, compute_metrics(results));
    by_mode[label] = std::move(results);
  }

  // ES variants compare against the single-stage baseline sharing their
  // execution strategy, when that baseline is present.
  std::map<std::string, std::string> baseline_of;
  for (const auto& [label, results] : by_mode) {
    (void)results;
    if (label.rfind("es-react", 0) == 0 && by_mode.count("react") != 0) {
      baseline_of[label] = "react";
    } else if (label.rfind("es-plan_execute", 0) == 0 && by_mode.count("plan_execute") != 0) {
      baseline_of[label] = "plan_execute";
    }
  }

  std::string out = "# FlowForge matrix report\n\n## Pass rates\n\n";
  out += metrics_markdown(tables);
  out += "\n## Output tokens per case\n\n";
  out += token_markdown(token_report(by_mode, baseline_of));
  return out;
}

}  // namespace flowforge
