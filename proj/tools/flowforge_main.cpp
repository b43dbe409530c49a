// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0
//
// flowforge CLI: run experiments, re-evaluate stored graphs, compare graphs
// against goldens, emit reports, and pretty-print traces.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "flowforge/executor.hpp"
#include "flowforge/experiment.hpp"
#include "flowforge/whitebox.hpp"

namespace ff = flowforge;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ff::Error(ff::Errc::Precondition, "cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int cmd_run(const ff::ExperimentConfig& config) {
  ff::RunSummary summary = ff::run_experiment(config);
  std::cout << "run complete: " << summary.cases << " cases, " << summary.errors
            << " errors, output in " << summary.dir.string() << "\n";
  std::cout << ff::report(summary.dir, "md");
  return summary.errors > 0 ? 1 : 0;
}

int cmd_eval(const std::filesystem::path& run_dir, const std::filesystem::path& dataset) {
  std::vector<ff::Instance> instances = ff::load_dataset(dataset);
  int evaluated = 0;
  int passed = 0;
  for (const ff::Instance& instance : instances) {
    std::filesystem::path graph_path = run_dir / "cases" / instance.id / "graph.json";
    std::optional<ff::WorkflowGraph> graph;
    if (std::filesystem::exists(graph_path)) {
      graph = ff::deserialize(read_file(graph_path));
    }
    std::vector<std::pair<ff::ArgMap, std::string>> tests;
    for (const ff::HeldOutTest& t : instance.tests) tests.emplace_back(t.input, t.golden);
    auto verdicts = ff::run_blackbox(graph, ff::registry_for(instance), tests);
    int ok = 0;
    for (const auto& v : verdicts) {
      if (v.verdict == ff::Verdict::Pass) ++ok;
    }
    bool case_pass = ok == static_cast<int>(verdicts.size());
    if (case_pass) ++passed;
    ++evaluated;
    std::cout << instance.id << ": " << ok << "/" << verdicts.size() << " tests"
              << (case_pass ? " [pass]" : " [fail]") << "\n";
  }
  std::cout << "case pass rate: " << passed << "/" << evaluated << "\n";
  return 0;
}

int cmd_compare(const std::filesystem::path& golden_path,
                const std::filesystem::path& candidate_path) {
  ff::WorkflowGraph golden = ff::deserialize(read_file(golden_path));
  ff::WorkflowGraph candidate = ff::deserialize(read_file(candidate_path));

  ff::CongruenceScore score = ff::structural_congruence(golden, candidate);
  std::cout << "structural congruence:\n";
  std::cout << "  node overlap:     " << score.node_overlap << "\n";
  std::cout << "  edge overlap:     " << score.edge_overlap << "\n";
  std::cout << "  branch topology:  " << score.branch_topology_match << "\n";
  std::cout << "  aggregate (mean): " << score.aggregate() << "\n";

  ff::EquivResult equiv = ff::behavioral_equivalent(golden, candidate);
  std::cout << "behavioral equivalence: ";
  switch (equiv.verdict) {
    case ff::EquivVerdict::Equivalent: std::cout << "equivalent\n"; break;
    case ff::EquivVerdict::Undecided: std::cout << "undecided (bound exceeded)\n"; break;
    case ff::EquivVerdict::Different:
      std::cout << "different (" << equiv.detail << ")\n  witness:";
      for (const std::string& label : equiv.witness) std::cout << " " << label;
      std::cout << "\n";
      break;
  }

  ff::PathSets paths = ff::path_sufficiency(golden, candidate);
  std::cout << "path sufficiency: " << paths.covered.size() << " covered, "
            << paths.missing.size() << " missing, " << paths.spurious.size() << " spurious\n";
  for (const std::string& p : paths.missing) std::cout << "  missing:  " << p << "\n";
  for (const std::string& p : paths.spurious) std::cout << "  spurious: " << p << "\n";
  return 0;
}

int cmd_report(const std::vector<std::filesystem::path>& run_dirs, const std::string& format) {
  if (run_dirs.size() == 1) {
    std::cout << ff::report(run_dirs.front(), format);
  } else {
    std::cout << ff::matrix_report_markdown(run_dirs);
  }
  return 0;
}

int cmd_replay(const std::filesystem::path& trace_path) {
  ff::Trace trace = ff::trace_from_jsonl(read_file(trace_path));
  std::cout << "task: " << trace.task_id << "  strategy: " << trace.strategy << "\n";
  if (trace.plan.has_value()) {
    std::cout << "plan: " << trace.plan->analysis << "\n";
    for (const std::string& s : trace.plan->steps) std::cout << "  " << s << "\n";
  }
  for (const ff::TraceStep& s : trace.steps) {
    std::cout << "[" << s.index << "] " << (s.ok ? "" : "(failed) ")
              << ff::step_context_line(s.index + 1, s) << "\n";
  }
  std::cout << "status: " << (trace.succeeded() ? "success" : "failed");
  if (!trace.succeeded()) std::cout << " (" << ff::fail_reason_name(trace.fail_reason) << ")";
  if (trace.final_answer.has_value()) std::cout << "  answer: " << *trace.final_answer;
  std::cout << "\noutput tokens: " << trace.usage.output_tokens << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FlowForge: execute-summarize workflow synthesis and evaluation"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run an experiment over a dataset");
  ff::ExperimentConfig config;
  config.dataset = ff::bundled_dataset_dir();
  std::string mode = "es";
  std::string exec_strategy = "plan_execute";
  std::string build_strategy = "plan_and_build";
  std::string selection = "random_success";
  std::string json_constraint = "off";
  std::string backend = "scripted-golden";
  run->add_option("--dataset", config.dataset, "Dataset directory");
  run->add_option("--mode", mode, "react | plan_execute | enhanced_react | es");
  run->add_option("--exec-strategy", exec_strategy, "ES execution strategy: react | plan_execute");
  run->add_option("--build-strategy", build_strategy,
                  "ES summarize strategy: react | plan_and_build");
  run->add_option("--rollouts", config.es.n_rollouts, "ES execution rollouts per case");
  run->add_option("--selection", selection, "all | all_success | random_success");
  run->add_option("--seed", config.seed, "Top-level seed");
  run->add_option("--backend", backend, "scripted-golden | http");
  run->add_option("--endpoint", config.backend.endpoint, "Chat-completions endpoint URL");
  run->add_option("--model", config.backend.model, "Model name");
  run->add_option("--jobs", config.jobs, "Concurrent cases");
  run->add_option("--out", config.out_dir, "Output directory")->required();
  run->add_option("--json-constraint", json_constraint,
                  "on | off: send the structured-output response_format field");
  run->add_option("--instance", config.instance_filter, "Only run the named instances");
  run->add_option("--max-steps", config.limits.max_steps, "Session step limit");

  // eval
  auto* eval = app.add_subcommand("eval", "Re-run black-box evaluation on stored graphs");
  std::filesystem::path eval_run;
  std::filesystem::path eval_dataset = ff::bundled_dataset_dir();
  eval->add_option("--run", eval_run, "Run directory")->required();
  eval->add_option("--dataset", eval_dataset, "Dataset directory");

  // compare
  auto* compare = app.add_subcommand("compare", "White-box comparison of two workflow graphs");
  std::filesystem::path golden_path, candidate_path;
  compare->add_option("--golden", golden_path, "Golden graph document")->required();
  compare->add_option("--candidate", candidate_path, "Candidate graph document")->required();

  // report
  auto* rep = app.add_subcommand("report", "Emit a report from one or more run directories");
  std::vector<std::filesystem::path> report_runs;
  std::string format = "md";
  rep->add_option("--run", report_runs, "Run directory (repeatable)")->required();
  rep->add_option("--format", format, "md | csv");

  // replay
  auto* replay = app.add_subcommand("replay", "Pretty-print a trace file");
  std::filesystem::path trace_path;
  replay->add_option("--trace", trace_path, "Trace .trace.jsonl file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      config.mode = ff::mode_from_string(mode);
      config.es.exec_strategy = ff::exec_strategy_from_string(exec_strategy);
      config.es.build_strategy = ff::build_strategy_from_string(build_strategy);
      config.es.selection = ff::selection_from_string(selection);
      config.backend_kind = backend;
      config.backend.json_constraint = json_constraint == "on";
      if (json_constraint != "on" && json_constraint != "off") {
        throw ff::Error(ff::Errc::Precondition, "--json-constraint must be on or off");
      }
      return cmd_run(config);
    }
    if (eval->parsed()) return cmd_eval(eval_run, eval_dataset);
    if (compare->parsed()) return cmd_compare(golden_path, candidate_path);
    if (rep->parsed()) return cmd_report(report_runs, format);
    if (replay->parsed()) return cmd_replay(trace_path);
  } catch (const ff::Error& e) {
    std::cerr << "error [" << ff::errc_name(e.code()) << "]: " << e.what() << "\n";
    switch (e.code()) {
      case ff::Errc::SchemaError:
      case ff::Errc::Precondition:
      case ff::Errc::DuplicateInstanceId:
      case ff::Errc::EmptyRun:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
