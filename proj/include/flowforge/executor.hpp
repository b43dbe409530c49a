// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "flowforge/graph.hpp"
#include "flowforge/tools.hpp"
#include "flowforge/value.hpp"

namespace flowforge {

struct ExecLimits {
  int max_visits = 1000;
  // The executor refuses structurally invalid graphs by default; tests can
  // drop the re-check to observe runtime errors on malformed graphs.
  bool revalidate = true;
};

struct CallRecord {
  std::string node;
  std::string tool;
  ArgMap args;
  Value result;
};

struct CondRecord {
  std::string node;
  std::string expr;
  bool outcome;
};

struct RunLog {
  std::vector<std::string> visited;  // node ids in visit order
  std::vector<CallRecord> calls;
  std::vector<CondRecord> conds;
  std::vector<std::string> write_log;  // output_key writes in order
  int iterations = 0;                  // max visit count of any single node
};

class ExecError : public Error {
 public:
  ExecError(Errc code, std::string node, const std::string& message)
      : Error(code, message), node_(std::move(node)) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

struct ExecResult {
  std::string answer;  // canonical text of the result value
  RunLog log;
};

// Deterministic traversal: seed the store with Start.initial_data overlaid
// by `input` (input wins), call tools at FunctionCall nodes, branch on
// Condition outcomes, answer at End.
ExecResult execute_graph(const WorkflowGraph& graph, const ToolRegistry& registry,
                         const ArgMap& input, const ExecLimits& limits = {});

Json runlog_to_json(const RunLog& log);

}  // namespace flowforge
