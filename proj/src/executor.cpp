// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/executor.hpp"

#include <algorithm>
#include <map>

#include "flowforge/cond_expr.hpp"

namespace flowforge {

namespace {

struct DataStore {
  std::map<std::string, Value> values;
  std::vector<std::string> write_log;

  const Value& read(const std::string& key, const std::string& node) const {
    auto it = values.find(key);
    if (it == values.end()) {
      throw ExecError(Errc::UnboundKey,
                      node, "node '" + node + "' reads key '" + key + "' which is not in the store");
    }
    return it->second;
  }

  void write(const std::string& key, Value v) {
    values[key] = std::move(v);
    write_log.push_back(key);
  }
};

const Edge* sole_successor(const WorkflowGraph& g, const Node& node) {
  std::vector<const Edge*> out = g.outgoing(node.id);
  if (out.empty()) {
    throw ExecError(Errc::AmbiguousSuccessor, node.id,
                    "node '" + node.id + "' has no outgoing edge to follow");
  }
  // Unlabeled edges only; recognized parallel shapes run in deterministic
  // edge-insertion order, so the first unlabeled edge wins.
  for (const Edge* e : out) {
    if (e->label.empty()) return e;
  }
  throw ExecError(Errc::AmbiguousSuccessor, node.id,
                  "node '" + node.id + "' has only labeled outgoing edges");
}

const Edge* branch_successor(const WorkflowGraph& g, const Node& node, bool outcome) {
  std::string wanted = outcome ? "true" : "false";
  for (const Edge* e : g.outgoing(node.id)) {
    if (e->label == wanted) return e;
  }
  throw ExecError(Errc::AmbiguousSuccessor, node.id,
                  "condition '" + node.id + "' has no outgoing edge labeled \"" + wanted + "\"");
}

}  // namespace

ExecResult execute_graph(const WorkflowGraph& graph, const ToolRegistry& registry,
                         const ArgMap& input, const ExecLimits& limits) {
  if (limits.revalidate) {
    ValidationReport report = validate(graph, registry.names(Partition::Business));
    if (!report.valid()) {
      std::string detail;
      for (const ValidationIssue& v : report.violations) {
        if (!detail.empty()) detail += "; ";
        detail += v.message;
      }
      throw ExecError(Errc::InvalidGraph, "", "graph failed validation: " + detail);
    }
  }

  const Node* start = graph.start_node();
  if (start == nullptr) {
    throw ExecError(Errc::InvalidGraph, "", "graph has no start node");
  }

  DataStore store;
  for (const auto& [k, v] : start->initial_data) store.values[k] = v;
  for (const auto& [k, v] : input) store.values[k] = v;  // input wins on collision

  RunLog log;
  std::map<std::string, int> visit_counts;
  std::map<std::string, expr::ExprPtr> expr_cache;

  const Node* current = start;
  while (true) {
    if (static_cast<int>(log.visited.size()) >= limits.max_visits) {
      throw ExecError(Errc::LoopCapExceeded, current->id,
                      "node visit cap of " + std::to_string(limits.max_visits) + " exceeded");
    }
    log.visited.push_back(current->id);
    int& count = visit_counts[current->id];
    ++count;
    log.iterations = std::max(log.iterations, count);

    switch (current->kind) {
      case NodeKind::Start: {
        current = graph.find_node(sole_successor(graph, *current)->to);
        break;
      }
      case NodeKind::FunctionCall: {
        ArgMap args;
        for (const auto& [param, key] : current->input_keys) {
          args[param] = store.read(key, current->id);
        }
        Value result;
        try {
          result = registry.execute(current->function, argmap_to_json(args));
        } catch (const ToolError& e) {
          throw ExecError(Errc::ToolError, current->id,
                          "tool '" + current->function + "' failed at node '" + current->id +
                              "': " + e.what());
        }
        store.write(current->output_key, result);
        log.calls.push_back({current->id, current->function, args, result});
        current = graph.find_node(sole_successor(graph, *current)->to);
        break;
      }
      case NodeKind::Condition: {
        auto it = expr_cache.find(current->id);
        if (it == expr_cache.end()) {
          try {
            it = expr_cache.emplace(current->id, expr::parse(current->condition_expr)).first;
          } catch (const expr::SyntaxError& e) {
            throw ExecError(Errc::ExprError, current->id,
                            "condition '" + current->id + "' does not parse: " + e.what());
          }
        }
        bool outcome;
        try {
          outcome = expr::eval(it->second, store.values);
        } catch (const Error& e) {
          throw ExecError(Errc::ExprError, current->id,
                          "condition '" + current->id + "' failed to evaluate: " + e.what());
        }
        log.conds.push_back({current->id, current->condition_expr, outcome});
        current = graph.find_node(branch_successor(graph, *current, outcome)->to);
        break;
      }
      case NodeKind::Llm:
        throw ExecError(Errc::LlmNodeUnsupported, current->id,
                        "node '" + current->id + "' has kind LLM, which the executor does not run");
      case NodeKind::End: {
        std::string key;
        if (current->result_key.has_value()) {
          key = *current->result_key;
        } else {
          // Sentinel: the last written output_key.
          if (store.write_log.empty()) {
            throw ExecError(Errc::UnboundKey, current->id,
                            "end node has no result_key and nothing was written to the store");
          }
          key = store.write_log.back();
        }
        const Value& result = store.read(key, current->id);
        log.write_log = store.write_log;
        return {canonical_text(result), std::move(log)};
      }
    }
  }
}

Json runlog_to_json(const RunLog& log) {
  Json j = Json::object();
  j["visited"] = log.visited;
  j["iterations"] = log.iterations;
  j["write_log"] = log.write_log;
  Json calls = Json::array();
  for (const CallRecord& c : log.calls) {
    calls.push_back(Json{{"node", c.node},
                         {"tool", c.tool},
                         {"args", argmap_to_json(c.args)},
                         {"result", to_json(c.result)}});
  }
  j["calls"] = calls;
  Json conds = Json::array();
  for (const CondRecord& c : log.conds) {
    conds.push_back(Json{{"node", c.node}, {"expr", c.expr}, {"outcome", c.outcome}});
  }
  j["conds"] = conds;
  return j;
}

}  // namespace flowforge
