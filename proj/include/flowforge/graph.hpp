// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flowforge/errors.hpp"
#include "flowforge/value.hpp"

namespace flowforge {

enum class NodeKind { Start, End, FunctionCall, Condition, Llm };

std::string kind_to_string(NodeKind kind);   // "start", "end", "function_call", ...
NodeKind kind_from_string(const std::string& s);
std::string kind_state_label(NodeKind kind); // START / END / BUSINESS / CONDITION / LLM

inline constexpr const char* kStartId = "__start__";
inline constexpr const char* kEndId = "__end__";

struct Node {
  std::string id;
  NodeKind kind = NodeKind::FunctionCall;
  // FunctionCall
  std::string function;
  std::map<std::string, std::string> input_keys;  // param name -> data-store key
  std::string output_key;
  // Condition
  std::string condition_expr;
  // Start
  std::map<std::string, Value> initial_data;
  // End; absent means "last written output_key" sentinel
  std::optional<std::string> result_key;
};

struct Edge {
  std::string from;
  std::string to;
  std::string label;  // "" = unlabeled; Condition branches use "true"/"false"

  bool operator==(const Edge& other) const {
    return from == other.from && to == other.to && label == other.label;
  }
};

enum class Violation {
  MissingStart,
  MissingEnd,
  DisconnectedNode,
  DeadEndNode,
  UnboundInput,
  DuplicateId,
  BadBranchLabels,
};

const char* violation_name(Violation v);

struct ValidationIssue {
  Violation code;
  std::string subject;  // node or edge identifier
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> violations;

  bool valid() const { return violations.empty(); }
  bool has(Violation code) const;
};

// Append-only workflow graph. Nodes and edges never get removed; the builder
// operations below are the only mutation surface.
class WorkflowGraph {
 public:
  std::string add_start_node(std::map<std::string, Value> initial_data);
  std::string add_function_node(const std::string& id, const std::string& function,
                                std::map<std::string, std::string> input_keys,
                                const std::string& output_key);
  std::string add_condition_node(const std::string& id, const std::string& condition_expr);
  void add_edge(const std::string& from, const std::string& to, const std::string& label = "");
  std::string add_end_node(std::optional<std::string> result_key = std::nullopt);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool empty() const { return nodes_.empty() && edges_.empty(); }

  const Node* find_node(const std::string& id) const;
  const Node* start_node() const;
  const Node* end_node() const;
  std::vector<const Edge*> outgoing(const std::string& id) const;
  std::vector<const Edge*> incoming(const std::string& id) const;

  bool operator==(const WorkflowGraph& other) const;

  // Deserialization entry point; bypasses builder checks so documents with
  // duplicate ids can still be loaded and then flagged by validate().
  static WorkflowGraph from_parts(std::vector<Node> nodes, std::vector<Edge> edges);

 private:
  void require_new_id(const std::string& id) const;

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

ValidationReport validate(const WorkflowGraph& g);
ValidationReport validate(const WorkflowGraph& g, const std::set<std::string>& known_tools);

// "Nodes (k): ... Edges (m): ... Missing Elements: ..." observation block.
std::string render_state(const WorkflowGraph& g);

Json graph_to_json(const WorkflowGraph& g);
WorkflowGraph graph_from_json(const Json& doc);
std::string serialize(const WorkflowGraph& g);
WorkflowGraph deserialize(const std::string& text);

}  // namespace flowforge
