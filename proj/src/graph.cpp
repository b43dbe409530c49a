// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/graph.hpp"

#include <algorithm>
#include <deque>

#include "flowforge/text.hpp"

namespace flowforge {

std::string kind_to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Start: return "start";
    case NodeKind::End: return "end";
    case NodeKind::FunctionCall: return "function_call";
    case NodeKind::Condition: return "condition";
    case NodeKind::Llm: return "llm";
  }
  return "unknown";
}

NodeKind kind_from_string(const std::string& s) {
  if (s == "start") return NodeKind::Start;
  if (s == "end") return NodeKind::End;
  if (s == "function_call") return NodeKind::FunctionCall;
  if (s == "condition") return NodeKind::Condition;
  if (s == "llm") return NodeKind::Llm;
  raise(Errc::SchemaError, "unknown node kind '" + s + "'");
}

std::string kind_state_label(NodeKind kind) {
  switch (kind) {
    case NodeKind::Start: return "START";
    case NodeKind::End: return "END";
    case NodeKind::FunctionCall: return "BUSINESS";
    case NodeKind::Condition: return "CONDITION";
    case NodeKind::Llm: return "LLM";
  }
  return "UNKNOWN";
}

const char* violation_name(Violation v) {
  switch (v) {
    case Violation::MissingStart: return "MissingStart";
    case Violation::MissingEnd: return "MissingEnd";
    case Violation::DisconnectedNode: return "DisconnectedNode";
    case Violation::DeadEndNode: return "DeadEndNode";
    case Violation::UnboundInput: return "UnboundInput";
    case Violation::DuplicateId: return "DuplicateId";
    case Violation::BadBranchLabels: return "BadBranchLabels";
  }
  return "Unknown";
}

bool ValidationReport::has(Violation code) const {
  for (const auto& v : violations) {
    if (v.code == code) return true;
  }
  return false;
}

void WorkflowGraph::require_new_id(const std::string& id) const {
  if (find_node(id) != nullptr) {
    raise(Errc::DuplicateId, "node id '" + id + "' already exists");
  }
}

std::string WorkflowGraph::add_start_node(std::map<std::string, Value> initial_data) {
  if (start_node() != nullptr) {
    raise(Errc::DuplicateStart, "a start node already exists");
  }
  require_new_id(kStartId);
  Node n;
  n.id = kStartId;
  n.kind = NodeKind::Start;
  n.initial_data = std::move(initial_data);
  nodes_.push_back(std::move(n));
  return kStartId;
}

std::string WorkflowGraph::add_function_node(const std::string& id, const std::string& function,
                                             std::map<std::string, std::string> input_keys,
                                             const std::string& output_key) {
  require_new_id(id);
  Node n;
  n.id = id;
  n.kind = NodeKind::FunctionCall;
  n.function = function;
  n.input_keys = std::move(input_keys);
  n.output_key = output_key;
  nodes_.push_back(std::move(n));
  return id;
}

std::string WorkflowGraph::add_condition_node(const std::string& id,
                                              const std::string& condition_expr) {
  require_new_id(id);
  Node n;
  n.id = id;
  n.kind = NodeKind::Condition;
  n.condition_expr = condition_expr;
  nodes_.push_back(std::move(n));
  return id;
}

void WorkflowGraph::add_edge(const std::string& from, const std::string& to,
                             const std::string& label) {
  if (find_node(from) == nullptr) {
    raise(Errc::UnknownNode, "edge endpoint '" + from + "' does not exist");
  }
  if (find_node(to) == nullptr) {
    raise(Errc::UnknownNode, "edge endpoint '" + to + "' does not exist");
  }
  Edge e{from, to, label};
  for (const Edge& existing : edges_) {
    if (existing == e) {
      raise(Errc::DuplicateEdge, "edge " + from + " -> " + to +
                                     (label.empty() ? "" : " [" + label + "]") +
                                     " already exists");
    }
  }
  edges_.push_back(std::move(e));
}

std::string WorkflowGraph::add_end_node(std::optional<std::string> result_key) {
  if (end_node() != nullptr) {
    raise(Errc::DuplicateEnd, "an end node already exists");
  }
  require_new_id(kEndId);
  Node n;
  n.id = kEndId;
  n.kind = NodeKind::End;
  n.result_key = std::move(result_key);
  nodes_.push_back(std::move(n));
  return kEndId;
}

const Node* WorkflowGraph::find_node(const std::string& id) const {
  for (const Node& n : nodes_) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const Node* WorkflowGraph::start_node() const {
  for (const Node& n : nodes_) {
    if (n.kind == NodeKind::Start) return &n;
  }
  return nullptr;
}

const Node* WorkflowGraph::end_node() const {
  for (const Node& n : nodes_) {
    if (n.kind == NodeKind::End) return &n;
  }
  return nullptr;
}

std::vector<const Edge*> WorkflowGraph::outgoing(const std::string& id) const {
  std::vector<const Edge*> out;
  for (const Edge& e : edges_) {
    if (e.from == id) out.push_back(&e);
  }
  return out;
}

std::vector<const Edge*> WorkflowGraph::incoming(const std::string& id) const {
  std::vector<const Edge*> out;
  for (const Edge& e : edges_) {
    if (e.to == id) out.push_back(&e);
  }
  return out;
}

bool WorkflowGraph::operator==(const WorkflowGraph& other) const {
  if (nodes_.size() != other.nodes_.size() || edges_.size() != other.edges_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& a = nodes_[i];
    const Node& b = other.nodes_[i];
    if (a.id != b.id || a.kind != b.kind || a.function != b.function ||
        a.input_keys != b.input_keys || a.output_key != b.output_key ||
        a.condition_expr != b.condition_expr || a.initial_data != b.initial_data ||
        a.result_key != b.result_key) {
      return false;
    }
  }
  return edges_ == other.edges_;
}

WorkflowGraph WorkflowGraph::from_parts(std::vector<Node> nodes, std::vector<Edge> edges) {
  WorkflowGraph g;
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  return g;
}

// --- validation -----------------------------------------------------------

namespace {

ValidationReport validate_impl(const WorkflowGraph& g, const std::set<std::string>* known_tools) {
  ValidationReport report;
  auto add = [&report](Violation code, const std::string& subject, const std::string& message) {
    report.violations.push_back({code, subject, message});
  };

  // Duplicate ids (only reachable through deserialized documents).
  std::set<std::string> seen;
  for (const Node& n : g.nodes()) {
    if (!seen.insert(n.id).second) {
      add(Violation::DuplicateId, n.id, "node id '" + n.id + "' appears more than once");
    }
  }

  const Node* start = nullptr;
  const Node* end = nullptr;
  for (const Node& n : g.nodes()) {
    if (n.kind == NodeKind::Start) {
      if (start == nullptr) {
        start = &n;
      } else {
        add(Violation::DuplicateId, n.id, "graph has more than one start node");
      }
    }
    if (n.kind == NodeKind::End) {
      if (end == nullptr) {
        end = &n;
      } else {
        add(Violation::DuplicateId, n.id, "graph has more than one end node");
      }
    }
  }
  if (start == nullptr) {
    add(Violation::MissingStart, "", "graph has no start node");
  }
  if (end == nullptr) {
    add(Violation::MissingEnd, "", "graph has no end node");
  }

  // Reachability from the start node.
  if (start != nullptr) {
    std::set<std::string> reached;
    std::deque<std::string> queue{start->id};
    reached.insert(start->id);
    while (!queue.empty()) {
      std::string cur = queue.front();
      queue.pop_front();
      for (const Edge* e : g.outgoing(cur)) {
        if (g.find_node(e->to) != nullptr && reached.insert(e->to).second) {
          queue.push_back(e->to);
        }
      }
    }
    for (const Node& n : g.nodes()) {
      if (reached.count(n.id) == 0) {
        add(Violation::DisconnectedNode, n.id,
            "node '" + n.id + "' is not reachable from the start node");
      }
    }
  }

  // Every non-end node needs at least one outgoing edge.
  for (const Node& n : g.nodes()) {
    if (n.kind != NodeKind::End && g.outgoing(n.id).empty()) {
      add(Violation::DeadEndNode, n.id, "node '" + n.id + "' has no outgoing edge");
    }
  }

  // Input resolvability against the union of start keys and all output keys.
  // This deliberately over-approximates: per-path analysis is undecidable
  // with loops, and the executor raises UnboundKey at runtime instead.
  std::set<std::string> producers;
  if (start != nullptr) {
    for (const auto& [k, v] : start->initial_data) {
      (void)v;
      producers.insert(k);
    }
  }
  for (const Node& n : g.nodes()) {
    if (n.kind == NodeKind::FunctionCall && !n.output_key.empty()) {
      producers.insert(n.output_key);
    }
  }
  for (const Node& n : g.nodes()) {
    if (n.kind != NodeKind::FunctionCall) continue;
    for (const auto& [param, key] : n.input_keys) {
      if (producers.count(key) == 0) {
        add(Violation::UnboundInput, n.id,
            "input '" + param + "' of node '" + n.id + "' reads key '" + key +
                "' which no start key or output_key produces");
      }
    }
    if (known_tools != nullptr && known_tools->count(n.function) == 0) {
      add(Violation::UnboundInput, n.id,
          "node '" + n.id + "' calls unknown tool '" + n.function + "'");
    }
  }

  // Branch labels: conditions need distinct "true"/"false" branches and
  // labels may only originate from condition nodes.
  for (const Node& n : g.nodes()) {
    if (n.kind == NodeKind::Condition) {
      std::vector<std::string> labels;
      bool dup = false;
      for (const Edge* e : g.outgoing(n.id)) {
        if (std::find(labels.begin(), labels.end(), e->label) != labels.end()) dup = true;
        labels.push_back(e->label);
      }
      bool has_true = std::find(labels.begin(), labels.end(), "true") != labels.end();
      bool has_false = std::find(labels.begin(), labels.end(), "false") != labels.end();
      for (const std::string& l : labels) {
        if (l != "true" && l != "false") {
          add(Violation::BadBranchLabels, n.id,
              "condition '" + n.id + "' has an edge with label '" +
                  (l.empty() ? "<unlabeled>" : l) + "' (must be \"true\" or \"false\")");
        }
      }
      if (dup) {
        add(Violation::BadBranchLabels, n.id,
            "condition '" + n.id + "' has outgoing edges with duplicate labels");
      }
      if (!has_true || !has_false) {
        add(Violation::BadBranchLabels, n.id,
            "condition '" + n.id + "' must have both a \"true\" and a \"false\" branch");
      }
    } else {
      for (const Edge* e : g.outgoing(n.id)) {
        if (!e->label.empty()) {
          add(Violation::BadBranchLabels, n.id,
              "labeled edge '" + e->from + " -> " + e->to + " [" + e->label +
                  "]' originates from a non-condition node");
        }
      }
    }
  }

  return report;
}

}  // namespace

ValidationReport validate(const WorkflowGraph& g) { return validate_impl(g, nullptr); }

ValidationReport validate(const WorkflowGraph& g, const std::set<std::string>& known_tools) {
  return validate_impl(g, &known_tools);
}

// --- observation rendering --------------------------------------------------

std::string render_state(const WorkflowGraph& g) {
  std::string out = "Nodes (" + std::to_string(g.nodes().size()) + "):\n";
  for (const Node& n : g.nodes()) {
    out += "  - " + n.id + " (" + kind_state_label(n.kind) + ")";
    if (n.kind == NodeKind::FunctionCall) {
      std::vector<std::string> pairs;
      for (const auto& [param, key] : n.input_keys) pairs.push_back(param + "=" + key);
      out += ": " + n.function + "(" + join(pairs, ", ") + ") -> " + n.output_key;
    } else if (n.kind == NodeKind::Condition) {
      out += ": " + n.condition_expr;
    }
    out += "\n";
  }
  out += "\nEdges (" + std::to_string(g.edges().size()) + "):\n";
  for (const Edge& e : g.edges()) {
    out += "  - " + e.from + " -> " + e.to;
    if (!e.label.empty()) out += " [" + e.label + "]";
    out += "\n";
  }

  std::vector<std::string> missing;
  if (g.start_node() == nullptr) missing.push_back("missing start node");
  if (g.end_node() == nullptr) missing.push_back("missing end node");
  for (const Node& n : g.nodes()) {
    if (g.outgoing(n.id).empty() && g.incoming(n.id).empty()) {
      missing.push_back("node '" + n.id + "' has no edges (Every node must have edges)");
    }
  }
  if (missing.empty()) {
    out += "\nMissing Elements: None";
  } else {
    out += "\nMissing Elements:";
    for (const std::string& m : missing) out += "\n  - " + m;
  }
  return out;
}

// --- serialization ----------------------------------------------------------

Json graph_to_json(const WorkflowGraph& g) {
  Json doc = Json::object();
  doc["nodes"] = Json::array();
  for (const Node& n : g.nodes()) {
    Json jn = Json::object();
    jn["id"] = n.id;
    jn["kind"] = kind_to_string(n.kind);
    switch (n.kind) {
      case NodeKind::FunctionCall: {
        jn["function"] = n.function;
        Json keys = Json::object();
        for (const auto& [param, key] : n.input_keys) keys[param] = key;
        jn["input_keys"] = keys;
        jn["output_key"] = n.output_key;
        break;
      }
      case NodeKind::Condition:
        jn["condition_expr"] = n.condition_expr;
        break;
      case NodeKind::Start: {
        Json data = Json::object();
        for (const auto& [key, value] : n.initial_data) data[key] = to_json(value);
        jn["initial_data"] = data;
        break;
      }
      case NodeKind::End:
        if (n.result_key.has_value()) jn["result_key"] = *n.result_key;
        break;
      case NodeKind::Llm:
        break;
    }
    doc["nodes"].push_back(jn);
  }
  doc["edges"] = Json::array();
  for (const Edge& e : g.edges()) {
    Json je = Json::object();
    je["from"] = e.from;
    je["to"] = e.to;
    if (!e.label.empty()) je["label"] = e.label;
    doc["edges"].push_back(je);
  }
  return doc;
}

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  raise(Errc::SchemaError, path + ": " + what);
}

std::string require_string(const Json& obj, const std::string& field, const std::string& path) {
  if (!obj.contains(field)) schema_fail(path + "." + field, "missing required field");
  if (!obj.at(field).is_string()) schema_fail(path + "." + field, "expected a string");
  return obj.at(field).get<std::string>();
}

void forbid(const Json& obj, const std::string& field, const std::string& path,
            const std::string& kind) {
  if (obj.contains(field)) {
    schema_fail(path + "." + field, "field not allowed on a '" + kind + "' node");
  }
}

}  // namespace

WorkflowGraph graph_from_json(const Json& doc) {
  if (!doc.is_object()) schema_fail("$", "document must be a JSON object");
  if (!doc.contains("nodes")) schema_fail("$.nodes", "missing required field");
  if (!doc.at("nodes").is_array()) schema_fail("$.nodes", "expected an array");
  if (!doc.contains("edges")) schema_fail("$.edges", "missing required field");
  if (!doc.at("edges").is_array()) schema_fail("$.edges", "expected an array");

  std::vector<Node> nodes;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.at("nodes").size(); ++i) {
    const Json& jn = doc.at("nodes").at(i);
    std::string path = "$.nodes[" + std::to_string(i) + "]";
    if (!jn.is_object()) schema_fail(path, "expected an object");
    Node n;
    n.id = require_string(jn, "id", path);
    if (n.id.empty()) schema_fail(path + ".id", "node id must be non-empty");
    n.kind = kind_from_string(require_string(jn, "kind", path));
    ids.insert(n.id);
    switch (n.kind) {
      case NodeKind::FunctionCall: {
        n.function = require_string(jn, "function", path);
        if (!jn.contains("input_keys")) schema_fail(path + ".input_keys", "missing required field");
        if (!jn.at("input_keys").is_object()) schema_fail(path + ".input_keys", "expected an object");
        for (auto it = jn.at("input_keys").begin(); it != jn.at("input_keys").end(); ++it) {
          if (!it.value().is_string()) {
            schema_fail(path + ".input_keys." + it.key(), "expected a string key name");
          }
          n.input_keys[it.key()] = it.value().get<std::string>();
        }
        n.output_key = require_string(jn, "output_key", path);
        forbid(jn, "condition_expr", path, "function_call");
        forbid(jn, "initial_data", path, "function_call");
        forbid(jn, "result_key", path, "function_call");
        break;
      }
      case NodeKind::Condition: {
        n.condition_expr = require_string(jn, "condition_expr", path);
        forbid(jn, "function", path, "condition");
        forbid(jn, "input_keys", path, "condition");
        forbid(jn, "output_key", path, "condition");
        forbid(jn, "initial_data", path, "condition");
        forbid(jn, "result_key", path, "condition");
        break;
      }
      case NodeKind::Start: {
        if (!jn.contains("initial_data")) schema_fail(path + ".initial_data", "missing required field");
        if (!jn.at("initial_data").is_object()) schema_fail(path + ".initial_data", "expected an object");
        for (auto it = jn.at("initial_data").begin(); it != jn.at("initial_data").end(); ++it) {
          try {
            n.initial_data[it.key()] = value_from_json(it.value());
          } catch (const Error&) {
            schema_fail(path + ".initial_data." + it.key(), "unsupported value type");
          }
        }
        forbid(jn, "function", path, "start");
        forbid(jn, "input_keys", path, "start");
        forbid(jn, "output_key", path, "start");
        forbid(jn, "condition_expr", path, "start");
        forbid(jn, "result_key", path, "start");
        break;
      }
      case NodeKind::End: {
        if (jn.contains("result_key")) {
          if (!jn.at("result_key").is_string()) schema_fail(path + ".result_key", "expected a string");
          n.result_key = jn.at("result_key").get<std::string>();
        }
        forbid(jn, "function", path, "end");
        forbid(jn, "input_keys", path, "end");
        forbid(jn, "output_key", path, "end");
        forbid(jn, "condition_expr", path, "end");
        forbid(jn, "initial_data", path, "end");
        break;
      }
      case NodeKind::Llm: {
        forbid(jn, "function", path, "llm");
        forbid(jn, "input_keys", path, "llm");
        forbid(jn, "output_key", path, "llm");
        forbid(jn, "condition_expr", path, "llm");
        forbid(jn, "initial_data", path, "llm");
        forbid(jn, "result_key", path, "llm");
        break;
      }
    }
    nodes.push_back(std::move(n));
  }

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < doc.at("edges").size(); ++i) {
    const Json& je = doc.at("edges").at(i);
    std::string path = "$.edges[" + std::to_string(i) + "]";
    if (!je.is_object()) schema_fail(path, "expected an object");
    Edge e;
    e.from = require_string(je, "from", path);
    e.to = require_string(je, "to", path);
    if (je.contains("label")) {
      if (!je.at("label").is_string()) schema_fail(path + ".label", "expected a string");
      e.label = je.at("label").get<std::string>();
    }
    if (ids.count(e.from) == 0) schema_fail(path + ".from", "references undeclared node '" + e.from + "'");
    if (ids.count(e.to) == 0) schema_fail(path + ".to", "references undeclared node '" + e.to + "'");
    edges.push_back(std::move(e));
  }

  return WorkflowGraph::from_parts(std::move(nodes), std::move(edges));
}

std::string serialize(const WorkflowGraph& g) { return graph_to_json(g).dump(2) + "\n"; }

WorkflowGraph deserialize(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) raise(Errc::SchemaError, "$: document is not valid JSON");
  return graph_from_json(doc);
}

}  // namespace flowforge
