// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/whitebox.hpp"

#include <algorithm>
#include <deque>

#include "flowforge/cond_expr.hpp"
#include "flowforge/text.hpp"

namespace flowforge {

namespace {

std::string canonical_expr_text(const std::string& source) {
  try {
    return expr::pretty_print(expr::parse(source));
  } catch (const expr::SyntaxError&) {
    return trim(source);
  }
}

void require_valid(const WorkflowGraph& g, const char* op) {
  ValidationReport report = validate(g);
  if (!report.valid()) {
    raise(Errc::InvalidGraph,
          std::string(op) + " requires a structurally valid graph (" +
              std::to_string(report.violations.size()) + " violations)");
  }
}

// Multiset Jaccard: |min counts| / |max counts|; both empty = 1.
double multiset_jaccard(const std::map<std::string, int>& a, const std::map<std::string, int>& b) {
  if (a.empty() && b.empty()) return 1.0;
  long long inter = 0;
  long long uni = 0;
  auto it_a = a.begin();
  auto it_b = b.begin();
  while (it_a != a.end() || it_b != b.end()) {
    if (it_a == a.end()) {
      uni += it_b->second;
      ++it_b;
    } else if (it_b == b.end()) {
      uni += it_a->second;
      ++it_a;
    } else if (it_a->first < it_b->first) {
      uni += it_a->second;
      ++it_a;
    } else if (it_b->first < it_a->first) {
      uni += it_b->second;
      ++it_b;
    } else {
      inter += std::min(it_a->second, it_b->second);
      uni += std::max(it_a->second, it_b->second);
      ++it_a;
      ++it_b;
    }
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

std::string node_signature(const Node& n) {
  switch (n.kind) {
    case NodeKind::Start: {
      std::vector<std::string> keys;
      for (const auto& [k, v] : n.initial_data) {
        (void)v;
        keys.push_back(k);
      }
      return "start{" + join(keys, ",") + "}";
    }
    case NodeKind::End:
      return "end{" + n.result_key.value_or("<last>") + "}";
    case NodeKind::FunctionCall: {
      std::vector<std::string> pairs;
      for (const auto& [param, key] : n.input_keys) pairs.push_back(param + "=" + key);
      return "fn:" + n.function + "(" + join(pairs, ",") + ")->" + n.output_key;
    }
    case NodeKind::Condition:
      return "cond:" + canonical_expr_text(n.condition_expr);
    case NodeKind::Llm:
      return "llm";
  }
  return "?";
}

CanonicalGraph canonicalize(const WorkflowGraph& g) {
  require_valid(g, "canonicalize");
  const Node* start = g.start_node();

  // BFS with deterministic sibling ordering: (edge label, target signature,
  // insertion index).
  std::map<std::string, std::size_t> insertion_index;
  for (std::size_t i = 0; i < g.nodes().size(); ++i) insertion_index[g.nodes()[i].id] = i;

  std::map<std::string, std::string> relabel;
  std::vector<const Node*> order;
  std::deque<const Node*> queue;
  auto visit = [&](const Node* n) {
    if (relabel.count(n->id) != 0) return;
    relabel[n->id] = "n" + std::to_string(order.size());
    order.push_back(n);
    queue.push_back(n);
  };
  visit(start);
  while (!queue.empty()) {
    const Node* cur = queue.front();
    queue.pop_front();
    std::vector<const Edge*> out = g.outgoing(cur->id);
    std::sort(out.begin(), out.end(), [&](const Edge* a, const Edge* b) {
      const Node* ta = g.find_node(a->to);
      const Node* tb = g.find_node(b->to);
      auto ka = std::make_tuple(a->label, node_signature(*ta), insertion_index[a->to]);
      auto kb = std::make_tuple(b->label, node_signature(*tb), insertion_index[b->to]);
      return ka < kb;
    });
    for (const Edge* e : out) visit(g.find_node(e->to));
  }

  std::vector<Node> nodes;
  nodes.reserve(order.size());
  for (const Node* n : order) {
    Node copy = *n;
    copy.id = relabel.at(n->id);
    if (copy.kind == NodeKind::Condition) {
      copy.condition_expr = canonical_expr_text(copy.condition_expr);
    }
    nodes.push_back(std::move(copy));
  }
  std::vector<Edge> edges;
  edges.reserve(g.edges().size());
  for (const Edge& e : g.edges()) {
    edges.push_back({relabel.at(e.from), relabel.at(e.to), e.label});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.from, a.to, a.label) < std::tie(b.from, b.to, b.label);
  });

  CanonicalGraph out;
  out.graph = WorkflowGraph::from_parts(std::move(nodes), std::move(edges));
  out.relabeling = std::move(relabel);
  out.key = serialize(out.graph);
  return out;
}

CongruenceScore structural_congruence(const WorkflowGraph& a, const WorkflowGraph& b) {
  require_valid(a, "structural_congruence");
  require_valid(b, "structural_congruence");

  auto node_multiset = [](const WorkflowGraph& g) {
    std::map<std::string, int> out;
    for (const Node& n : g.nodes()) ++out[node_signature(n)];
    return out;
  };
  auto edge_multiset = [](const WorkflowGraph& g) {
    std::map<std::string, int> out;
    for (const Edge& e : g.edges()) {
      const Node* from = g.find_node(e.from);
      const Node* to = g.find_node(e.to);
      ++out[node_signature(*from) + " -[" + e.label + "]-> " + node_signature(*to)];
    }
    return out;
  };
  auto branch_multiset = [](const WorkflowGraph& g) {
    std::map<std::string, int> out;
    for (const Node& n : g.nodes()) {
      if (n.kind != NodeKind::Condition) continue;
      std::vector<std::string> labels;
      for (const Edge* e : g.outgoing(n.id)) labels.push_back(e->label);
      std::sort(labels.begin(), labels.end());
      ++out[std::to_string(labels.size()) + ":[" + join(labels, ",") + "]"];
    }
    return out;
  };

  CongruenceScore score;
  score.node_overlap = multiset_jaccard(node_multiset(a), node_multiset(b));
  score.edge_overlap = multiset_jaccard(edge_multiset(a), edge_multiset(b));
  score.branch_topology_match = multiset_jaccard(branch_multiset(a), branch_multiset(b));
  return score;
}

// --- FSM interpretation -------------------------------------------------------

namespace {

// Observable action label for leaving `n` along edge `e`: the tool name at a
// FunctionCall, the outcome-labeled predicate text at a Condition.
std::string action_label(const Node& n, const Edge& e) {
  switch (n.kind) {
    case NodeKind::Start: return "start";
    case NodeKind::FunctionCall: return "call:" + n.function;
    case NodeKind::Condition:
      return "cond:" + canonical_expr_text(n.condition_expr) + "=>" +
             (e.label.empty() ? "?" : e.label);
    case NodeKind::Llm: return "llm";
    case NodeKind::End: return "end";
  }
  return "?";
}

// Outgoing transitions of a node, labeled by the node's observable action.
std::vector<std::pair<std::string, const Node*>> fsm_transitions(const WorkflowGraph& g,
                                                                 const Node& n) {
  std::vector<std::pair<std::string, const Node*>> out;
  for (const Edge* e : g.outgoing(n.id)) {
    out.emplace_back(action_label(n, *e), g.find_node(e->to));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::string fsm_signature(const WorkflowGraph& g, const Node& n) {
  std::vector<std::string> labels;
  for (const auto& [label, target] : fsm_transitions(g, n)) {
    (void)target;
    labels.push_back(label);
  }
  std::string sig = n.kind == NodeKind::End ? "END|" : "|";
  return sig + join(labels, ";");
}

}  // namespace

EquivResult behavioral_equivalent(const WorkflowGraph& a, const WorkflowGraph& b, int bound) {
  require_valid(a, "behavioral_equivalent");
  require_valid(b, "behavioral_equivalent");

  struct Pair {
    const Node* u;
    const Node* v;
    std::vector<std::string> path;
  };
  std::set<std::pair<std::string, std::string>> seen;
  std::deque<Pair> queue;
  queue.push_back({a.start_node(), b.start_node(), {}});
  seen.insert({a.start_node()->id, b.start_node()->id});
  int explored = 0;

  while (!queue.empty()) {
    if (++explored > bound) {
      return {EquivVerdict::Undecided, {}, "state-pair bound exceeded"};
    }
    Pair cur = queue.front();
    queue.pop_front();

    std::string sig_u = fsm_signature(a, *cur.u);
    std::string sig_v = fsm_signature(b, *cur.v);
    if (sig_u != sig_v) {
      return {EquivVerdict::Different, cur.path,
              "observation mismatch: '" + sig_u + "' vs '" + sig_v + "'"};
    }
    auto trans_u = fsm_transitions(a, *cur.u);
    auto trans_v = fsm_transitions(b, *cur.v);
    // Signatures matched, so both lists carry the same labels in the same order.
    for (std::size_t i = 0; i < trans_u.size(); ++i) {
      const Node* nu = trans_u[i].second;
      const Node* nv = trans_v[i].second;
      if (seen.insert({nu->id, nv->id}).second) {
        std::vector<std::string> path = cur.path;
        path.push_back(trans_u[i].first);
        queue.push_back({nu, nv, std::move(path)});
      }
    }
  }
  return {EquivVerdict::Equivalent, {}, ""};
}

std::optional<std::string> fsm_observation_after(const WorkflowGraph& g,
                                                 const std::vector<std::string>& labels) {
  const Node* cur = g.start_node();
  if (cur == nullptr) return std::nullopt;
  for (const std::string& label : labels) {
    const Node* next = nullptr;
    for (const auto& [l, target] : fsm_transitions(g, *cur)) {
      if (l == label) {
        next = target;
        break;
      }
    }
    if (next == nullptr) return std::nullopt;  // stuck: label unavailable
    cur = next;
  }
  return fsm_signature(g, *cur);
}

// --- path sufficiency ------------------------------------------------------------

namespace {

void enumerate_paths(const WorkflowGraph& g, const Node* cur, int max_edge_visits,
                     std::map<const Edge*, int>& edge_counts, std::vector<std::string>& labels,
                     std::set<std::string>& out) {
  if (cur->kind == NodeKind::End) {
    out.insert(join(labels, " -> "));
    return;
  }
  for (const Edge* e : g.outgoing(cur->id)) {
    int& count = edge_counts[e];
    if (count >= max_edge_visits) continue;
    ++count;
    bool is_start = cur->kind == NodeKind::Start;  // the start marker carries no action
    if (!is_start) labels.push_back(action_label(*cur, *e));
    enumerate_paths(g, g.find_node(e->to), max_edge_visits, edge_counts, labels, out);
    if (!is_start) labels.pop_back();
    --count;
  }
}

std::set<std::string> bounded_paths(const WorkflowGraph& g, int max_edge_visits) {
  std::set<std::string> out;
  std::map<const Edge*, int> edge_counts;
  std::vector<std::string> labels;
  enumerate_paths(g, g.start_node(), max_edge_visits, edge_counts, labels, out);
  if (out.empty()) {
    raise(Errc::DepthExhausted,
          "no start-to-end path found within the edge-visit bound (cycle without condition?)");
  }
  return out;
}

}  // namespace

PathSets path_sufficiency(const WorkflowGraph& golden, const WorkflowGraph& candidate,
                          int max_edge_visits) {
  require_valid(golden, "path_sufficiency");
  require_valid(candidate, "path_sufficiency");
  std::set<std::string> gp = bounded_paths(golden, max_edge_visits);
  std::set<std::string> cp = bounded_paths(candidate, max_edge_visits);
  PathSets out;
  for (const std::string& p : gp) {
    if (cp.count(p) != 0) {
      out.covered.insert(p);
    } else {
      out.missing.insert(p);
    }
  }
  for (const std::string& p : cp) {
    if (gp.count(p) == 0) out.spurious.insert(p);
  }
  return out;
}

// --- fidelity ----------------------------------------------------------------------

namespace {

// FunctionCall nodes reachable from `from`'s successors without crossing
// another FunctionCall node.
std::set<std::string> next_function_names(const WorkflowGraph& g, const Node& from) {
  std::set<std::string> out;
  std::set<std::string> seen;
  std::deque<const Node*> queue;
  for (const Edge* e : g.outgoing(from.id)) {
    const Node* t = g.find_node(e->to);
    if (seen.insert(t->id).second) queue.push_back(t);
  }
  while (!queue.empty()) {
    const Node* cur = queue.front();
    queue.pop_front();
    if (cur->kind == NodeKind::FunctionCall) {
      out.insert(cur->function);
      continue;  // stop here: paths may not cross another function node
    }
    for (const Edge* e : g.outgoing(cur->id)) {
      const Node* t = g.find_node(e->to);
      if (seen.insert(t->id).second) queue.push_back(t);
    }
  }
  return out;
}

}  // namespace

double fidelity(const WorkflowGraph& g, const Trace& trace) {
  require_valid(g, "fidelity");
  std::vector<std::string> calls;
  for (const TraceStep& s : trace.steps) {
    if (s.ok && s.partition == Partition::Business) calls.push_back(s.action);
  }
  if (calls.empty()) {
    raise(Errc::Precondition, "fidelity requires a trace with at least one business step");
  }

  std::set<std::string> functions;
  for (const Node& n : g.nodes()) {
    if (n.kind == NodeKind::FunctionCall) functions.insert(n.function);
  }
  if (calls.size() == 1) {
    return functions.count(calls.front()) != 0 ? 1.0 : 0.0;
  }

  // Adjacency realizability per function name: successors computed once per
  // distinct source function.
  std::map<std::string, std::set<std::string>> reachable;
  for (const Node& n : g.nodes()) {
    if (n.kind != NodeKind::FunctionCall) continue;
    std::set<std::string> next = next_function_names(g, n);
    reachable[n.function].insert(next.begin(), next.end());
  }

  int realizable = 0;
  int pairs = static_cast<int>(calls.size()) - 1;
  for (int i = 0; i < pairs; ++i) {
    auto it = reachable.find(calls[static_cast<std::size_t>(i)]);
    if (it != reachable.end() && it->second.count(calls[static_cast<std::size_t>(i) + 1]) != 0) {
      ++realizable;
    }
  }
  return static_cast<double>(realizable) / static_cast<double>(pairs);
}

}  // namespace flowforge
