// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flowforge/graph.hpp"
#include "flowforge/orchestrator.hpp"

namespace flowforge {

struct CanonicalGraph {
  WorkflowGraph graph;                            // relabeled n0, n1, ...
  std::map<std::string, std::string> relabeling;  // original id -> canonical id
  std::string key;                                // serialized canonical form
};

// Breadth-first relabeling from the start node; sibling order breaks ties by
// node signature (kind, function, keys, canonical expression text) so
// id-renamed copies of a graph canonicalize identically.
CanonicalGraph canonicalize(const WorkflowGraph& g);

// Signature text used by canonicalization and congruence scoring.
std::string node_signature(const Node& n);

struct CongruenceScore {
  double node_overlap = 0.0;
  double edge_overlap = 0.0;
  double branch_topology_match = 0.0;

  double aggregate() const { return (node_overlap + edge_overlap + branch_topology_match) / 3.0; }
};

CongruenceScore structural_congruence(const WorkflowGraph& a, const WorkflowGraph& b);

enum class EquivVerdict { Equivalent, Different, Undecided };

struct EquivResult {
  EquivVerdict verdict = EquivVerdict::Undecided;
  std::vector<std::string> witness;  // action labels from the start to divergence
  std::string detail;
};

// Interprets both graphs as deterministic FSMs over observable action labels
// and checks bisimulation by synchronized product exploration, up to `bound`
// state pairs.
EquivResult behavioral_equivalent(const WorkflowGraph& a, const WorkflowGraph& b,
                                  int bound = 10000);

// Observable signature of the state reached by following `labels` from the
// start; nullopt when the walk gets stuck. Used to replay witnesses.
std::optional<std::string> fsm_observation_after(const WorkflowGraph& g,
                                                 const std::vector<std::string>& labels);

struct PathSets {
  std::set<std::string> covered;
  std::set<std::string> missing;   // in golden, not in candidate
  std::set<std::string> spurious;  // in candidate, not in golden
};

// Bounded start-to-end action paths; each edge may repeat at most
// `max_edge_visits` times per path (2 = loops unrolled zero and one times).
PathSets path_sufficiency(const WorkflowGraph& golden, const WorkflowGraph& candidate,
                          int max_edge_visits = 2);

// Fraction of adjacent business-call pairs in the trace realizable as a path
// between their FunctionCall nodes crossing no other FunctionCall node.
double fidelity(const WorkflowGraph& g, const Trace& trace);

}  // namespace flowforge
