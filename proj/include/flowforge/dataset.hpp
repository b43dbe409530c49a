// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flowforge/graph.hpp"
#include "flowforge/tools.hpp"

namespace flowforge {

struct IoExample {
  ArgMap input;
  std::string expected;
};

struct HeldOutTest {
  ArgMap input;
  std::string golden;
};

struct Instance {
  std::string id;
  std::string category;    // math | data | string | logic
  std::string difficulty;  // easy | medium | hard
  std::string description;
  std::vector<std::string> toolset;   // business-tool names, distractors included
  std::vector<IoExample> examples;    // in-context examples
  std::vector<HeldOutTest> tests;     // held-out evaluation cases
};

// Directory layout: index.json listing instance files, one JSON document per
// instance, optional goldens/<id>.graph.json reference workflows.
std::vector<Instance> load_dataset(const std::filesystem::path& dir);
Instance instance_from_json(const Json& j, const std::string& context);

std::optional<WorkflowGraph> load_golden_graph(const std::filesystem::path& dataset_dir,
                                               const std::string& instance_id);

// Business-tool registry for an instance: the builtin tools named in its
// toolset (plus finish).
ToolRegistry registry_for(const Instance& instance);

// Task text handed to the agent: description, worked examples, and the first
// example's input data to process.
std::string task_prompt_text(const Instance& instance);

// Location of the bundled desk-scale suite.
std::filesystem::path bundled_dataset_dir();

}  // namespace flowforge
