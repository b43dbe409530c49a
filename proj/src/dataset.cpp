// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "flowforge/text.hpp"

namespace flowforge {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::SchemaError, "cannot read file: " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Json parse_file(const std::filesystem::path& path) {
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) raise(Errc::SchemaError, path.string() + ": not valid JSON");
  return j;
}

[[noreturn]] void schema_fail(const std::string& context, const std::string& what) {
  raise(Errc::SchemaError, context + ": " + what);
}

void check_difficulty_band(const Instance& inst, const std::string& context) {
  std::size_t n = inst.toolset.size();
  std::size_t lo = 0;
  std::size_t hi = 0;
  if (inst.difficulty == "easy") {
    lo = 7; hi = 9;
  } else if (inst.difficulty == "medium") {
    lo = 18; hi = 20;
  } else if (inst.difficulty == "hard") {
    lo = 28; hi = 30;
  } else {
    schema_fail(context, "unknown difficulty '" + inst.difficulty + "'");
  }
  if (n < lo || n > hi) {
    schema_fail(context, "difficulty '" + inst.difficulty + "' requires a toolset of " +
                             std::to_string(lo) + "-" + std::to_string(hi) + " tools, got " +
                             std::to_string(n));
  }
}

}  // namespace

Instance instance_from_json(const Json& j, const std::string& context) {
  if (!j.is_object()) schema_fail(context, "instance must be a JSON object");
  Instance inst;
  for (const char* field : {"id", "category", "difficulty", "description"}) {
    if (!j.contains(field) || !j.at(field).is_string()) {
      schema_fail(context, std::string("missing or non-string '") + field + "'");
    }
  }
  inst.id = j.at("id").get<std::string>();
  inst.category = j.at("category").get<std::string>();
  inst.difficulty = j.at("difficulty").get<std::string>();
  inst.description = j.at("description").get<std::string>();
  if (inst.category != "math" && inst.category != "data" && inst.category != "string" &&
      inst.category != "logic") {
    schema_fail(context, "unknown category '" + inst.category + "'");
  }
  if (!j.contains("toolset") || !j.at("toolset").is_array()) {
    schema_fail(context, "missing or non-array 'toolset'");
  }
  for (const Json& t : j.at("toolset")) {
    if (!t.is_string()) schema_fail(context, "toolset entries must be strings");
    inst.toolset.push_back(t.get<std::string>());
  }
  if (!j.contains("examples") || !j.at("examples").is_array() || j.at("examples").empty()) {
    schema_fail(context, "missing or empty 'examples'");
  }
  for (const Json& e : j.at("examples")) {
    if (!e.is_object() || !e.contains("input") || !e.contains("expected")) {
      schema_fail(context, "examples need 'input' and 'expected'");
    }
    IoExample ex;
    ex.input = argmap_from_json(e.at("input"));
    ex.expected = e.at("expected").get<std::string>();
    inst.examples.push_back(std::move(ex));
  }
  if (!j.contains("tests") || !j.at("tests").is_array() || j.at("tests").empty()) {
    schema_fail(context, "missing or empty 'tests'");
  }
  for (const Json& t : j.at("tests")) {
    if (!t.is_object() || !t.contains("input") || !t.contains("golden")) {
      schema_fail(context, "tests need 'input' and 'golden'");
    }
    HeldOutTest ht;
    ht.input = argmap_from_json(t.at("input"));
    ht.golden = t.at("golden").get<std::string>();
    inst.tests.push_back(std::move(ht));
  }

  check_difficulty_band(inst, context);

  // Toolset names must resolve against the builtin suites.
  ToolRegistry all = full_builtin_registry();
  for (const std::string& name : inst.toolset) {
    if (!all.contains(name)) schema_fail(context, "toolset names unknown tool '" + name + "'");
  }
  return inst;
}

std::vector<Instance> load_dataset(const std::filesystem::path& dir) {
  std::filesystem::path index_path = dir / "index.json";
  Json index = parse_file(index_path);
  if (!index.contains("instances") || !index.at("instances").is_array()) {
    schema_fail(index_path.string(), "missing 'instances' array");
  }
  std::vector<Instance> out;
  std::set<std::string> ids;
  for (const Json& f : index.at("instances")) {
    if (!f.is_string()) schema_fail(index_path.string(), "instance entries must be file names");
    std::filesystem::path file = dir / f.get<std::string>();
    Instance inst = instance_from_json(parse_file(file), file.string());
    if (!ids.insert(inst.id).second) {
      raise(Errc::DuplicateInstanceId, "duplicate instance id '" + inst.id + "'");
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::optional<WorkflowGraph> load_golden_graph(const std::filesystem::path& dataset_dir,
                                               const std::string& instance_id) {
  std::filesystem::path path = dataset_dir / "goldens" / (instance_id + ".graph.json");
  if (!std::filesystem::exists(path)) return std::nullopt;
  return deserialize(read_file(path));
}

ToolRegistry registry_for(const Instance& instance) {
  std::set<std::string> wanted(instance.toolset.begin(), instance.toolset.end());
  return full_builtin_registry().subset(wanted);
}

std::string task_prompt_text(const Instance& instance) {
  std::string out = instance.description + "\n\nExamples:\n";
  for (const IoExample& ex : instance.examples) {
    out += "- Input: " + render_args_str(argmap_to_json(ex.input)) +
           " -> Expected output: " + ex.expected + "\n";
  }
  out += "\nInput data: " + render_args_str(argmap_to_json(instance.examples.front().input));
  return out;
}

std::filesystem::path bundled_dataset_dir() {
  return std::filesystem::path(FLOWFORGE_SOURCE_DIR) / "data" / "desk";
}

}  // namespace flowforge
