// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flowforge/errors.hpp"
#include "flowforge/graph.hpp"
#include "flowforge/value.hpp"

namespace flowforge {

enum class Partition { Business, GraphConstruction, Terminal };

const char* partition_name(Partition p);

enum class ParamType { Number, Text, Boolean, List, Object, Any };

const char* param_type_name(ParamType t);

struct ToolParam {
  std::string name;
  ParamType type = ParamType::Any;
  std::string description;
  bool required = true;
};

struct ToolSpec {
  std::string name;
  std::string description;
  std::vector<ToolParam> params;
  std::string returns;
  Partition partition = Partition::Business;

  std::vector<std::string> param_names() const;
};

// Tool executors receive the raw argument object; graph-construction tools
// take one level of nested maps (initial_data, input_keys), business tools
// take flat values only.
using ToolFn = std::function<Value(const Json& args)>;

class ToolError : public Error {
 public:
  ToolError(Errc code, std::string tool, Json args, const std::string& message,
            std::string signature_info)
      : Error(code, message),
        tool_(std::move(tool)),
        args_(std::move(args)),
        signature_info_(std::move(signature_info)) {}

  const std::string& tool() const { return tool_; }
  const Json& args() const { return args_; }
  const std::string& signature_info() const { return signature_info_; }

 private:
  std::string tool_;
  Json args_;
  std::string signature_info_;
};

class ToolRegistry {
 public:
  // Every registry carries the terminal "finish" tool.
  ToolRegistry();

  void register_tool(ToolSpec spec, ToolFn fn);

  bool contains(const std::string& name) const;
  const ToolSpec* find(const std::string& name) const;
  std::optional<Partition> partition_of(const std::string& name) const;

  Value execute(const std::string& name, const Json& args) const;

  // "{functions_text}" block: one "Name/Description/Parameters/Returns"
  // section per tool, in registration order, filtered by partition.
  std::string render_signatures(std::initializer_list<Partition> parts) const;
  std::string render_signatures() const;

  // "**Correct function signature**" block for the error-recovery prompt.
  std::string signature_info(const std::string& name) const;

  std::vector<const ToolSpec*> specs() const;
  std::set<std::string> names(std::optional<Partition> part = std::nullopt) const;
  std::size_t size() const { return order_.size(); }

  ToolRegistry filtered(std::initializer_list<Partition> parts) const;
  ToolRegistry subset(const std::set<std::string>& keep) const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::pair<ToolSpec, ToolFn>> tools_;
};

// Deterministic built-in business-tool suites; category is one of
// "math", "data", "string", "logic".
std::vector<std::pair<ToolSpec, ToolFn>> builtin_suite(const std::string& category);
void add_builtin_suite(ToolRegistry& registry, const std::string& category);
ToolRegistry full_builtin_registry();

// Binds the five graph-construction tools to `graph`; the registry must not
// outlive it.
void register_graph_tools(ToolRegistry& registry, WorkflowGraph& graph);

inline constexpr const char* kFinishTool = "finish";

}  // namespace flowforge
