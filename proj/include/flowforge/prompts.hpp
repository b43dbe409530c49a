// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace flowforge::prompts {

// Single-stage / execute-stage system prompts.
std::string react_system(const std::string& functions_text);
std::string planning_system(const std::string& functions_text);
std::string execution_system(const std::string& functions_text);
std::string step_instruction(int step_number, const std::string& step_description,
                             const std::string& accumulated_step_context);

// Summarize-stage (graph building) system prompts.
std::string graph_build_system(const std::string& tools_prompt);
std::string graph_plan_system(const std::string& tools_prompt);
std::string graph_exec_system(const std::string& tools_prompt);

// Observation feedback after a tool call.
std::string graph_observation(const std::string& result_str, const std::string& graph_state);
std::string business_observation(const std::string& result_str);

// Error-recovery messages.
std::string error_recovery(const std::string& function_name, const std::string& args_str,
                           const std::string& error, const std::string& signature_info,
                           int retry_count, int max_retries);
std::string format_recovery();

// Post-hoc graph instruction for Enhanced ReAct. Wording is this project's
// own; the intervention itself follows the published protocol.
std::string posthoc_graph_prompt();

}  // namespace flowforge::prompts
