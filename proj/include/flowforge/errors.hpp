// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace flowforge {

// Machine-readable error codes spanning the whole engine. Each subsystem
// throws flowforge::Error (or a subclass) tagged with one of these.
enum class Errc {
  // graph builder / schema
  DuplicateStart,
  DuplicateEnd,
  DuplicateId,
  DuplicateEdge,
  UnknownNode,
  SchemaError,
  InvalidGraph,
  // condition expressions
  SyntaxError,
  UnboundIdentifier,
  TypeError,
  DivisionByZero,
  NanComparison,
  // tool registry
  DuplicateTool,
  UnknownTool,
  UnknownCategory,
  ToolError,
  // model backends
  TransportError,
  TimeoutError,
  ProviderError,
  TranscriptExhausted,
  // action decoding
  ParseFailure,
  FormatExhausted,
  // workflow execution
  UnboundKey,
  ExprError,
  AmbiguousSuccessor,
  LoopCapExceeded,
  LlmNodeUnsupported,
  // pipeline / evaluation / harness
  NoTracesToSummarize,
  UnknownBaseline,
  CalledOnPassingCase,
  DepthExhausted,
  DuplicateInstanceId,
  EmptyRun,
  Precondition,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace flowforge
