// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "flowforge/errors.hpp"

namespace flowforge {

using Json = nlohmann::json;

enum class TypeTag { Number, Text, Boolean, List };

const char* type_name(TypeTag tag);

// Runtime value flowing through tools, data stores, and condition
// expressions: a 64-bit float, text, boolean, or list thereof.
class Value {
 public:
  using List = std::vector<Value>;

  Value() : data_(0.0) {}

  static Value number(double v) { return Value(v); }
  static Value text(std::string v) { return Value(std::move(v)); }
  static Value boolean(bool v) { return Value(v); }
  static Value list(List v) { return Value(std::move(v)); }

  TypeTag tag() const;
  bool is_number() const { return std::holds_alternative<double>(data_); }
  bool is_text() const { return std::holds_alternative<std::string>(data_); }
  bool is_boolean() const { return std::holds_alternative<bool>(data_); }
  bool is_list() const { return std::holds_alternative<List>(data_); }

  double as_number() const;
  const std::string& as_text() const;
  bool as_boolean() const;
  const List& as_list() const;

  bool operator==(const Value& other) const { return data_ == other.data_; }
  bool operator!=(const Value& other) const { return !(*this == other); }

 private:
  explicit Value(double v) : data_(v) {}
  explicit Value(std::string v) : data_(std::move(v)) {}
  explicit Value(bool v) : data_(v) {}
  explicit Value(List v) : data_(std::move(v)) {}

  std::variant<double, std::string, bool, List> data_;
};

using ArgMap = std::map<std::string, Value>;

// Shortest round-trip rendering; integral values print without a fraction.
std::string render_number(double v);

// Deterministic text form used by black-box exact matching: numbers per
// render_number, booleans "true"/"false", lists "[a, b]", text trimmed.
std::string canonical_text(const Value& v);

Json to_json(const Value& v);
Value value_from_json(const Json& j);  // throws SchemaError on null/object
bool json_is_valueish(const Json& j);

Json argmap_to_json(const ArgMap& args);
ArgMap argmap_from_json(const Json& j);

// "k=v" rendering for prompt echoes and trace lines. Values render in
// canonical text form; nested objects fall back to compact JSON. When a
// parameter order is supplied those keys come first, extras follow sorted.
std::string render_json_arg(const Json& j);
std::string render_args_str(const Json& args,
                            const std::vector<std::string>* param_order = nullptr);

}  // namespace flowforge
