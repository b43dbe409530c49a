// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/tools.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>

#include "flowforge/text.hpp"

namespace flowforge {

const char* partition_name(Partition p) {
  switch (p) {
    case Partition::Business: return "business";
    case Partition::GraphConstruction: return "graph";
    case Partition::Terminal: return "terminal";
  }
  return "unknown";
}

const char* param_type_name(ParamType t) {
  switch (t) {
    case ParamType::Number: return "number";
    case ParamType::Text: return "text";
    case ParamType::Boolean: return "boolean";
    case ParamType::List: return "list";
    case ParamType::Object: return "object";
    case ParamType::Any: return "any";
  }
  return "unknown";
}

std::vector<std::string> ToolSpec::param_names() const {
  std::vector<std::string> out;
  out.reserve(params.size());
  for (const ToolParam& p : params) out.push_back(p.name);
  return out;
}

namespace {

bool type_matches(ParamType t, const Json& j) {
  switch (t) {
    case ParamType::Number: return j.is_number();
    case ParamType::Text: return j.is_string();
    case ParamType::Boolean: return j.is_boolean();
    case ParamType::List: return j.is_array();
    case ParamType::Object: return j.is_object();
    case ParamType::Any: return !j.is_null();
  }
  return false;
}

ToolSpec finish_spec() {
  ToolSpec s;
  s.name = kFinishTool;
  s.description = "Complete the task and output your final answer";
  s.params = {{"answer", ParamType::Any, "The final answer to the task", true}};
  s.returns = "The final answer, echoed back";
  s.partition = Partition::Terminal;
  return s;
}

}  // namespace

ToolRegistry::ToolRegistry() {
  register_tool(finish_spec(), [](const Json& args) { return value_from_json(args.at("answer")); });
}

void ToolRegistry::register_tool(ToolSpec spec, ToolFn fn) {
  if (tools_.count(spec.name) != 0) {
    raise(Errc::DuplicateTool, "tool '" + spec.name + "' is already registered");
  }
  order_.push_back(spec.name);
  std::string name = spec.name;
  tools_.emplace(name, std::make_pair(std::move(spec), std::move(fn)));
}

bool ToolRegistry::contains(const std::string& name) const { return tools_.count(name) != 0; }

const ToolSpec* ToolRegistry::find(const std::string& name) const {
  auto it = tools_.find(name);
  return it == tools_.end() ? nullptr : &it->second.first;
}

std::optional<Partition> ToolRegistry::partition_of(const std::string& name) const {
  const ToolSpec* spec = find(name);
  if (spec == nullptr) return std::nullopt;
  return spec->partition;
}

Value ToolRegistry::execute(const std::string& name, const Json& args) const {
  auto it = tools_.find(name);
  if (it == tools_.end()) {
    throw ToolError(Errc::UnknownTool, name, args, "unknown function '" + name + "'", "");
  }
  const ToolSpec& spec = it->second.first;
  std::string sig = signature_info(name);

  if (!args.is_object()) {
    throw ToolError(Errc::ToolError, name, args, "arguments must be a JSON object", sig);
  }
  // Exact name match: required params present, no extras.
  std::vector<std::string> expected = spec.param_names();
  for (const ToolParam& p : spec.params) {
    if (p.required && !args.contains(p.name)) {
      throw ToolError(Errc::ToolError, name, args,
                      "missing required parameter '" + p.name + "' (expected: " +
                          join(expected, ", ") + ")",
                      sig);
    }
  }
  for (auto jt = args.begin(); jt != args.end(); ++jt) {
    if (std::find(expected.begin(), expected.end(), jt.key()) == expected.end()) {
      throw ToolError(Errc::ToolError, name, args,
                      "unexpected parameter '" + jt.key() + "' (expected: " +
                          join(expected, ", ") + ")",
                      sig);
    }
  }
  for (const ToolParam& p : spec.params) {
    if (args.contains(p.name) && !type_matches(p.type, args.at(p.name))) {
      throw ToolError(Errc::ToolError, name, args,
                      "parameter '" + p.name + "' expects " + param_type_name(p.type) +
                          ", got " + args.at(p.name).type_name(),
                      sig);
    }
  }

  try {
    return it->second.second(args);
  } catch (const ToolError&) {
    throw;
  } catch (const Error& e) {
    throw ToolError(Errc::ToolError, name, args, e.what(), sig);
  }
}

std::string ToolRegistry::render_signatures(std::initializer_list<Partition> parts) const {
  std::vector<std::string> blocks;
  for (const std::string& name : order_) {
    const ToolSpec& spec = tools_.at(name).first;
    bool keep = false;
    for (Partition p : parts) {
      if (spec.partition == p) keep = true;
    }
    if (!keep) continue;
    std::string block = "Name: " + spec.name + "\nDescription: " + spec.description + "\n";
    if (spec.params.empty()) {
      block += "Parameters: (none)\n";
    } else {
      block += "Parameters:\n";
      for (const ToolParam& p : spec.params) {
        block += "- " + p.name + " (" + param_type_name(p.type) +
                 (p.required ? "" : ", optional") + "): " + p.description + "\n";
      }
    }
    block += "Returns: " + spec.returns;
    blocks.push_back(block);
  }
  return join(blocks, "\n\n");
}

std::string ToolRegistry::render_signatures() const {
  return render_signatures({Partition::Business, Partition::GraphConstruction, Partition::Terminal});
}

std::string ToolRegistry::signature_info(const std::string& name) const {
  const ToolSpec* spec = find(name);
  if (spec == nullptr) return "";
  std::string out = "**Correct function signature**:\n";
  out += "  " + spec->name + "(" + join(spec->param_names(), ", ") + ")\n";
  out += "  Parameters:\n";
  for (const ToolParam& p : spec->params) {
    out += "    - " + p.name + ": " + p.description + "\n";
  }
  out += "  Description: " + spec->description;
  return out;
}

std::vector<const ToolSpec*> ToolRegistry::specs() const {
  std::vector<const ToolSpec*> out;
  for (const std::string& name : order_) out.push_back(&tools_.at(name).first);
  return out;
}

std::set<std::string> ToolRegistry::names(std::optional<Partition> part) const {
  std::set<std::string> out;
  for (const auto& [name, entry] : tools_) {
    if (!part.has_value() || entry.first.partition == *part) out.insert(name);
  }
  return out;
}

ToolRegistry ToolRegistry::filtered(std::initializer_list<Partition> parts) const {
  ToolRegistry out;
  for (const std::string& name : order_) {
    const auto& [spec, fn] = tools_.at(name);
    if (spec.partition == Partition::Terminal) continue;  // finish pre-registered
    bool keep = false;
    for (Partition p : parts) {
      if (spec.partition == p) keep = true;
    }
    if (keep) out.register_tool(spec, fn);
  }
  return out;
}

ToolRegistry ToolRegistry::subset(const std::set<std::string>& keep) const {
  ToolRegistry out;
  for (const std::string& name : order_) {
    const auto& [spec, fn] = tools_.at(name);
    if (spec.partition == Partition::Terminal) continue;  // finish pre-registered
    if (keep.count(name) != 0) out.register_tool(spec, fn);
  }
  return out;
}

// --- builtin suites ---------------------------------------------------------

namespace {

double arg_num(const Json& args, const char* name) { return args.at(name).get<double>(); }
std::string arg_text(const Json& args, const char* name) { return args.at(name).get<std::string>(); }
bool arg_bool(const Json& args, const char* name) { return args.at(name).get<bool>(); }

Value::List arg_list(const Json& args, const char* name) {
  return value_from_json(args.at(name)).as_list();
}

std::vector<double> arg_num_list(const Json& args, const char* name) {
  std::vector<double> out;
  for (const Json& e : args.at(name)) {
    if (!e.is_number()) raise(Errc::ToolError, std::string("list parameter '") + name + "' must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

long long require_integral(double v, const char* what) {
  if (v != std::floor(v)) {
    raise(Errc::ToolError, std::string(what) + " must be an integer, got " + render_number(v));
  }
  return static_cast<long long>(v);
}

ToolSpec spec2(const char* name, const char* desc, std::vector<ToolParam> params,
               const char* returns) {
  ToolSpec s;
  s.name = name;
  s.description = desc;
  s.params = std::move(params);
  s.returns = returns;
  s.partition = Partition::Business;
  return s;
}

std::vector<std::pair<ToolSpec, ToolFn>> math_suite() {
  std::vector<std::pair<ToolSpec, ToolFn>> out;
  out.emplace_back(spec2("add", "Add two numbers together",
                         {{"a", ParamType::Number, "First number to add"},
                          {"b", ParamType::Number, "Second number to add"}},
                         "The sum of a and b"),
                   [](const Json& a) { return Value::number(arg_num(a, "a") + arg_num(a, "b")); });
  out.emplace_back(spec2("sub", "Subtract the second number from the first",
                         {{"a", ParamType::Number, "Number to subtract from"},
                          {"b", ParamType::Number, "Number to subtract"}},
                         "The difference a - b"),
                   [](const Json& a) { return Value::number(arg_num(a, "a") - arg_num(a, "b")); });
  out.emplace_back(spec2("mul", "Multiply two numbers",
                         {{"a", ParamType::Number, "First factor"},
                          {"b", ParamType::Number, "Second factor"}},
                         "The product a * b"),
                   [](const Json& a) { return Value::number(arg_num(a, "a") * arg_num(a, "b")); });
  out.emplace_back(spec2("div", "Divide the first number by the second",
                         {{"a", ParamType::Number, "Dividend"},
                          {"b", ParamType::Number, "Divisor"}},
                         "The quotient a / b"),
                   [](const Json& a) {
                     double b = arg_num(a, "b");
                     if (b == 0.0) raise(Errc::ToolError, "division by zero");
                     return Value::number(arg_num(a, "a") / b);
                   });
  out.emplace_back(spec2("sqrt", "Compute the square root of a number",
                         {{"x", ParamType::Number, "Number to take the square root of"}},
                         "The square root of x"),
                   [](const Json& a) {
                     double x = arg_num(a, "x");
                     if (x < 0.0) raise(Errc::ToolError, "cannot take the square root of a negative number");
                     return Value::number(std::sqrt(x));
                   });
  out.emplace_back(spec2("round_to", "Round a number to a given number of decimal digits",
                         {{"x", ParamType::Number, "Number to round"},
                          {"digits", ParamType::Number, "Number of decimal digits (0-12)"}},
                         "x rounded half-to-even to the given digits"),
                   [](const Json& a) {
                     double x = arg_num(a, "x");
                     long long digits = require_integral(arg_num(a, "digits"), "digits");
                     if (digits < 0 || digits > 12) {
                       raise(Errc::ToolError, "digits must be between 0 and 12");
                     }
                     double scale = std::pow(10.0, static_cast<double>(digits));
                     // nearbyint honours the default to-nearest-even mode.
                     return Value::number(std::nearbyint(x * scale) / scale);
                   });
  out.emplace_back(spec2("abs_diff", "Compute the absolute difference of two numbers",
                         {{"a", ParamType::Number, "First number"},
                          {"b", ParamType::Number, "Second number"}},
                         "The absolute value of a - b"),
                   [](const Json& a) {
                     return Value::number(std::fabs(arg_num(a, "a") - arg_num(a, "b")));
                   });
  out.emplace_back(spec2("pow", "Raise a base to an exponent",
                         {{"base", ParamType::Number, "The base"},
                          {"exp", ParamType::Number, "The exponent"}},
                         "base raised to exp"),
                   [](const Json& a) {
                     double r = std::pow(arg_num(a, "base"), arg_num(a, "exp"));
                     if (!std::isfinite(r)) raise(Errc::ToolError, "result is not a finite number");
                     return Value::number(r);
                   });
  return out;
}

std::vector<std::pair<ToolSpec, ToolFn>> string_suite() {
  std::vector<std::pair<ToolSpec, ToolFn>> out;
  out.emplace_back(spec2("concat", "Concatenate two strings",
                         {{"a", ParamType::Text, "First string"},
                          {"b", ParamType::Text, "Second string"}},
                         "The concatenation a + b"),
                   [](const Json& a) { return Value::text(arg_text(a, "a") + arg_text(a, "b")); });
  out.emplace_back(spec2("split", "Split a string on a separator",
                         {{"s", ParamType::Text, "String to split"},
                          {"sep", ParamType::Text, "Separator (must be non-empty)"}},
                         "The list of pieces"),
                   [](const Json& a) {
                     std::string s = arg_text(a, "s");
                     std::string sep = arg_text(a, "sep");
                     if (sep.empty()) raise(Errc::ToolError, "separator must be non-empty");
                     Value::List pieces;
                     std::size_t pos = 0;
                     while (true) {
                       std::size_t next = s.find(sep, pos);
                       if (next == std::string::npos) {
                         pieces.push_back(Value::text(s.substr(pos)));
                         break;
                       }
                       pieces.push_back(Value::text(s.substr(pos, next - pos)));
                       pos = next + sep.size();
                     }
                     return Value::list(std::move(pieces));
                   });
  out.emplace_back(spec2("upper", "Convert a string to uppercase",
                         {{"s", ParamType::Text, "String to convert"}}, "The uppercased string"),
                   [](const Json& a) {
                     std::string s = arg_text(a, "s");
                     for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                     return Value::text(std::move(s));
                   });
  out.emplace_back(spec2("lower", "Convert a string to lowercase",
                         {{"s", ParamType::Text, "String to convert"}}, "The lowercased string"),
                   [](const Json& a) {
                     std::string s = arg_text(a, "s");
                     for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                     return Value::text(std::move(s));
                   });
  out.emplace_back(spec2("reverse", "Reverse a string",
                         {{"s", ParamType::Text, "String to reverse"}}, "The reversed string"),
                   [](const Json& a) {
                     std::string s = arg_text(a, "s");
                     std::reverse(s.begin(), s.end());
                     return Value::text(std::move(s));
                   });
  out.emplace_back(spec2("substring", "Extract the substring [start, end) of a string",
                         {{"s", ParamType::Text, "Source string"},
                          {"start", ParamType::Number, "Start index (0-based, inclusive)"},
                          {"end", ParamType::Number, "End index (exclusive)"}},
                         "The substring, clamped to the string bounds"),
                   [](const Json& a) {
                     std::string s = arg_text(a, "s");
                     long long start = require_integral(arg_num(a, "start"), "start");
                     long long end = require_integral(arg_num(a, "end"), "end");
                     long long n = static_cast<long long>(s.size());
                     start = std::clamp(start, 0LL, n);
                     end = std::clamp(end, 0LL, n);
                     if (start >= end) return Value::text("");
                     return Value::text(s.substr(static_cast<std::size_t>(start),
                                                 static_cast<std::size_t>(end - start)));
                   });
  out.emplace_back(spec2("length", "Get the length of a string",
                         {{"s", ParamType::Text, "String to measure"}}, "The number of characters"),
                   [](const Json& a) {
                     return Value::number(static_cast<double>(arg_text(a, "s").size()));
                   });
  out.emplace_back(spec2("replace", "Replace every occurrence of a substring",
                         {{"s", ParamType::Text, "Source string"},
                          {"old", ParamType::Text, "Substring to replace (must be non-empty)"},
                          {"new", ParamType::Text, "Replacement"}},
                         "The string with all occurrences replaced"),
                   [](const Json& a) {
                     std::string old = arg_text(a, "old");
                     if (old.empty()) raise(Errc::ToolError, "'old' must be non-empty");
                     return Value::text(replace_all(arg_text(a, "s"), old, arg_text(a, "new")));
                   });
  return out;
}

std::vector<std::pair<ToolSpec, ToolFn>> data_suite() {
  std::vector<std::pair<ToolSpec, ToolFn>> out;
  out.emplace_back(spec2("sum_list", "Calculate the sum of a list of numbers",
                         {{"xs", ParamType::List, "List of numbers"}},
                         "The sum (0 for an empty list)"),
                   [](const Json& a) {
                     double total = 0.0;
                     for (double v : arg_num_list(a, "xs")) total += v;
                     return Value::number(total);
                   });
  out.emplace_back(spec2("sort_list", "Sort a list in ascending order",
                         {{"xs", ParamType::List, "List of numbers or list of strings"}},
                         "The sorted list"),
                   [](const Json& a) {
                     Value::List xs = arg_list(a, "xs");
                     bool all_num = std::all_of(xs.begin(), xs.end(),
                                                [](const Value& v) { return v.is_number(); });
                     bool all_text = std::all_of(xs.begin(), xs.end(),
                                                 [](const Value& v) { return v.is_text(); });
                     if (!all_num && !all_text) {
                       raise(Errc::ToolError, "list must be all numbers or all strings");
                     }
                     std::sort(xs.begin(), xs.end(), [](const Value& l, const Value& r) {
                       return l.is_number() ? l.as_number() < r.as_number()
                                            : l.as_text() < r.as_text();
                     });
                     return Value::list(std::move(xs));
                   });
  out.emplace_back(spec2("filter_gt", "Keep the numbers strictly greater than a threshold",
                         {{"xs", ParamType::List, "List of numbers"},
                          {"threshold", ParamType::Number, "Threshold"}},
                         "The filtered list, in original order"),
                   [](const Json& a) {
                     double t = arg_num(a, "threshold");
                     Value::List kept;
                     for (double v : arg_num_list(a, "xs")) {
                       if (v > t) kept.push_back(Value::number(v));
                     }
                     return Value::list(std::move(kept));
                   });
  out.emplace_back(spec2("map_scale", "Multiply every number in a list by a factor",
                         {{"xs", ParamType::List, "List of numbers"},
                          {"factor", ParamType::Number, "Scale factor"}},
                         "The scaled list"),
                   [](const Json& a) {
                     double f = arg_num(a, "factor");
                     Value::List scaled;
                     for (double v : arg_num_list(a, "xs")) scaled.push_back(Value::number(v * f));
                     return Value::list(std::move(scaled));
                   });
  out.emplace_back(spec2("max_of", "Find the largest number in a list",
                         {{"xs", ParamType::List, "List of numbers (must be non-empty)"}},
                         "The maximum"),
                   [](const Json& a) {
                     auto xs = arg_num_list(a, "xs");
                     if (xs.empty()) raise(Errc::ToolError, "cannot take the maximum of an empty list");
                     return Value::number(*std::max_element(xs.begin(), xs.end()));
                   });
  out.emplace_back(spec2("min_of", "Find the smallest number in a list",
                         {{"xs", ParamType::List, "List of numbers (must be non-empty)"}},
                         "The minimum"),
                   [](const Json& a) {
                     auto xs = arg_num_list(a, "xs");
                     if (xs.empty()) raise(Errc::ToolError, "cannot take the minimum of an empty list");
                     return Value::number(*std::min_element(xs.begin(), xs.end()));
                   });
  out.emplace_back(spec2("count", "Count the elements of a list",
                         {{"xs", ParamType::List, "List of values"}}, "The number of elements"),
                   [](const Json& a) {
                     return Value::number(static_cast<double>(arg_list(a, "xs").size()));
                   });
  out.emplace_back(spec2("unique", "Remove duplicate values from a list, keeping first occurrences",
                         {{"xs", ParamType::List, "List of values"}}, "The deduplicated list"),
                   [](const Json& a) {
                     Value::List xs = arg_list(a, "xs");
                     Value::List uniq;
                     for (const Value& v : xs) {
                       if (std::find(uniq.begin(), uniq.end(), v) == uniq.end()) uniq.push_back(v);
                     }
                     return Value::list(std::move(uniq));
                   });
  return out;
}

std::vector<std::pair<ToolSpec, ToolFn>> logic_suite() {
  auto bool_list = [](const Json& a, const char* name) {
    std::vector<bool> out;
    for (const Json& e : a.at(name)) {
      if (!e.is_boolean()) {
        raise(Errc::ToolError, std::string("list parameter '") + name + "' must contain only booleans");
      }
      out.push_back(e.get<bool>());
    }
    return out;
  };

  std::vector<std::pair<ToolSpec, ToolFn>> out;
  out.emplace_back(spec2("and_all", "Check whether every boolean in a list is true",
                         {{"xs", ParamType::List, "List of booleans"}},
                         "true when all values are true (true for an empty list)"),
                   [bool_list](const Json& a) {
                     for (bool b : bool_list(a, "xs")) {
                       if (!b) return Value::boolean(false);
                     }
                     return Value::boolean(true);
                   });
  out.emplace_back(spec2("or_any", "Check whether any boolean in a list is true",
                         {{"xs", ParamType::List, "List of booleans"}},
                         "true when at least one value is true (false for an empty list)"),
                   [bool_list](const Json& a) {
                     for (bool b : bool_list(a, "xs")) {
                       if (b) return Value::boolean(true);
                     }
                     return Value::boolean(false);
                   });
  out.emplace_back(spec2("not_val", "Negate a boolean",
                         {{"x", ParamType::Boolean, "Boolean to negate"}}, "The negation"),
                   [](const Json& a) { return Value::boolean(!arg_bool(a, "x")); });
  out.emplace_back(spec2("xor", "Exclusive-or of two booleans",
                         {{"a", ParamType::Boolean, "First boolean"},
                          {"b", ParamType::Boolean, "Second boolean"}},
                         "true when exactly one input is true"),
                   [](const Json& a) { return Value::boolean(arg_bool(a, "a") != arg_bool(a, "b")); });
  out.emplace_back(spec2("implies", "Logical implication a -> b",
                         {{"a", ParamType::Boolean, "Antecedent"},
                          {"b", ParamType::Boolean, "Consequent"}},
                         "false only when a is true and b is false"),
                   [](const Json& a) { return Value::boolean(!arg_bool(a, "a") || arg_bool(a, "b")); });
  out.emplace_back(spec2("equals", "Check two values for equality",
                         {{"a", ParamType::Any, "First value"},
                          {"b", ParamType::Any, "Second value"}},
                         "true when both values have the same type and content"),
                   [](const Json& a) {
                     Value lhs = value_from_json(a.at("a"));
                     Value rhs = value_from_json(a.at("b"));
                     return Value::boolean(lhs == rhs);
                   });
  out.emplace_back(spec2("greater", "Check whether the first number is greater than the second",
                         {{"a", ParamType::Number, "First number"},
                          {"b", ParamType::Number, "Second number"}},
                         "true when a > b"),
                   [](const Json& a) { return Value::boolean(arg_num(a, "a") > arg_num(a, "b")); });
  out.emplace_back(spec2("select_if", "Select one of two values based on a condition",
                         {{"cond", ParamType::Boolean, "Selector"},
                          {"a", ParamType::Any, "Value returned when cond is true"},
                          {"b", ParamType::Any, "Value returned when cond is false"}},
                         "a when cond is true, b otherwise"),
                   [](const Json& a) {
                     return value_from_json(arg_bool(a, "cond") ? a.at("a") : a.at("b"));
                   });
  return out;
}

}  // namespace

std::vector<std::pair<ToolSpec, ToolFn>> builtin_suite(const std::string& category) {
  if (category == "math") return math_suite();
  if (category == "string") return string_suite();
  if (category == "data") return data_suite();
  if (category == "logic") return logic_suite();
  raise(Errc::UnknownCategory, "unknown tool category '" + category + "'");
}

void add_builtin_suite(ToolRegistry& registry, const std::string& category) {
  for (auto& [spec, fn] : builtin_suite(category)) {
    registry.register_tool(std::move(spec), std::move(fn));
  }
}

ToolRegistry full_builtin_registry() {
  ToolRegistry reg;
  for (const char* cat : {"math", "string", "data", "logic"}) add_builtin_suite(reg, cat);
  return reg;
}

// --- graph-construction tools -----------------------------------------------

namespace {

ToolSpec gspec(const char* name, const char* desc, std::vector<ToolParam> params,
               const char* returns) {
  ToolSpec s;
  s.name = name;
  s.description = desc;
  s.params = std::move(params);
  s.returns = returns;
  s.partition = Partition::GraphConstruction;
  return s;
}

}  // namespace

void register_graph_tools(ToolRegistry& registry, WorkflowGraph& graph) {
  WorkflowGraph* g = &graph;
  registry.register_tool(
      gspec("add_start_node", "Add the start node holding the workflow's initial data",
            {{"initial_data", ParamType::Object, "Map of data-store key to initial value"}},
            "Confirmation with the new node id"),
      [g](const Json& args) {
        std::map<std::string, Value> data;
        for (auto it = args.at("initial_data").begin(); it != args.at("initial_data").end(); ++it) {
          if (!json_is_valueish(it.value())) {
            raise(Errc::ToolError, "initial_data value for key '" + it.key() +
                                       "' must be a number, string, boolean, or list");
          }
          data[it.key()] = value_from_json(it.value());
        }
        std::string id = g->add_start_node(std::move(data));
        return Value::text("Added start node '" + id + "'");
      });
  registry.register_tool(
      gspec("add_function_node", "Add a function-call node for one business tool invocation",
            {{"id", ParamType::Text, "Unique node id"},
             {"function", ParamType::Text, "Business tool name to call"},
             {"input_keys", ParamType::Object, "Map of parameter name to data-store key"},
             {"output_key", ParamType::Text, "Data-store key that receives the result"}},
            "Confirmation with the new node id"),
      [g](const Json& args) {
        std::map<std::string, std::string> keys;
        for (auto it = args.at("input_keys").begin(); it != args.at("input_keys").end(); ++it) {
          if (!it.value().is_string()) {
            raise(Errc::ToolError, "input_keys value for parameter '" + it.key() +
                                       "' must be a data-store key string");
          }
          keys[it.key()] = it.value().get<std::string>();
        }
        std::string id = g->add_function_node(args.at("id").get<std::string>(),
                                              args.at("function").get<std::string>(),
                                              std::move(keys),
                                              args.at("output_key").get<std::string>());
        return Value::text("Added function node '" + id + "'");
      });
  registry.register_tool(
      gspec("add_condition_node", "Add a condition node that branches on an expression",
            {{"id", ParamType::Text, "Unique node id"},
             {"condition_expr", ParamType::Text,
              "Boolean expression over data-store keys, e.g. \"abs_diff < 0.001\""}},
            "Confirmation with the new node id"),
      [g](const Json& args) {
        std::string id = g->add_condition_node(args.at("id").get<std::string>(),
                                               args.at("condition_expr").get<std::string>());
        return Value::text("Added condition node '" + id + "'");
      });
  registry.register_tool(
      gspec("add_edge", "Connect two nodes with an edge",
            {{"from", ParamType::Text, "Source node id"},
             {"to", ParamType::Text, "Target node id"},
             {"label", ParamType::Text,
              "Branch label (\"true\" or \"false\") for edges leaving a condition node", false}},
            "Confirmation with the edge endpoints"),
      [g](const Json& args) {
        std::string label = args.contains("label") ? args.at("label").get<std::string>() : "";
        g->add_edge(args.at("from").get<std::string>(), args.at("to").get<std::string>(), label);
        std::string text = "Added edge " + args.at("from").get<std::string>() + " -> " +
                           args.at("to").get<std::string>();
        if (!label.empty()) text += " [" + label + "]";
        return Value::text(text);
      });
  registry.register_tool(
      gspec("add_end_node", "Add the end node that yields the workflow result",
            {{"result_key", ParamType::Text,
              "Data-store key holding the final answer; defaults to the last written output_key",
              false}},
            "Confirmation with the new node id"),
      [g](const Json& args) {
        std::optional<std::string> key;
        if (args.contains("result_key")) key = args.at("result_key").get<std::string>();
        std::string id = g->add_end_node(std::move(key));
        return Value::text("Added end node '" + id + "'");
      });
}

}  // namespace flowforge
