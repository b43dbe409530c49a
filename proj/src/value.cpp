// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>

#include "flowforge/text.hpp"

namespace flowforge {

const char* type_name(TypeTag tag) {
  switch (tag) {
    case TypeTag::Number: return "number";
    case TypeTag::Text: return "text";
    case TypeTag::Boolean: return "boolean";
    case TypeTag::List: return "list";
  }
  return "unknown";
}

TypeTag Value::tag() const {
  if (is_number()) return TypeTag::Number;
  if (is_text()) return TypeTag::Text;
  if (is_boolean()) return TypeTag::Boolean;
  return TypeTag::List;
}

double Value::as_number() const {
  if (!is_number()) raise(Errc::TypeError, "value is not a number");
  return std::get<double>(data_);
}

const std::string& Value::as_text() const {
  if (!is_text()) raise(Errc::TypeError, "value is not text");
  return std::get<std::string>(data_);
}

bool Value::as_boolean() const {
  if (!is_boolean()) raise(Errc::TypeError, "value is not a boolean");
  return std::get<bool>(data_);
}

const Value::List& Value::as_list() const {
  if (!is_list()) raise(Errc::TypeError, "value is not a list");
  return std::get<List>(data_);
}

namespace {
constexpr double kMaxExactInt = 9007199254740992.0;  // 2^53
}

std::string render_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == std::floor(v) && std::fabs(v) < kMaxExactInt) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string canonical_text(const Value& v) {
  switch (v.tag()) {
    case TypeTag::Number:
      return render_number(v.as_number());
    case TypeTag::Boolean:
      return v.as_boolean() ? "true" : "false";
    case TypeTag::Text:
      return trim(v.as_text());
    case TypeTag::List: {
      std::vector<std::string> parts;
      parts.reserve(v.as_list().size());
      for (const Value& e : v.as_list()) parts.push_back(canonical_text(e));
      return "[" + join(parts, ", ") + "]";
    }
  }
  return "";
}

Json to_json(const Value& v) {
  switch (v.tag()) {
    case TypeTag::Number: {
      double d = v.as_number();
      if (d == std::floor(d) && std::fabs(d) < kMaxExactInt) {
        return Json(static_cast<std::int64_t>(d));
      }
      return Json(d);
    }
    case TypeTag::Text:
      return Json(v.as_text());
    case TypeTag::Boolean:
      return Json(v.as_boolean());
    case TypeTag::List: {
      Json arr = Json::array();
      for (const Value& e : v.as_list()) arr.push_back(to_json(e));
      return arr;
    }
  }
  return Json();
}

bool json_is_valueish(const Json& j) {
  if (j.is_number() || j.is_string() || j.is_boolean()) return true;
  if (j.is_array()) {
    for (const Json& e : j) {
      if (!json_is_valueish(e)) return false;
    }
    return true;
  }
  return false;
}

Value value_from_json(const Json& j) {
  if (j.is_number()) return Value::number(j.get<double>());
  if (j.is_string()) return Value::text(j.get<std::string>());
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_array()) {
    Value::List out;
    out.reserve(j.size());
    for (const Json& e : j) out.push_back(value_from_json(e));
    return Value::list(std::move(out));
  }
  raise(Errc::SchemaError,
        std::string("cannot convert JSON ") + j.type_name() + " to a value");
}

Json argmap_to_json(const ArgMap& args) {
  Json obj = Json::object();
  for (const auto& [k, v] : args) obj[k] = to_json(v);
  return obj;
}

ArgMap argmap_from_json(const Json& j) {
  if (!j.is_object()) raise(Errc::SchemaError, "argument map must be a JSON object");
  ArgMap out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.emplace(it.key(), value_from_json(it.value()));
  }
  return out;
}

std::string render_json_arg(const Json& j) {
  if (j.is_object() || j.is_null()) return j.dump();
  return canonical_text(value_from_json(j));
}

std::string render_args_str(const Json& args, const std::vector<std::string>* param_order) {
  if (!args.is_object()) return render_json_arg(args);
  std::vector<std::string> parts;
  std::vector<std::string> done;
  if (param_order != nullptr) {
    for (const std::string& name : *param_order) {
      if (args.contains(name)) {
        parts.push_back(name + "=" + render_json_arg(args.at(name)));
        done.push_back(name);
      }
    }
  }
  for (auto it = args.begin(); it != args.end(); ++it) {
    bool seen = false;
    for (const std::string& d : done) {
      if (d == it.key()) { seen = true; break; }
    }
    if (!seen) parts.push_back(it.key() + "=" + render_json_arg(it.value()));
  }
  return join(parts, ", ");
}

// --- text.hpp implementations -------------------------------------------

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  if (from.empty()) return text;
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& data) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(data);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::DuplicateStart: return "DuplicateStart";
    case Errc::DuplicateEnd: return "DuplicateEnd";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::SchemaError: return "SchemaError";
    case Errc::InvalidGraph: return "InvalidGraph";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnboundIdentifier: return "UnboundIdentifier";
    case Errc::TypeError: return "TypeError";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NanComparison: return "NanComparison";
    case Errc::DuplicateTool: return "DuplicateTool";
    case Errc::UnknownTool: return "UnknownTool";
    case Errc::UnknownCategory: return "UnknownCategory";
    case Errc::ToolError: return "ToolError";
    case Errc::TransportError: return "TransportError";
    case Errc::TimeoutError: return "TimeoutError";
    case Errc::ProviderError: return "ProviderError";
    case Errc::TranscriptExhausted: return "TranscriptExhausted";
    case Errc::ParseFailure: return "ParseFailure";
    case Errc::FormatExhausted: return "FormatExhausted";
    case Errc::UnboundKey: return "UnboundKey";
    case Errc::ExprError: return "ExprError";
    case Errc::AmbiguousSuccessor: return "AmbiguousSuccessor";
    case Errc::LoopCapExceeded: return "LoopCapExceeded";
    case Errc::LlmNodeUnsupported: return "LlmNodeUnsupported";
    case Errc::NoTracesToSummarize: return "NoTracesToSummarize";
    case Errc::UnknownBaseline: return "UnknownBaseline";
    case Errc::CalledOnPassingCase: return "CalledOnPassingCase";
    case Errc::DepthExhausted: return "DepthExhausted";
    case Errc::DuplicateInstanceId: return "DuplicateInstanceId";
    case Errc::EmptyRun: return "EmptyRun";
    case Errc::Precondition: return "Precondition";
  }
  return "Unknown";
}

}  // namespace flowforge
