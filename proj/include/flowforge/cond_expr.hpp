// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>

#include "flowforge/errors.hpp"
#include "flowforge/value.hpp"

namespace flowforge::expr {

// Mini-language for Condition nodes. Precedence, low to high:
//   or < and < not < comparison < add/sub < mul/div < unary minus < atom
// Comparisons are non-associative; "a < b < c" is a syntax error.

enum class BinOp { Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div, And, Or };
enum class UnOp { Not, Neg };

const char* binop_text(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct Num { double value; };
  struct Str { std::string value; };
  struct BoolLit { bool value; };
  struct Ident {
    std::string name;
    int position;  // 1-based source column, for diagnostics
  };
  struct Unary { UnOp op; ExprPtr operand; };
  struct Binary { BinOp op; ExprPtr lhs; ExprPtr rhs; };

  std::variant<Num, Str, BoolLit, Ident, Unary, Binary> node;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int position, const std::string& message)
      : Error(Errc::SyntaxError, message), position_(position) {}
  int position() const { return position_; }

 private:
  int position_;
};

class EvalError : public Error {
 public:
  EvalError(Errc code, const std::string& message, std::string detail = "")
      : Error(code, message), detail_(std::move(detail)) {}
  // The unbound identifier name / offending operator, when applicable.
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
};

ExprPtr parse(const std::string& source);

// Fully parenthesized canonical form; parse(pretty_print(e)) is structurally
// equal to e.
std::string pretty_print(const Expr& e);
inline std::string pretty_print(const ExprPtr& e) { return pretty_print(*e); }

bool structurally_equal(const Expr& a, const Expr& b);

// Strict typing, short-circuit and/or, top-level result must be boolean.
bool eval(const Expr& e, const std::map<std::string, Value>& store);
inline bool eval(const ExprPtr& e, const std::map<std::string, Value>& store) {
  return eval(*e, store);
}
Value eval_value(const Expr& e, const std::map<std::string, Value>& store);

}  // namespace flowforge::expr
