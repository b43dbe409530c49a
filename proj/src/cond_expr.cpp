// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "flowforge/cond_expr.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace flowforge::expr {

const char* binop_text(BinOp op) {
  switch (op) {
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
  }
  return "?";
}

namespace {

enum class Tok {
  Num, Str, Ident, True, False, And, Or, Not,
  Eq, Ne, Lt, Le, Gt, Ge, Plus, Minus, Star, Slash, LParen, RParen, End,
};

struct Token {
  Tok kind;
  double num = 0.0;
  std::string text;
  int pos = 0;  // 1-based column of the first character
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      int pos = column();
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, 0.0, "", pos});
        return out;
      }
      char c = src_[i_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(number(pos));
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(ident(pos));
      } else if (c == '"' || c == '\'') {
        out.push_back(string_lit(pos));
      } else if (c == '<' || c == '>' || c == '=' || c == '!') {
        out.push_back(cmp_cluster(pos));
      } else {
        switch (c) {
          case '+': ++i_; out.push_back({Tok::Plus, 0.0, "+", pos}); break;
          case '-': ++i_; out.push_back({Tok::Minus, 0.0, "-", pos}); break;
          case '*': ++i_; out.push_back({Tok::Star, 0.0, "*", pos}); break;
          case '/': ++i_; out.push_back({Tok::Slash, 0.0, "/", pos}); break;
          case '(': ++i_; out.push_back({Tok::LParen, 0.0, "(", pos}); break;
          case ')': ++i_; out.push_back({Tok::RParen, 0.0, ")", pos}); break;
          default:
            throw SyntaxError(pos, "unexpected character '" + std::string(1, c) +
                                       "' at column " + std::to_string(pos));
        }
      }
    }
  }

 private:
  int column() const { return static_cast<int>(i_) + 1; }

  void skip_ws() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
  }

  Token number(int pos) {
    std::size_t start = i_;
    while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
    if (i_ < src_.size() && src_[i_] == '.') {
      ++i_;
      if (i_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[i_]))) {
        throw SyntaxError(column(), "expected digits after decimal point at column " +
                                        std::to_string(column()));
      }
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
    }
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      ++i_;
      if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) ++i_;
      if (i_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[i_]))) {
        throw SyntaxError(column(), "malformed exponent at column " + std::to_string(column()));
      }
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
    }
    std::string lit = src_.substr(start, i_ - start);
    return {Tok::Num, std::stod(lit), lit, pos};
  }

  Token ident(int pos) {
    std::size_t start = i_;
    while (i_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
      ++i_;
    }
    std::string name = src_.substr(start, i_ - start);
    if (name == "and") return {Tok::And, 0.0, name, pos};
    if (name == "or") return {Tok::Or, 0.0, name, pos};
    if (name == "not") return {Tok::Not, 0.0, name, pos};
    if (name == "true") return {Tok::True, 0.0, name, pos};
    if (name == "false") return {Tok::False, 0.0, name, pos};
    return {Tok::Ident, 0.0, name, pos};
  }

  Token string_lit(int pos) {
    char quote = src_[i_];
    ++i_;
    std::string out;
    while (i_ < src_.size() && src_[i_] != quote) {
      char c = src_[i_];
      if (c == '\\') {
        ++i_;
        if (i_ >= src_.size()) break;
        switch (src_[i_]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '\\': out += '\\'; break;
          case '\'': out += '\''; break;
          case '"': out += '"'; break;
          default:
            throw SyntaxError(column(), "unknown escape at column " + std::to_string(column()));
        }
        ++i_;
      } else {
        out += c;
        ++i_;
      }
    }
    if (i_ >= src_.size()) {
      throw SyntaxError(pos, "unterminated string starting at column " + std::to_string(pos));
    }
    ++i_;  // closing quote
    return {Tok::Str, 0.0, out, pos};
  }

  // Maximal munch over comparison characters; anything other than the six
  // valid operators (e.g. ">>", "=", "!") is rejected at the cluster start.
  Token cmp_cluster(int pos) {
    std::size_t start = i_;
    while (i_ < src_.size() && (src_[i_] == '<' || src_[i_] == '>' || src_[i_] == '=' ||
                                src_[i_] == '!')) {
      ++i_;
    }
    std::string op = src_.substr(start, i_ - start);
    if (op == "==") return {Tok::Eq, 0.0, op, pos};
    if (op == "!=") return {Tok::Ne, 0.0, op, pos};
    if (op == "<") return {Tok::Lt, 0.0, op, pos};
    if (op == "<=") return {Tok::Le, 0.0, op, pos};
    if (op == ">") return {Tok::Gt, 0.0, op, pos};
    if (op == ">=") return {Tok::Ge, 0.0, op, pos};
    throw SyntaxError(pos, "unknown operator '" + op + "' at column " + std::to_string(pos));
  }

  const std::string& src_;
  std::size_t i_ = 0;
};

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ExprPtr run() {
    ExprPtr e = or_expr();
    expect(Tok::End, "end of expression");
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& advance() { return toks_[i_++]; }
  bool match(Tok kind) {
    if (peek().kind == kind) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(Tok kind, const std::string& what) {
    if (!match(kind)) {
      throw SyntaxError(peek().pos, "expected " + what + " at column " +
                                        std::to_string(peek().pos) + ", found '" +
                                        (peek().kind == Tok::End ? "<end>" : peek().text) + "'");
    }
  }

  ExprPtr or_expr() {
    ExprPtr lhs = and_expr();
    while (match(Tok::Or)) {
      ExprPtr rhs = and_expr();
      lhs = make(Expr{Expr::Binary{BinOp::Or, lhs, rhs}});
    }
    return lhs;
  }

  ExprPtr and_expr() {
    ExprPtr lhs = not_expr();
    while (match(Tok::And)) {
      ExprPtr rhs = not_expr();
      lhs = make(Expr{Expr::Binary{BinOp::And, lhs, rhs}});
    }
    return lhs;
  }

  ExprPtr not_expr() {
    if (match(Tok::Not)) {
      ExprPtr operand = not_expr();
      return make(Expr{Expr::Unary{UnOp::Not, operand}});
    }
    return comparison();
  }

  ExprPtr comparison() {
    ExprPtr lhs = additive();
    BinOp op;
    if (cmp_op(&op)) {
      const Token& tok = toks_[i_];
      advance();
      ExprPtr rhs = additive();
      BinOp dummy;
      if (cmp_op(&dummy)) {
        throw SyntaxError(peek().pos, "comparisons are non-associative (column " +
                                          std::to_string(peek().pos) + ")");
      }
      (void)tok;
      return make(Expr{Expr::Binary{op, lhs, rhs}});
    }
    return lhs;
  }

  bool cmp_op(BinOp* out) const {
    switch (peek().kind) {
      case Tok::Eq: *out = BinOp::Eq; return true;
      case Tok::Ne: *out = BinOp::Ne; return true;
      case Tok::Lt: *out = BinOp::Lt; return true;
      case Tok::Le: *out = BinOp::Le; return true;
      case Tok::Gt: *out = BinOp::Gt; return true;
      case Tok::Ge: *out = BinOp::Ge; return true;
      default: return false;
    }
  }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      BinOp op = peek().kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
      advance();
      ExprPtr rhs = multiplicative();
      lhs = make(Expr{Expr::Binary{op, lhs, rhs}});
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      BinOp op = peek().kind == Tok::Star ? BinOp::Mul : BinOp::Div;
      advance();
      ExprPtr rhs = unary();
      lhs = make(Expr{Expr::Binary{op, lhs, rhs}});
    }
    return lhs;
  }

  ExprPtr unary() {
    if (peek().kind == Tok::Minus) {
      advance();
      ExprPtr operand = unary();
      return make(Expr{Expr::Unary{UnOp::Neg, operand}});
    }
    return atom();
  }

  ExprPtr atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Num:
        advance();
        return make(Expr{Expr::Num{tok.num}});
      case Tok::Str:
        advance();
        return make(Expr{Expr::Str{tok.text}});
      case Tok::True:
        advance();
        return make(Expr{Expr::BoolLit{true}});
      case Tok::False:
        advance();
        return make(Expr{Expr::BoolLit{false}});
      case Tok::Ident:
        advance();
        return make(Expr{Expr::Ident{tok.text, tok.pos}});
      case Tok::LParen: {
        advance();
        ExprPtr inner = or_expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        throw SyntaxError(tok.pos, "expected expression at column " + std::to_string(tok.pos) +
                                       ", found '" +
                                       (tok.kind == Tok::End ? "<end>" : tok.text) + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

std::string escape_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace

ExprPtr parse(const std::string& source) {
  return Parser(Lexer(source).run()).run();
}

std::string pretty_print(const Expr& e) {
  struct Visitor {
    std::string operator()(const Expr::Num& n) const { return render_number(n.value); }
    std::string operator()(const Expr::Str& s) const { return escape_string(s.value); }
    std::string operator()(const Expr::BoolLit& b) const { return b.value ? "true" : "false"; }
    std::string operator()(const Expr::Ident& id) const { return id.name; }
    std::string operator()(const Expr::Unary& u) const {
      std::string inner = pretty_print(*u.operand);
      return u.op == UnOp::Not ? "(not " + inner + ")" : "(-" + inner + ")";
    }
    std::string operator()(const Expr::Binary& b) const {
      return "(" + pretty_print(*b.lhs) + " " + binop_text(b.op) + " " +
             pretty_print(*b.rhs) + ")";
    }
  };
  return std::visit(Visitor{}, e.node);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* n = std::get_if<Expr::Num>(&a.node)) {
    return n->value == std::get<Expr::Num>(b.node).value;
  }
  if (const auto* s = std::get_if<Expr::Str>(&a.node)) {
    return s->value == std::get<Expr::Str>(b.node).value;
  }
  if (const auto* l = std::get_if<Expr::BoolLit>(&a.node)) {
    return l->value == std::get<Expr::BoolLit>(b.node).value;
  }
  if (const auto* id = std::get_if<Expr::Ident>(&a.node)) {
    return id->name == std::get<Expr::Ident>(b.node).name;
  }
  if (const auto* u = std::get_if<Expr::Unary>(&a.node)) {
    const auto& other = std::get<Expr::Unary>(b.node);
    return u->op == other.op && structurally_equal(*u->operand, *other.operand);
  }
  const auto& ba = std::get<Expr::Binary>(a.node);
  const auto& bb = std::get<Expr::Binary>(b.node);
  return ba.op == bb.op && structurally_equal(*ba.lhs, *bb.lhs) &&
         structurally_equal(*ba.rhs, *bb.rhs);
}

namespace {

void check_not_nan(double v, const char* op) {
  if (std::isnan(v)) {
    throw EvalError(Errc::NanComparison, std::string("NaN operand in '") + op + "' comparison",
                    op);
  }
}

Value compare(BinOp op, const Value& lhs, const Value& rhs) {
  const char* op_text = binop_text(op);
  if (op == BinOp::Eq || op == BinOp::Ne) {
    if (lhs.tag() != rhs.tag()) {
      throw EvalError(Errc::TypeError,
                      std::string("'") + op_text + "' requires both sides of the same type, got " +
                          type_name(lhs.tag()) + " and " + type_name(rhs.tag()),
                      op_text);
    }
    if (lhs.is_list()) {
      throw EvalError(Errc::TypeError, std::string("'") + op_text + "' is not defined for lists",
                      op_text);
    }
    if (lhs.is_number()) {
      check_not_nan(lhs.as_number(), op_text);
      check_not_nan(rhs.as_number(), op_text);
    }
    bool eq = lhs == rhs;
    return Value::boolean(op == BinOp::Eq ? eq : !eq);
  }
  // Ordering comparisons.
  if (lhs.is_number() && rhs.is_number()) {
    double a = lhs.as_number();
    double b = rhs.as_number();
    check_not_nan(a, op_text);
    check_not_nan(b, op_text);
    switch (op) {
      case BinOp::Lt: return Value::boolean(a < b);
      case BinOp::Le: return Value::boolean(a <= b);
      case BinOp::Gt: return Value::boolean(a > b);
      case BinOp::Ge: return Value::boolean(a >= b);
      default: break;
    }
  }
  if (lhs.is_text() && rhs.is_text()) {
    const std::string& a = lhs.as_text();
    const std::string& b = rhs.as_text();
    switch (op) {
      case BinOp::Lt: return Value::boolean(a < b);
      case BinOp::Le: return Value::boolean(a <= b);
      case BinOp::Gt: return Value::boolean(a > b);
      case BinOp::Ge: return Value::boolean(a >= b);
      default: break;
    }
  }
  throw EvalError(Errc::TypeError,
                  std::string("'") + op_text + "' requires two numbers or two texts, got " +
                      type_name(lhs.tag()) + " and " + type_name(rhs.tag()),
                  op_text);
}

Value arith(BinOp op, const Value& lhs, const Value& rhs) {
  const char* op_text = binop_text(op);
  if (!lhs.is_number() || !rhs.is_number()) {
    throw EvalError(Errc::TypeError,
                    std::string("'") + op_text + "' requires numbers, got " +
                        type_name(lhs.tag()) + " and " + type_name(rhs.tag()),
                    op_text);
  }
  double a = lhs.as_number();
  double b = rhs.as_number();
  switch (op) {
    case BinOp::Add: return Value::number(a + b);
    case BinOp::Sub: return Value::number(a - b);
    case BinOp::Mul: return Value::number(a * b);
    case BinOp::Div:
      if (b == 0.0) throw EvalError(Errc::DivisionByZero, "division by zero", "/");
      return Value::number(a / b);
    default: break;
  }
  throw EvalError(Errc::TypeError, "unsupported arithmetic operator", op_text);
}

}  // namespace

Value eval_value(const Expr& e, const std::map<std::string, Value>& store) {
  struct Visitor {
    const std::map<std::string, Value>& store;

    Value operator()(const Expr::Num& n) const { return Value::number(n.value); }
    Value operator()(const Expr::Str& s) const { return Value::text(s.value); }
    Value operator()(const Expr::BoolLit& b) const { return Value::boolean(b.value); }
    Value operator()(const Expr::Ident& id) const {
      auto it = store.find(id.name);
      if (it == store.end()) {
        throw EvalError(Errc::UnboundIdentifier, "unbound identifier '" + id.name + "'", id.name);
      }
      return it->second;
    }
    Value operator()(const Expr::Unary& u) const {
      Value v = eval_value(*u.operand, store);
      if (u.op == UnOp::Not) {
        if (!v.is_boolean()) {
          throw EvalError(Errc::TypeError,
                          std::string("'not' requires a boolean, got ") + type_name(v.tag()),
                          "not");
        }
        return Value::boolean(!v.as_boolean());
      }
      if (!v.is_number()) {
        throw EvalError(Errc::TypeError,
                        std::string("unary '-' requires a number, got ") + type_name(v.tag()),
                        "-");
      }
      return Value::number(-v.as_number());
    }
    Value operator()(const Expr::Binary& b) const {
      if (b.op == BinOp::And || b.op == BinOp::Or) {
        Value lhs = eval_value(*b.lhs, store);
        if (!lhs.is_boolean()) {
          throw EvalError(Errc::TypeError,
                          std::string("'") + binop_text(b.op) + "' requires booleans, got " +
                              type_name(lhs.tag()),
                          binop_text(b.op));
        }
        // Short-circuit: the right side is not evaluated when the outcome
        // is already determined.
        if (b.op == BinOp::And && !lhs.as_boolean()) return Value::boolean(false);
        if (b.op == BinOp::Or && lhs.as_boolean()) return Value::boolean(true);
        Value rhs = eval_value(*b.rhs, store);
        if (!rhs.is_boolean()) {
          throw EvalError(Errc::TypeError,
                          std::string("'") + binop_text(b.op) + "' requires booleans, got " +
                              type_name(rhs.tag()),
                          binop_text(b.op));
        }
        return rhs;
      }
      Value lhs = eval_value(*b.lhs, store);
      Value rhs = eval_value(*b.rhs, store);
      switch (b.op) {
        case BinOp::Eq: case BinOp::Ne: case BinOp::Lt:
        case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
          return compare(b.op, lhs, rhs);
        default:
          return arith(b.op, lhs, rhs);
      }
    }
  };
  return std::visit(Visitor{store}, e.node);
}

bool eval(const Expr& e, const std::map<std::string, Value>& store) {
  Value v = eval_value(e, store);
  if (!v.is_boolean()) {
    throw EvalError(Errc::TypeError,
                    std::string("condition must evaluate to a boolean, got ") +
                        type_name(v.tag()));
  }
  return v.as_boolean();
}

}  // namespace flowforge::expr
