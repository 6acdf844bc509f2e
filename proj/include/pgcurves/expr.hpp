#pragma once

// Expression DSL for curve components and invariant profiles.
//
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary [ '^' unary ]          (right-associative)
//   primary := number | PARAM | FUNC '(' expr ')' | '(' expr ')'
//   FUNC    := sin | cos | sinh | cosh | tanh | exp | log | sqrt | abs
//   number  := digits [ '.' digits ] [ ('e'|'E') ['+'|'-'] digits ]
//            | '.' digits [ exponent ]
//
// The exponent of '^' must not depend on the parameter.

#include <cctype>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pgcurves/error.hpp"
#include "pgcurves/jet.hpp"

namespace pgc {

enum class TokenKind { Number, Identifier, Operator, LParen, RParen };

struct Token {
  TokenKind kind;
  std::string text;
  double number = 0.0;
  std::size_t offset = 0;

  friend bool operator==(const Token& a, const Token& b) {
    return a.kind == b.kind && a.text == b.text && a.number == b.number;
  }
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto is_digit = [&](std::size_t k) {
    return k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]));
  };
  while (i < src.size()) {
    const char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(i) || ch == '.') {
      while (is_digit(i)) ++i;
      if (i < src.size() && src[i] == '.') {
        if (!is_digit(i + 1)) throw LexError(i, "digit expected after decimal point");
        ++i;
        while (is_digit(i)) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t k = i + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (!is_digit(k)) throw LexError(i, "malformed exponent");
        i = k;
        while (is_digit(i)) ++i;
      }
      if (i < src.size() && (src[i] == '.' || std::isalpha(static_cast<unsigned char>(src[i])) ||
                             src[i] == '_')) {
        throw LexError(i, "malformed number");
      }
      Token t{TokenKind::Number, std::string(src.substr(start, i - start)), 0.0, start};
      t.number = std::stod(t.text);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        ++i;
      }
      out.push_back({TokenKind::Identifier, std::string(src.substr(start, i - start)), 0.0, start});
      continue;
    }
    switch (ch) {
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
        out.push_back({TokenKind::Operator, std::string(1, ch), 0.0, start});
        break;
      case '(':
        out.push_back({TokenKind::LParen, "(", 0.0, start});
        break;
      case ')':
        out.push_back({TokenKind::RParen, ")", 0.0, start});
        break;
      default:
        throw LexError(start, std::string("unexpected character '") + ch + "'");
    }
    ++i;
  }
  return out;
}

enum class Func { Sin, Cos, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs };
enum class BinOp { Add, Sub, Mul, Div, Pow };

inline const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
  }
  return "?";
}

inline bool lookup_func(std::string_view name, Func& f) {
  static constexpr Func all[] = {Func::Sin,  Func::Cos, Func::Sinh, Func::Cosh, Func::Tanh,
                                 Func::Exp,  Func::Log, Func::Sqrt, Func::Abs};
  for (Func g : all) {
    if (name == func_name(g)) {
      f = g;
      return true;
    }
  }
  return false;
}

inline char binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return '+';
    case BinOp::Sub: return '-';
    case BinOp::Mul: return '*';
    case BinOp::Div: return '/';
    case BinOp::Pow: return '^';
  }
  return '?';
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct ConstantNode {
  double value;
};
struct VariableNode {};
struct NegateNode {
  NodePtr arg;
};
struct BinaryNode {
  BinOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct CallNode {
  Func fn;
  NodePtr arg;
};

struct Node {
  std::variant<ConstantNode, VariableNode, NegateNode, BinaryNode, CallNode> v;
};

namespace detail {

inline NodePtr make(auto node) { return std::make_shared<const Node>(Node{std::move(node)}); }

inline bool depends_on_param(const Node& n) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ConstantNode>) return false;
        else if constexpr (std::is_same_v<T, VariableNode>) return true;
        else if constexpr (std::is_same_v<T, BinaryNode>)
          return depends_on_param(*x.lhs) || depends_on_param(*x.rhs);
        else return depends_on_param(*x.arg);
      },
      n.v);
}

inline bool same_tree(const Node& a, const Node& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.v);
        if constexpr (std::is_same_v<T, ConstantNode>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, VariableNode>) return true;
        else if constexpr (std::is_same_v<T, NegateNode>) return same_tree(*x.arg, *y.arg);
        else if constexpr (std::is_same_v<T, BinaryNode>)
          return x.op == y.op && same_tree(*x.lhs, *y.lhs) && same_tree(*x.rhs, *y.rhs);
        else return x.fn == y.fn && same_tree(*x.arg, *y.arg);
      },
      a.v);
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Parser {
 public:
  Parser(const std::vector<Token>& toks, std::string_view param) : toks_(toks), param_(param) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    if (pos_ != toks_.size()) fail("end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const { throw ParseError(pos_, expected); }

  const Token* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }

  bool accept_op(char c) {
    const Token* t = peek();
    if (t && t->kind == TokenKind::Operator && t->text[0] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(TokenKind k, const char* what) {
    const Token* t = peek();
    if (!t || t->kind != k) fail(what);
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept_op('+')) lhs = make(BinaryNode{BinOp::Add, lhs, term()});
      else if (accept_op('-')) lhs = make(BinaryNode{BinOp::Sub, lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept_op('*')) lhs = make(BinaryNode{BinOp::Mul, lhs, unary()});
      else if (accept_op('/')) lhs = make(BinaryNode{BinOp::Div, lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept_op('-')) return make(NegateNode{unary()});
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept_op('^')) {
      const std::size_t at = pos_;
      NodePtr exponent = unary();
      if (depends_on_param(*exponent)) throw ParseError(at, "constant exponent");
      return make(BinaryNode{BinOp::Pow, base, exponent});
    }
    return base;
  }

  NodePtr primary() {
    const Token* t = peek();
    if (!t) fail("expression");
    switch (t->kind) {
      case TokenKind::Number:
        ++pos_;
        return make(ConstantNode{t->number});
      case TokenKind::Identifier: {
        if (t->text == param_) {
          ++pos_;
          return make(VariableNode{});
        }
        Func f{};
        if (!lookup_func(t->text, f)) fail("parameter '" + std::string(param_) + "' or function name");
        ++pos_;
        expect(TokenKind::LParen, "'('");
        NodePtr arg = expr();
        expect(TokenKind::RParen, "')'");
        return make(CallNode{f, arg});
      }
      case TokenKind::LParen: {
        ++pos_;
        NodePtr e = expr();
        expect(TokenKind::RParen, "')'");
        return e;
      }
      default:
        fail("expression");
    }
  }

  const std::vector<Token>& toks_;
  std::string_view param_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// An immutable parsed expression in a single parameter.
class Expr {
 public:
  Expr() : root_(detail::make(ConstantNode{0.0})), param_("s") {}

  static Expr parse(std::string_view source, std::string_view param = "s") {
    Func f{};
    if (param.empty() || lookup_func(param, f)) {
      throw InputError("invalid parameter name '" + std::string(param) + "'");
    }
    const auto toks = tokenize(source);
    detail::Parser p(toks, param);
    return Expr(p.parse_all(), std::string(param));
  }

  static Expr from_tokens(const std::vector<Token>& toks, std::string_view param = "s") {
    detail::Parser p(toks, param);
    return Expr(p.parse_all(), std::string(param));
  }

  static Expr constant(double v) { return Expr(detail::make(ConstantNode{v}), "s"); }

  const Node& root() const { return *root_; }
  const std::string& param() const { return param_; }

  /// Evaluates the expression with the parameter replaced by the jet `at`.
  template <std::size_t N>
  TaylorJet<N> eval(const TaylorJet<N>& at) const {
    return eval_node<N>(*root_, at);
  }

  double value(double s) const { return eval<0>(TaylorJet<0>(s)).value(); }

  /// Value and first three derivatives at s.
  Jet3 jet3(double s) const { return eval<3>(Jet3::variable(s)); }

  bool is_constant() const { return !detail::depends_on_param(*root_); }

  /// Fully parenthesized infix; re-parses to the identical tree.
  std::string to_infix() const { return infix(*root_); }

  /// Prefix form, e.g. "(+ 1 (* 2 s))".
  std::string to_sexpr() const { return sexpr(*root_); }

  friend bool operator==(const Expr& a, const Expr& b) {
    return detail::same_tree(*a.root_, *b.root_);
  }

 private:
  Expr(NodePtr root, std::string param) : root_(std::move(root)), param_(std::move(param)) {}

  template <std::size_t N>
  TaylorJet<N> eval_node(const Node& n, const TaylorJet<N>& at) const {
    return std::visit(
        [&](const auto& x) -> TaylorJet<N> {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ConstantNode>) {
            return TaylorJet<N>(x.value);
          } else if constexpr (std::is_same_v<T, VariableNode>) {
            return at;
          } else if constexpr (std::is_same_v<T, NegateNode>) {
            return -eval_node<N>(*x.arg, at);
          } else if constexpr (std::is_same_v<T, BinaryNode>) {
            const TaylorJet<N> a = eval_node<N>(*x.lhs, at);
            if (x.op == BinOp::Pow) {
              const double p = eval_node<0>(*x.rhs, TaylorJet<0>(at.value())).value();
              return guarded(n, [&] { return pow(a, p); });
            }
            const TaylorJet<N> b = eval_node<N>(*x.rhs, at);
            switch (x.op) {
              case BinOp::Add: return a + b;
              case BinOp::Sub: return a - b;
              case BinOp::Mul: return a * b;
              default: return guarded(n, [&] { return a / b; });
            }
          } else {
            const TaylorJet<N> a = eval_node<N>(*x.arg, at);
            return guarded(n, [&] { return apply(x.fn, a); });
          }
        },
        n.v);
  }

  // Re-labels a primitive's DomainError with the offending subexpression.
  template <class F>
  auto guarded(const Node& n, F&& f) const {
    try {
      return f();
    } catch (const DomainError& e) {
      throw DomainError(infix(n), e.what());
    }
  }

  template <std::size_t N>
  static TaylorJet<N> apply(Func f, const TaylorJet<N>& a) {
    switch (f) {
      case Func::Sin: return sin(a);
      case Func::Cos: return cos(a);
      case Func::Sinh: return sinh(a);
      case Func::Cosh: return cosh(a);
      case Func::Tanh: return tanh(a);
      case Func::Exp: return exp(a);
      case Func::Log: return log(a);
      case Func::Sqrt: return sqrt(a);
      case Func::Abs: return abs(a);
    }
    return a;
  }

  std::string infix(const Node& n) const {
    return std::visit(
        [&](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ConstantNode>) return detail::format_number(x.value);
          else if constexpr (std::is_same_v<T, VariableNode>) return param_;
          else if constexpr (std::is_same_v<T, NegateNode>) return "(-" + infix(*x.arg) + ")";
          else if constexpr (std::is_same_v<T, BinaryNode>)
            return "(" + infix(*x.lhs) + binop_symbol(x.op) + infix(*x.rhs) + ")";
          else return std::string(func_name(x.fn)) + "(" + infix(*x.arg) + ")";
        },
        n.v);
  }

  std::string sexpr(const Node& n) const {
    return std::visit(
        [&](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ConstantNode>) return detail::format_number(x.value);
          else if constexpr (std::is_same_v<T, VariableNode>) return param_;
          else if constexpr (std::is_same_v<T, NegateNode>) return "(neg " + sexpr(*x.arg) + ")";
          else if constexpr (std::is_same_v<T, BinaryNode>)
            return std::string("(") + binop_symbol(x.op) + " " + sexpr(*x.lhs) + " " +
                   sexpr(*x.rhs) + ")";
          else return std::string("(") + func_name(x.fn) + " " + sexpr(*x.arg) + ")";
        },
        n.v);
  }

  NodePtr root_;
  std::string param_;
};

}  // namespace pgc
