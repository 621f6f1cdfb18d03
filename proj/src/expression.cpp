#include "expfunc/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "expfunc/common.hpp"

namespace expfunc {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Ln, Sqrt };

struct Expression::Node {
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = v;
  return n;
}

NodePtr cnst(double v) { return make(Op::Const, nullptr, nullptr, v); }
bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

double eval(const Expression::Node& n, double x) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return x;
    case Op::Add: return eval(*n.a, x) + eval(*n.b, x);
    case Op::Sub: return eval(*n.a, x) - eval(*n.b, x);
    case Op::Mul: return eval(*n.a, x) * eval(*n.b, x);
    case Op::Div: return eval(*n.a, x) / eval(*n.b, x);
    case Op::Pow: return std::pow(eval(*n.a, x), eval(*n.b, x));
    case Op::Neg: return -eval(*n.a, x);
    case Op::Exp: return std::exp(eval(*n.a, x));
    case Op::Ln: return std::log(eval(*n.a, x));
    case Op::Sqrt: return std::sqrt(eval(*n.a, x));
  }
  return 0.0;
}

bool constant_tree(const NodePtr& n) {
  if (n->op == Op::Var) return false;
  if (n->op == Op::Const) return true;
  return (!n->a || constant_tree(n->a)) && (!n->b || constant_tree(n->b));
}

// Smart constructors with light constant folding.
NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  if (a->op == Op::Const && b->op == Op::Const) return cnst(a->value + b->value);
  return make(Op::Add, a, b);
}
NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0)) return a;
  if (a->op == Op::Const && b->op == Op::Const) return cnst(a->value - b->value);
  if (is_const(a, 0)) return make(Op::Neg, b);
  return make(Op::Sub, a, b);
}
NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0) || is_const(b, 0)) return cnst(0.0);
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  if (a->op == Op::Const && b->op == Op::Const) return cnst(a->value * b->value);
  return make(Op::Mul, a, b);
}
NodePtr divide(NodePtr a, NodePtr b) {
  if (is_const(a, 0)) return cnst(0.0);
  if (is_const(b, 1)) return a;
  if (a->op == Op::Const && b->op == Op::Const) return cnst(a->value / b->value);
  return make(Op::Div, a, b);
}
NodePtr neg(NodePtr a) {
  if (a->op == Op::Const) return cnst(-a->value);
  return make(Op::Neg, a);
}
NodePtr pw(NodePtr a, NodePtr b) {
  if (is_const(b, 1)) return a;
  if (is_const(b, 0)) return cnst(1.0);
  if (a->op == Op::Const && b->op == Op::Const) return cnst(std::pow(a->value, b->value));
  return make(Op::Pow, a, b);
}
NodePtr unary(Op op, NodePtr a) {
  if (a->op == Op::Const) return cnst(eval(*make(op, a), 0.0));
  return make(op, a);
}

NodePtr diff(const NodePtr& n) {
  switch (n->op) {
    case Op::Const: return cnst(0.0);
    case Op::Var: return cnst(1.0);
    case Op::Add: return add(diff(n->a), diff(n->b));
    case Op::Sub: return sub(diff(n->a), diff(n->b));
    case Op::Mul: return add(mul(diff(n->a), n->b), mul(n->a, diff(n->b)));
    case Op::Div:
      return divide(sub(mul(diff(n->a), n->b), mul(n->a, diff(n->b))), pw(n->b, cnst(2.0)));
    case Op::Neg: return neg(diff(n->a));
    case Op::Exp: return mul(n, diff(n->a));
    case Op::Ln: return divide(diff(n->a), n->a);
    case Op::Sqrt: return divide(diff(n->a), mul(cnst(2.0), n));
    case Op::Pow:
      if (constant_tree(n->b)) {
        return mul(mul(n->b, pw(n->a, sub(n->b, cnst(1.0)))), diff(n->a));
      }
      // d(f^g) = f^g (g' ln f + g f'/f)
      return mul(n, add(mul(diff(n->b), unary(Op::Ln, n->a)), divide(mul(n->b, diff(n->a)), n->a)));
  }
  return cnst(0.0);
}

NodePtr substitute(const NodePtr& n, const NodePtr& replacement) {
  switch (n->op) {
    case Op::Const: return n;
    case Op::Var: return replacement;
    case Op::Add: return add(substitute(n->a, replacement), substitute(n->b, replacement));
    case Op::Sub: return sub(substitute(n->a, replacement), substitute(n->b, replacement));
    case Op::Mul: return mul(substitute(n->a, replacement), substitute(n->b, replacement));
    case Op::Div: return divide(substitute(n->a, replacement), substitute(n->b, replacement));
    case Op::Pow: return pw(substitute(n->a, replacement), substitute(n->b, replacement));
    case Op::Neg: return neg(substitute(n->a, replacement));
    default: return unary(n->op, substitute(n->a, replacement));
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep literals parseable as a single atom.
  if (v < 0) return "(" + s + ")";
  return s;
}

std::string print(const NodePtr& n, const std::string& var) {
  switch (n->op) {
    case Op::Const: return format_number(n->value);
    case Op::Var: return var;
    case Op::Add: return "(" + print(n->a, var) + " + " + print(n->b, var) + ")";
    case Op::Sub: return "(" + print(n->a, var) + " - " + print(n->b, var) + ")";
    case Op::Mul: return "(" + print(n->a, var) + " * " + print(n->b, var) + ")";
    case Op::Div: return "(" + print(n->a, var) + " / " + print(n->b, var) + ")";
    case Op::Pow: return "(" + print(n->a, var) + " ^ " + print(n->b, var) + ")";
    case Op::Neg: return "(-" + print(n->a, var) + ")";
    case Op::Exp: return "exp(" + print(n->a, var) + ")";
    case Op::Ln: return "ln(" + print(n->a, var) + ")";
    case Op::Sqrt: return "sqrt(" + print(n->a, var) + ")";
  }
  return "";
}

class Parser {
 public:
  Parser(std::string_view text, const std::string& var) : s_(text), var_(var) {}

  NodePtr parse() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SpecError("expression '" + std::string(s_) + "': " + msg + " at position " +
                    std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) lhs = add(lhs, term());
      else if (accept('-')) lhs = sub(lhs, term());
      else return lhs;
    }
  }
  NodePtr term() {
    auto lhs = unary_expr();
    for (;;) {
      if (accept('*')) lhs = mul(lhs, unary_expr());
      else if (accept('/')) lhs = divide(lhs, unary_expr());
      else return lhs;
    }
  }
  NodePtr unary_expr() {
    if (accept('-')) return neg(unary_expr());
    if (accept('+')) return unary_expr();
    return power();
  }
  NodePtr power() {
    auto base = atom();
    if (accept('^')) return pw(base, unary_expr());
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == var_) return make(Op::Var);
      Op op;
      if (name == "exp") op = Op::Exp;
      else if (name == "ln" || name == "log") op = Op::Ln;
      else if (name == "sqrt") op = Op::Sqrt;
      else {
        pos_ = start;
        fail("unknown identifier '" + name + "' (variable is '" + var_ + "')");
      }
      expect('(');
      auto arg = expr();
      expect(')');
      return unary(op, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  NodePtr number() {
    const char* begin = s_.data() + pos_;
    char* end = nullptr;
    std::string tmp(begin, s_.size() - pos_);
    double v = std::strtod(tmp.c_str(), &end);
    std::size_t used = static_cast<std::size_t>(end - tmp.c_str());
    if (used == 0) fail("malformed number");
    pos_ += used;
    return cnst(v);
  }

  std::string_view s_;
  const std::string& var_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : root_(cnst(0.0)), var_("t") {}

Expression::Expression(std::shared_ptr<const Node> root, std::string var)
    : root_(std::move(root)), var_(std::move(var)) {}

Expression Expression::parse(std::string_view text, std::string variable) {
  Parser p(text, variable);
  NodePtr root = p.parse();
  return Expression(std::move(root), std::move(variable));
}

Expression Expression::constant(double value, std::string variable) {
  return Expression(cnst(value), std::move(variable));
}

Expression Expression::variable(std::string variable) {
  return Expression(make(Op::Var), std::move(variable));
}

double Expression::operator()(double x) const { return eval(*root_, x); }

Expression Expression::derivative() const { return Expression(diff(root_), var_); }

Expression Expression::reflected(double shift) const {
  return Expression(substitute(root_, sub(cnst(shift), make(Op::Var))), var_);
}

bool Expression::is_constant() const { return constant_tree(root_); }

double Expression::constant_value() const {
  if (!is_constant()) throw std::logic_error("expression is not constant: " + to_string());
  return eval(*root_, 0.0);
}

std::string Expression::to_string() const { return print(root_, var_); }

Expression operator+(const Expression& a, const Expression& b) {
  return Expression(add(a.root_, b.root_), a.var_);
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression(sub(a.root_, b.root_), a.var_);
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression(mul(a.root_, b.root_), a.var_);
}
Expression operator*(double a, const Expression& b) {
  return Expression(mul(cnst(a), b.root_), b.var_);
}

}  // namespace expfunc
