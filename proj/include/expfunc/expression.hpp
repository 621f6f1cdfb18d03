#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace expfunc {

/// Scalar function of one variable given by a small expression grammar.
///
/// Grammar (whitespace ignored):
///
///     expr   := term (('+' | '-') term)*
///     term   := unary (('*' | '/') unary)*
///     unary  := '-' unary | power
///     power  := atom ('^' unary)?
///     atom   := number | VAR | func '(' expr ')' | '(' expr ')'
///     func   := exp | ln | log | sqrt
///
/// VAR is the declared variable name (`t` for time functions, `x` for jump
/// densities). `log` is the natural logarithm. This covers polynomials, exp,
/// ln and powers of (1+t) with real coefficients.
///
/// Expressions are immutable and cheap to copy (shared AST).
class Expression {
 public:
  struct Node;

  Expression();  // the constant 0 in variable t
  static Expression parse(std::string_view text, std::string variable = "t");
  static Expression constant(double value, std::string variable = "t");
  static Expression variable(std::string variable = "t");

  double operator()(double x) const;

  Expression derivative() const;
  /// f(x) -> f(shift - x).
  Expression reflected(double shift) const;

  bool is_constant() const;
  /// Value if is_constant(), otherwise throws.
  double constant_value() const;

  /// Canonical text; parse(to_string()) reproduces the same expression.
  std::string to_string() const;
  const std::string& variable_name() const { return var_; }

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator*(double a, const Expression& b);

  friend bool operator==(const Expression& a, const Expression& b) {
    return a.to_string() == b.to_string();
  }

 private:
  Expression(std::shared_ptr<const Node> root, std::string var);
  std::shared_ptr<const Node> root_;
  std::string var_;
};

}  // namespace expfunc
