#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "funceq/errors.hpp"

namespace funceq {

/// Immutable expression tree in one real variable `x`.
///
/// Grammar accepted by parse():
///   expr    := term (('+'|'-') term)*
///   term    := factor (('*'|'/') factor)*
///   factor  := unary ('^' factor)?          -- right associative
///   unary   := '-' unary | primary
///   primary := number | 'x' | '(' expr ')' | name '(' expr (',' expr)? ')'
///   name    := abs | min | max | mod1 | floor | sgn
///
/// Exponents must fold to a constant at parse time; `x ^ x` is rejected.
class Expr {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Call };
  enum class Func { Abs, Min, Max, Mod1, Floor, Sgn };

  /// Default-constructed expression is the constant 0.
  Expr();

  static Expr constant(double v);
  static Expr var();
  static Expr call(Func f, const Expr& a);
  static Expr call(Func f, const Expr& a, const Expr& b);

  /// Throws ParseError with a byte offset into `text` on malformed input.
  static Expr parse(std::string_view text);

  Kind kind() const;
  /// Stored constant; valid for Kind::Const only.
  double value() const;
  /// Called function; valid for Kind::Call only.
  Func func() const;
  /// First child of a binary node, or the (first) argument of a call.
  Expr left() const;
  /// Second child; valid for binary nodes and two-argument calls.
  Expr right() const;
  bool has_var() const;

  /// Evaluates at x. Non-finite intermediates propagate; nothing throws here.
  double operator()(double x) const;
  double eval(double x) const { return (*this)(x); }

  /// Symbolic derivative without simplification. Piecewise conventions,
  /// one-sided from the right at the kinks:
  ///   d/dt abs(t)  = sgn(t)   with sgn(0) = 1
  ///   d/dt mod1(t) = 1
  ///   d/dt floor(t) = 0,  d/dt sgn(t) = 0
  /// min/max of a variable argument throws UnsupportedDerivative.
  Expr raw_derivative() const;

  /// raw_derivative() followed by simplified().
  Expr derivative() const;

  /// Constant folding plus identity elimination (x+0, x*1, x*0, x^1, ...).
  /// Evaluates to the same values as the original wherever it is finite.
  Expr simplified() const;

  /// Round-trips through parse(): parse(e.str()) evaluates identically.
  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, double exponent);

 private:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  explicit Expr(NodePtr node);
  static Expr binary(Kind kind, const Expr& a, const Expr& b);
  static double eval_node(const Node& n, double x);
  static bool node_has_var(const Node& n);
  static NodePtr diff_node(const Node& n);
  static NodePtr simplify_node(const NodePtr& n);
  static void print_node(const Node& n, std::string& out);
  NodePtr node_;
};

/// Power with a constant exponent, mirroring the parser's restriction.
Expr pow(const Expr& base, double exponent);

/// Shortest decimal string that round-trips to the same double.
/// Used everywhere a double is printed, so output is deterministic.
std::string format_double(double v);

}  // namespace funceq
