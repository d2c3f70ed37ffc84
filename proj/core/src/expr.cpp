#include "funceq/expr.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <utility>

namespace funceq {

struct Expr::Node {
  Kind kind;
  double value = 0.0;  // Kind::Const payload
  Func func = Func::Abs;
  NodePtr a;
  NodePtr b;
};

// ---- construction ----------------------------------------------------------

Expr::Expr(NodePtr node) : node_(std::move(node)) {}

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::var() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  return Expr(std::move(n));
}

Expr Expr::call(Func f, const Expr& a) {
  if (f == Func::Min || f == Func::Max)
    throw Error("min/max take two arguments");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = f;
  n->a = a.node_;
  return Expr(std::move(n));
}

Expr Expr::call(Func f, const Expr& a, const Expr& b) {
  if (f != Func::Min && f != Func::Max)
    throw Error("only min/max take two arguments");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = f;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, const Expr& a, const Expr& b) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::constant(0.0) - a; }

Expr pow(const Expr& base, double exponent) {
  return Expr::binary(Expr::Kind::Pow, base, Expr::constant(exponent));
}

// ---- accessors -------------------------------------------------------------

Expr::Kind Expr::kind() const { return node_->kind; }

double Expr::value() const {
  if (node_->kind != Kind::Const) throw Error("value() on a non-constant node");
  return node_->value;
}

Expr::Func Expr::func() const {
  if (node_->kind != Kind::Call) throw Error("func() on a non-call node");
  return node_->func;
}

Expr Expr::left() const {
  if (!node_->a) throw Error("node has no children");
  return Expr(node_->a);
}

Expr Expr::right() const {
  if (!node_->b) throw Error("node has no second child");
  return Expr(node_->b);
}

bool Expr::has_var() const { return node_has_var(*node_); }

bool Expr::node_has_var(const Node& n) {
  if (n.kind == Kind::Var) return true;
  if (n.a && node_has_var(*n.a)) return true;
  if (n.b && node_has_var(*n.b)) return true;
  return false;
}

// ---- evaluation ------------------------------------------------------------

double Expr::operator()(double x) const { return eval_node(*node_, x); }

double Expr::eval_node(const Node& n, double x) {
  switch (n.kind) {
    case Kind::Const:
      return n.value;
    case Kind::Var:
      return x;
    case Kind::Add:
      return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Kind::Sub:
      return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Kind::Mul:
      return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Kind::Div:
      return eval_node(*n.a, x) / eval_node(*n.b, x);
    case Kind::Pow:
      return std::pow(eval_node(*n.a, x), n.b->value);
    case Kind::Call:
      break;
  }
  const double u = eval_node(*n.a, x);
  switch (n.func) {
    case Func::Abs:
      return std::fabs(u);
    case Func::Mod1:
      return u - std::floor(u);
    case Func::Floor:
      return std::floor(u);
    case Func::Sgn:
      if (std::isnan(u)) return u;
      return u < 0.0 ? -1.0 : 1.0;  // right-continuous: sgn(0) = 1
    case Func::Min:
    case Func::Max: {
      const double v = eval_node(*n.b, x);
      if (std::isnan(u) || std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
      if (n.func == Func::Min) return u < v ? u : v;
      return u > v ? u : v;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// ---- differentiation -------------------------------------------------------

Expr Expr::raw_derivative() const { return Expr(diff_node(*node_)); }

Expr Expr::derivative() const { return raw_derivative().simplified(); }

Expr::NodePtr Expr::diff_node(const Node& n) {
  auto lift = [](const Expr& e) { return e.node_; };
  auto wrap = [](const NodePtr& p) { return Expr(p); };
  switch (n.kind) {
    case Kind::Const:
      return lift(constant(0.0));
    case Kind::Var:
      return lift(constant(1.0));
    case Kind::Add:
      return lift(wrap(diff_node(*n.a)) + wrap(diff_node(*n.b)));
    case Kind::Sub:
      return lift(wrap(diff_node(*n.a)) - wrap(diff_node(*n.b)));
    case Kind::Mul:
      return lift(wrap(diff_node(*n.a)) * wrap(n.b) + wrap(n.a) * wrap(diff_node(*n.b)));
    case Kind::Div:
      return lift((wrap(diff_node(*n.a)) * wrap(n.b) - wrap(n.a) * wrap(diff_node(*n.b))) /
                  (wrap(n.b) * wrap(n.b)));
    case Kind::Pow: {
      const double c = n.b->value;
      return lift(constant(c) * pow(wrap(n.a), c - 1.0) * wrap(diff_node(*n.a)));
    }
    case Kind::Call:
      break;
  }
  switch (n.func) {
    case Func::Abs:
      return lift(call(Func::Sgn, wrap(n.a)) * wrap(diff_node(*n.a)));
    case Func::Mod1:
      return diff_node(*n.a);  // unit slope between the jumps
    case Func::Floor:
    case Func::Sgn:
      return lift(constant(0.0));  // flat between the jumps
    case Func::Min:
    case Func::Max:
      if (node_has_var(n))
        throw UnsupportedDerivative("derivative of min/max with a variable argument");
      return lift(constant(0.0));
  }
  return lift(constant(0.0));
}

// ---- simplification --------------------------------------------------------

Expr Expr::simplified() const { return Expr(simplify_node(node_)); }

Expr::NodePtr Expr::simplify_node(const NodePtr& n) {
  const auto is_const = [](const NodePtr& p, double v) {
    return p->kind == Kind::Const && p->value == v;
  };
  const auto fold_or = [&](const NodePtr& replacement) -> NodePtr {
    // Fold constant subtrees, but never bake a non-finite constant into the
    // tree; printing "inf" would not round-trip through the parser.
    const double r = eval_node(*replacement, 0.0);
    if (std::isfinite(r)) return Expr::constant(r).node_;
    return replacement;
  };
  if (n->kind == Kind::Const || n->kind == Kind::Var) return n;

  auto m = std::make_shared<Node>(*n);
  m->a = simplify_node(n->a);
  if (n->b) m->b = simplify_node(n->b);
  NodePtr out = m;
  const bool a_const = m->a->kind == Kind::Const;
  const bool b_const = m->b && m->b->kind == Kind::Const;

  switch (m->kind) {
    case Kind::Add:
      if (a_const && b_const) return fold_or(out);
      if (is_const(m->a, 0.0)) return m->b;
      if (is_const(m->b, 0.0)) return m->a;
      break;
    case Kind::Sub:
      if (a_const && b_const) return fold_or(out);
      if (is_const(m->b, 0.0)) return m->a;
      break;
    case Kind::Mul:
      if (a_const && b_const) return fold_or(out);
      if (is_const(m->a, 0.0) || is_const(m->b, 0.0)) return Expr::constant(0.0).node_;
      if (is_const(m->a, 1.0)) return m->b;
      if (is_const(m->b, 1.0)) return m->a;
      break;
    case Kind::Div:
      if (a_const && b_const) return fold_or(out);
      if (is_const(m->b, 1.0)) return m->a;
      break;
    case Kind::Pow:
      if (is_const(m->b, 0.0)) return Expr::constant(1.0).node_;  // pow(u,0) = 1, like std::pow
      if (is_const(m->b, 1.0)) return m->a;
      if (a_const) return fold_or(out);
      break;
    case Kind::Call: {
      const bool args_const = a_const && (!m->b || b_const);
      if (args_const) return fold_or(out);
      break;
    }
    default:
      break;
  }
  return out;
}

// ---- printing --------------------------------------------------------------

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string Expr::str() const {
  std::string out;
  print_node(*node_, out);
  return out;
}

void Expr::print_node(const Node& n, std::string& out) {
  static constexpr const char* kFuncNames[] = {"abs", "min", "max", "mod1", "floor", "sgn"};
  switch (n.kind) {
    case Kind::Const:
      out += format_double(n.value);
      return;
    case Kind::Var:
      out += 'x';
      return;
    case Kind::Call:
      out += kFuncNames[static_cast<int>(n.func)];
      out += '(';
      print_node(*n.a, out);
      if (n.b) {
        out += ", ";
        print_node(*n.b, out);
      }
      out += ')';
      return;
    default:
      break;
  }
  const char* op = "?";
  switch (n.kind) {
    case Kind::Add: op = " + "; break;
    case Kind::Sub: op = " - "; break;
    case Kind::Mul: op = " * "; break;
    case Kind::Div: op = " / "; break;
    case Kind::Pow: op = " ^ "; break;
    default: break;
  }
  out += '(';
  print_node(*n.a, out);
  out += op;
  print_node(*n.b, out);
  out += ')';
}

// ---- parsing ---------------------------------------------------------------

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
            text_[pos_] == '\n'))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        e = e + parse_term();
      } else if (c == '-') {
        ++pos_;
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        e = e * parse_factor();
      } else if (c == '/') {
        ++pos_;
        e = e / parse_factor();
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    Expr base = parse_unary();
    if (peek() == '^') {
      const std::size_t caret = pos_;
      ++pos_;
      Expr exp = parse_factor();  // right associative
      if (exp.has_var()) throw ParseError(caret, "exponent must be constant");
      const double c = exp.eval(0.0);
      if (!std::isfinite(c)) throw ParseError(caret, "exponent must be finite");
      return funceq::pow(base, c);
    }
    return base;
  }

  Expr parse_unary() {
    if (peek() == '-') {
      ++pos_;
      Expr u = parse_unary();
      if (u.kind() == Expr::Kind::Const) return Expr::constant(-u.value());
      return Expr::constant(0.0) - u;
    }
    return parse_primary();
  }

  Expr parse_primary() {
    const char c = peek();
    if (c == '\0') throw ParseError(pos_, "expected an operand");
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!consume(')')) throw ParseError(pos_, "expected ')'");
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') return parse_ident();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    double v = 0.0;
    const auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (res.ec != std::errc()) throw ParseError(pos_, "malformed number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return Expr::constant(v);
  }

  Expr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           ((text_[pos_] >= 'a' && text_[pos_] <= 'z') ||
            (text_[pos_] >= 'A' && text_[pos_] <= 'Z') ||
            (text_[pos_] >= '0' && text_[pos_] <= '9') || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::var();

    Expr::Func f;
    int arity = 1;
    if (name == "abs") f = Expr::Func::Abs;
    else if (name == "mod1") f = Expr::Func::Mod1;
    else if (name == "floor") f = Expr::Func::Floor;
    else if (name == "sgn") f = Expr::Func::Sgn;
    else if (name == "min") { f = Expr::Func::Min; arity = 2; }
    else if (name == "max") { f = Expr::Func::Max; arity = 2; }
    else throw ParseError(start, "unknown name '" + std::string(name) + "'");

    if (!consume('(')) throw ParseError(pos_, "expected '(' after function name");
    Expr a = parse_expr();
    if (arity == 2) {
      if (!consume(',')) throw ParseError(pos_, "expected ',' (function takes two arguments)");
      Expr b = parse_expr();
      if (!consume(')')) throw ParseError(pos_, "expected ')'");
      return Expr::call(f, a, b);
    }
    if (peek() == ',') throw ParseError(pos_, "function takes one argument");
    if (!consume(')')) throw ParseError(pos_, "expected ')'");
    return Expr::call(f, a);
  }
};

}  // namespace

Expr Expr::parse(std::string_view text) { return Parser(text).run(); }

}  // namespace funceq
