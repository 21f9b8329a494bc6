#include "wemin/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace wemin {

Expr Expr::make(ExprKind kind, NodePtr lhs, NodePtr rhs) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return Expr(std::move(node));
}

Expr Expr::var() { return make(ExprKind::Var); }

Expr Expr::constant(Complex value) {
  require_finite(value, "Expr constant");
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::Const;
  node->value = value;
  return Expr(std::move(node));
}

Complex Expr::constant_value() const {
  if (node_->kind != ExprKind::Const) {
    throw Error("constant_value called on a non-constant node");
  }
  return node_->value;
}

int Expr::exponent() const {
  if (node_->kind != ExprKind::Pow) {
    throw Error("exponent called on a non-power node");
  }
  return node_->exponent;
}

Expr Expr::child(int index) const {
  const NodePtr& c = index == 0 ? node_->lhs : node_->rhs;
  if (index < 0 || index > 1 || !c) {
    throw Error("child index out of range");
  }
  return Expr(c);
}

Expr operator+(const Expr& a, const Expr& b) {
  return Expr::make(ExprKind::Add, a.node_, b.node_);
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr::make(ExprKind::Sub, a.node_, b.node_);
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr::make(ExprKind::Mul, a.node_, b.node_);
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr::make(ExprKind::Div, a.node_, b.node_);
}
Expr Expr::operator-() const { return make(ExprKind::Neg, node_); }

Expr pow(const Expr& base, int exponent) {
  auto node = std::make_shared<Expr::Node>();
  node->kind = ExprKind::Pow;
  node->exponent = exponent;
  node->lhs = base.node_;
  return Expr(std::move(node));
}
Expr log(const Expr& x) { return Expr::make(ExprKind::Log, x.node_); }
Expr exp(const Expr& x) { return Expr::make(ExprKind::Exp, x.node_); }
Expr sqrt(const Expr& x) { return Expr::make(ExprKind::Sqrt, x.node_); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("trailing input after expression");
    }
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError("syntax error: " + message, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
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
      if (consume('+')) {
        e = e + parse_term();
      } else if (consume('-')) {
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (consume('*')) {
        e = e * parse_factor();
      } else if (consume('/')) {
        e = e / parse_factor();
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    Expr e = parse_unary();
    if (consume('^')) {
      return pow(e, parse_int_exponent());
    }
    return e;
  }

  Expr parse_unary() {
    if (consume('-')) {
      return -parse_atom();
    }
    return parse_atom();
  }

  Expr parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      if (!consume(')')) {
        fail("expected ')'");
      }
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      return parse_identifier();
    }
    fail(c == '\0' ? "unexpected end of input" : "unexpected character");
  }

  Expr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "z") return Expr::var();
    if (name == "i") return Expr::constant(Complex(0.0, 1.0));
    if (name == "pi") return Expr::constant(std::numbers::pi);
    if (name == "log" || name == "exp" || name == "sqrt") {
      if (!consume('(')) {
        fail("expected '(' after function name");
      }
      Expr arg = parse_expr();
      if (!consume(')')) {
        fail("expected ')'");
      }
      if (name == "log") return log(arg);
      if (name == "exp") return exp(arg);
      return sqrt(arg);
    }
    pos_ = start;
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  Expr parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    }
    if (pos_ == start || (pos_ == start + 1 && text_[start] == '.')) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      } else {
        pos_ = mark;  // 'e' was not an exponent
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::constant(value);
  }

  int parse_int_exponent() {
    skip_ws();
    bool parens = consume('(');
    skip_ws();
    bool negative = consume('-');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ == start) {
      fail("expected integer exponent after '^'");
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("exponent out of range");
    }
    if (parens && !consume(')')) {
      fail("expected ')' after exponent");
    }
    return negative ? -value : value;
  }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Complex integer_power(Complex base, int exponent) {
  if (exponent < 0) {
    if (base == Complex(0.0, 0.0)) {
      throw EvalError("zero raised to a negative power");
    }
    return Complex(1.0, 0.0) / integer_power(base, -exponent);
  }
  Complex result(1.0, 0.0);
  Complex acc = base;
  unsigned n = static_cast<unsigned>(exponent);
  while (n != 0) {
    if (n & 1u) result *= acc;
    acc *= acc;
    n >>= 1;
  }
  return result;
}

void require_off_branch_cut(Complex v, const char* fn) {
  // Principal branch: analytic off the closed negative real axis.
  if (v.imag() == 0.0 && v.real() <= 0.0) {
    throw EvalError(std::string(fn) + ": argument on the branch cut");
  }
}

}  // namespace

Complex evaluate(const Expr& e, Complex z) {
  require_finite(z, "evaluate");
  struct Visitor {
    Complex z;
    Complex visit(const Expr::Node* n) {
      Complex r;
      switch (n->kind) {
        case ExprKind::Var:
          r = z;
          break;
        case ExprKind::Const:
          r = n->value;
          break;
        case ExprKind::Add:
          r = visit(n->lhs.get()) + visit(n->rhs.get());
          break;
        case ExprKind::Sub:
          r = visit(n->lhs.get()) - visit(n->rhs.get());
          break;
        case ExprKind::Mul:
          r = visit(n->lhs.get()) * visit(n->rhs.get());
          break;
        case ExprKind::Div: {
          Complex denom = visit(n->rhs.get());
          if (denom == Complex(0.0, 0.0)) {
            throw EvalError("division by zero");
          }
          r = visit(n->lhs.get()) / denom;
          break;
        }
        case ExprKind::Pow:
          r = integer_power(visit(n->lhs.get()), n->exponent);
          break;
        case ExprKind::Neg:
          r = -visit(n->lhs.get());
          break;
        case ExprKind::Log: {
          Complex v = visit(n->lhs.get());
          require_off_branch_cut(v, "log");
          r = std::log(v);
          break;
        }
        case ExprKind::Exp:
          r = std::exp(visit(n->lhs.get()));
          break;
        case ExprKind::Sqrt: {
          Complex v = visit(n->lhs.get());
          require_off_branch_cut(v, "sqrt");
          r = std::sqrt(v);
          break;
        }
      }
      require_finite(r, "evaluate");
      return r;
    }
  };
  return Visitor{z}.visit(e.node_.get());
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

bool is_const(const Expr& e, Complex v) {
  return e.kind() == ExprKind::Const && e.constant_value() == v;
}

bool both_const(const Expr& a, const Expr& b) {
  return a.kind() == ExprKind::Const && b.kind() == ExprKind::Const;
}

// Simplifying builders used while differentiating; they apply only exact
// identities so the derivative stays exact.
Expr s_add(const Expr& a, const Expr& b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (both_const(a, b)) return Expr::constant(a.constant_value() + b.constant_value());
  return a + b;
}

Expr s_sub(const Expr& a, const Expr& b) {
  if (is_const(b, 0.0)) return a;
  if (both_const(a, b)) return Expr::constant(a.constant_value() - b.constant_value());
  if (is_const(a, 0.0)) return -b;
  return a - b;
}

Expr s_mul(const Expr& a, const Expr& b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr::constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (both_const(a, b)) return Expr::constant(a.constant_value() * b.constant_value());
  return a * b;
}

Expr s_div(const Expr& a, const Expr& b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(a, 0.0)) return Expr::constant(0.0);
  return a / b;
}

Expr s_pow(const Expr& base, int exponent) {
  if (exponent == 1) return base;
  if (exponent == 0) return Expr::constant(1.0);
  return pow(base, exponent);
}

}  // namespace

Expr differentiate(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Var:
      return Expr::constant(1.0);
    case ExprKind::Const:
      return Expr::constant(0.0);
    case ExprKind::Add:
      return s_add(differentiate(e.child(0)), differentiate(e.child(1)));
    case ExprKind::Sub:
      return s_sub(differentiate(e.child(0)), differentiate(e.child(1)));
    case ExprKind::Mul: {
      Expr l = e.child(0), r = e.child(1);
      return s_add(s_mul(differentiate(l), r), s_mul(l, differentiate(r)));
    }
    case ExprKind::Div: {
      Expr l = e.child(0), r = e.child(1);
      Expr num = s_sub(s_mul(differentiate(l), r), s_mul(l, differentiate(r)));
      return s_div(num, s_pow(r, 2));
    }
    case ExprKind::Pow: {
      Expr base = e.child(0);
      int n = e.exponent();
      if (n == 0) return Expr::constant(0.0);
      return s_mul(s_mul(Expr::constant(static_cast<double>(n)), s_pow(base, n - 1)),
                   differentiate(base));
    }
    case ExprKind::Neg:
      return -differentiate(e.child(0));
    case ExprKind::Log:
      return s_div(differentiate(e.child(0)), e.child(0));
    case ExprKind::Exp:
      return s_mul(exp(e.child(0)), differentiate(e.child(0)));
    case ExprKind::Sqrt:
      return s_div(differentiate(e.child(0)),
                   s_mul(Expr::constant(2.0), sqrt(e.child(0))));
  }
  throw Error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Constant folding

Expr constant_fold(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Var:
    case ExprKind::Const:
      return e;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      Expr l = constant_fold(e.child(0));
      Expr r = constant_fold(e.child(1));
      if (both_const(l, r)) {
        // Leave the node intact if evaluation fails (e.g. 1/0).
        try {
          Expr folded = Expr::make(e.kind(), l.node_, r.node_);
          return Expr::constant(evaluate(folded, Complex(0.0, 1.0)));
        } catch (const EvalError&) {
        }
      }
      switch (e.kind()) {
        case ExprKind::Add:
          if (is_const(l, 0.0)) return r;
          if (is_const(r, 0.0)) return l;
          break;
        case ExprKind::Sub:
          if (is_const(r, 0.0)) return l;
          if (is_const(l, 0.0)) return constant_fold(-r);
          break;
        case ExprKind::Mul:
          if (is_const(l, 0.0) || is_const(r, 0.0)) return Expr::constant(0.0);
          if (is_const(l, 1.0)) return r;
          if (is_const(r, 1.0)) return l;
          break;
        case ExprKind::Div:
          if (is_const(r, 1.0)) return l;
          break;
        default:
          break;
      }
      return Expr::make(e.kind(), l.node_, r.node_);
    }
    case ExprKind::Pow: {
      Expr base = constant_fold(e.child(0));
      int n = e.exponent();
      if (n == 0) return Expr::constant(1.0);
      if (n == 1) return base;
      if (base.kind() == ExprKind::Const) {
        try {
          return Expr::constant(integer_power(base.constant_value(), n));
        } catch (const EvalError&) {
        }
      }
      return pow(base, n);
    }
    case ExprKind::Neg: {
      Expr c = constant_fold(e.child(0));
      if (c.kind() == ExprKind::Const) return Expr::constant(-c.constant_value());
      if (c.kind() == ExprKind::Neg) return c.child(0);
      return -c;
    }
    case ExprKind::Log:
    case ExprKind::Exp:
    case ExprKind::Sqrt: {
      Expr c = constant_fold(e.child(0));
      Expr folded = Expr::make(e.kind(), c.node_);
      if (c.kind() == ExprKind::Const) {
        try {
          return Expr::constant(evaluate(folded, Complex(0.0, 1.0)));
        } catch (const EvalError&) {
        }
      }
      return folded;
    }
  }
  throw Error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Grammar levels, loosest to tightest binding. A child is parenthesized when
// its level is below what its position requires, so the printed text reparses
// to the identical tree.
constexpr int kLevelAdd = 1;
constexpr int kLevelMul = 2;
constexpr int kLevelFactor = 3;
constexpr int kLevelAtom = 4;

struct Rendered {
  std::string text;
  int level;
};

std::string wrap(const Rendered& r, int required) {
  if (r.level >= required) return r.text;
  return "(" + r.text + ")";
}

Rendered render_constant(Complex v) {
  double re = v.real(), im = v.imag();
  if (im == 0.0) {
    std::string s = format_double(re);
    return {s, s[0] == '-' ? kLevelFactor : kLevelAtom};
  }
  std::string im_part;
  int im_level;
  double am = std::abs(im);
  if (am == 1.0) {
    im_part = "i";
    im_level = kLevelAtom;
  } else {
    im_part = format_double(am) + "*i";
    im_level = kLevelMul;
  }
  if (re == 0.0) {
    if (im > 0.0) return {im_part, im_level};
    return {"-" + im_part, am == 1.0 ? kLevelFactor : kLevelMul};
  }
  return {format_double(re) + (im > 0.0 ? " + " : " - ") + im_part, kLevelAdd};
}

Rendered render(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Var:
      return {"z", kLevelAtom};
    case ExprKind::Const:
      return render_constant(e.constant_value());
    case ExprKind::Add:
      return {wrap(render(e.child(0)), kLevelAdd) + " + " +
                  wrap(render(e.child(1)), kLevelMul),
              kLevelAdd};
    case ExprKind::Sub:
      return {wrap(render(e.child(0)), kLevelAdd) + " - " +
                  wrap(render(e.child(1)), kLevelMul),
              kLevelAdd};
    case ExprKind::Mul:
      return {wrap(render(e.child(0)), kLevelMul) + "*" +
                  wrap(render(e.child(1)), kLevelFactor),
              kLevelMul};
    case ExprKind::Div:
      return {wrap(render(e.child(0)), kLevelMul) + "/" +
                  wrap(render(e.child(1)), kLevelFactor),
              kLevelMul};
    case ExprKind::Pow: {
      int n = e.exponent();
      std::string exp_text =
          n < 0 ? "^(-" + std::to_string(-static_cast<long long>(n)) + ")"
                : "^" + std::to_string(n);
      return {wrap(render(e.child(0)), kLevelAtom) + exp_text, kLevelFactor};
    }
    case ExprKind::Neg:
      return {"-" + wrap(render(e.child(0)), kLevelAtom), kLevelFactor};
    case ExprKind::Log:
      return {"log(" + render(e.child(0)).text + ")", kLevelAtom};
    case ExprKind::Exp:
      return {"exp(" + render(e.child(0)).text + ")", kLevelAtom};
    case ExprKind::Sqrt:
      return {"sqrt(" + render(e.child(0)).text + ")", kLevelAtom};
  }
  throw Error("unreachable expression kind");
}

}  // namespace

std::string to_text(const Expr& e) { return render(e).text; }

}  // namespace wemin
