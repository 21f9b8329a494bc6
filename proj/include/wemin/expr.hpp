#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "wemin/types.hpp"

namespace wemin {

enum class ExprKind : std::uint8_t {
  Var,    // the variable z
  Const,  // complex constant
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // integer exponent, possibly negative
  Neg,
  Log,   // principal branch
  Exp,
  Sqrt,  // principal branch
};

// Immutable AST of a holomorphic expression in one complex variable z.
//
// There is deliberately no conjugation node: anti-holomorphic parts are
// represented structurally elsewhere (see HarmonicMap), which keeps
// differentiation total and meaningful on this grammar. Log and Sqrt use the
// principal branch (cut along the closed negative real axis), which is
// analytic on the open upper half-plane. Fractional powers must be spelled
// via exp/log so the caller owns the branch decision.
//
// Expr values are cheap shared handles; trees are immutable after
// construction and freely shareable across threads.
class Expr {
 public:
  static Expr var();
  static Expr constant(Complex value);
  static Expr constant(double value) { return constant(Complex(value, 0.0)); }

  ExprKind kind() const { return node_->kind; }
  // Const nodes only.
  Complex constant_value() const;
  // Pow nodes only.
  int exponent() const;
  // index 0 = only/left child, 1 = right child.
  Expr child(int index) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;

  friend Expr pow(const Expr& base, int exponent);
  friend Expr log(const Expr& x);
  friend Expr exp(const Expr& x);
  friend Expr sqrt(const Expr& x);

 private:
  struct Node {
    ExprKind kind;
    Complex value{0.0, 0.0};
    int exponent = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Expr(NodePtr node) : node_(std::move(node)) {}
  static Expr make(ExprKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr);

  NodePtr node_;

  friend Complex evaluate(const Expr& e, Complex z);
  friend Expr differentiate(const Expr& e);
  friend Expr constant_fold(const Expr& e);
  friend std::string to_text(const Expr& e);
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " (byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' int)?
//   unary  := '-'? atom
//   atom   := 'z' | 'i' | 'pi' | number | func '(' expr ')' | '(' expr ')'
//   func   := 'log' | 'exp' | 'sqrt'
// Whitespace insensitive; numbers are decimal with optional exponent; the
// '^' exponent is an integer, optionally negative, optionally parenthesized.
Expr parse(std::string_view text);

// Evaluates e at z with principal branches. Throws EvalError on a branch cut
// hit, division by zero, or any non-finite intermediate.
Complex evaluate(const Expr& e, Complex z);

// Exact symbolic derivative d/dz. Total on the grammar.
Expr differentiate(const Expr& e);

// Collapses constant subtrees and trivial identities (x+0, 1*x, x^1, ...)
// into a pointwise-equal expression.
Expr constant_fold(const Expr& e);

// Prints e so that parse(to_text(e)) reconstructs the same tree;
// to_text . parse . to_text is a fixed point on its image.
std::string to_text(const Expr& e);

}  // namespace wemin
