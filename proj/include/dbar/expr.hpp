#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dbar {

using cplx = std::complex<double>;

/// Immutable complex-valued expression in z1..zn and their conjugates.
///
/// Nodes are shared; building a new expression never mutates an old one.
/// The smart constructors below fold constants and absorb 0/1 operands but
/// do no other simplification.
class Expr {
 public:
  enum class Kind { kConst, kVar, kConj, kNeg, kAdd, kSub, kMul, kDiv, kPow, kExp, kSin, kCos };

  Expr();  // the constant 0
  Expr(cplx value);  // NOLINT(google-explicit-constructor)
  Expr(double value) : Expr(cplx(value, 0.0)) {}  // NOLINT(google-explicit-constructor)

  static Expr variable(int index);  // 1-based

  Kind kind() const;
  cplx value() const;      // kConst
  int index() const;       // kVar: variable index, kPow: exponent
  const Expr& arg() const; // unary nodes and kPow base
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_constant() const { return kind() == Kind::kConst; }
  bool is_zero() const { return is_constant() && value() == cplx(0.0); }
  bool is_one() const { return is_constant() && value() == cplx(1.0); }

  /// Highest variable index referenced (0 for constants).
  int max_variable() const;
  /// Number of nodes in the tree.
  std::size_t size() const;
  bool uses_conj() const;

  /// Re-parseable text form.
  std::string to_string() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr conj(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr pow(const Expr& a, int n);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Kind kind, cplx value, int index, Expr a, Expr b);

  std::shared_ptr<const Node> node_;
};

/// Grammar (loosest to tightest): `+ -`, `* /`, unary `-`, `^ int`; so -z1^2 is −(z1²).
/// Functions conj, exp, sin, cos, pow(e, int); variables z1..z9; literals
/// `2`, `1.5`, `1e-3`, `i`, `3i`. Throws ParseError (with offset) on bad
/// syntax and ValidationError when a variable index exceeds `arity`.
Expr parse(std::string_view text, int arity);

/// Evaluates at the point (z1, ..., zn). Division by zero throws NumericalError.
cplx eval(const Expr& e, std::span<const cplx> point);

/// Same tree walk in long double, for reference values where cancellation
/// inside the expression would swamp double rounding.
std::complex<long double> eval_extended(const Expr& e, std::span<const cplx> point);

/// ∂/∂z̄_j (Wirtinger).
Expr d_bar(const Expr& e, int j);
/// ∂/∂z_j (Wirtinger).
Expr d_z(const Expr& e, int j);

/// ∂^k e / ∂z̄_{j1} ... ∂z̄_{jk}.
Expr d_bar(const Expr& e, std::span<const int> indices);

/// Flat postfix program for fast repeated evaluation inside quadrature loops.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);

  cplx operator()(std::span<const cplx> point) const;

  bool is_constant() const noexcept { return constant_; }
  bool is_zero() const noexcept { return constant_ && constant_value_ == cplx(0.0); }
  int max_variable() const noexcept { return max_variable_; }

 private:
  struct Instr {
    Expr::Kind op;
    int index;
    cplx value;
  };
  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
  int max_variable_ = 0;
  bool constant_ = false;
  cplx constant_value_{};
};

}  // namespace dbar
