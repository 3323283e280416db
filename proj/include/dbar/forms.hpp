#pragma once

#include <cstdint>
#include <vector>

#include "dbar/expr.hpp"
#include "dbar/geometry.hpp"

namespace dbar {

/// Point z = (z1, ..., zn) of the product domain.
using EvalPoint = std::vector<cplx>;

/// Ω = D1 × ... × Dn.
class ProductDomain {
 public:
  explicit ProductDomain(std::vector<StarDomain> factors);

  int arity() const noexcept { return static_cast<int>(factors_.size()); }
  const StarDomain& operator[](std::size_t j) const { return factors_[j]; }
  const std::vector<StarDomain>& factors() const noexcept { return factors_; }

  /// Every coordinate lies inside its factor with the given margin.
  bool contains(const EvalPoint& z, double margin = 0.0) const;

 private:
  std::vector<StarDomain> factors_;
};

/// (0,1) form f = f1 dz̄1 + ... + fn dz̄n with expression components.
class OneForm {
 public:
  OneForm(int arity, std::vector<Expr> components);

  int arity() const noexcept { return arity_; }
  const Expr& operator[](std::size_t j) const { return components_[j]; }
  const std::vector<Expr>& components() const noexcept { return components_; }

  OneForm scaled(cplx alpha) const;
  /// alpha·this + beta·other
  OneForm combined(cplx alpha, const OneForm& other, cplx beta) const;

 private:
  int arity_;
  std::vector<Expr> components_;
};

struct SamplePlan {
  std::vector<EvalPoint> points;
};

/// Uniform rejection sampling in Ω with `contains(D_j, z_j, margin)` for all j.
/// Deterministic for a given seed.
SamplePlan sample_plan(const ProductDomain& domain, int count, double margin, std::uint64_t seed);

/// Validates explicit points against the domain and margin.
SamplePlan explicit_plan(const ProductDomain& domain, std::vector<EvalPoint> points, double margin);

/// f_j = ∂u/∂z̄_j.
OneForm manufacture_form(const Expr& u, int arity);

/// max over points and pairs i < j of |∂̄_i f_j − ∂̄_j f_i|.
double closedness_residual(const OneForm& f, const SamplePlan& plan);

/// max over points and components of |f_j|.
double sup_norm(const OneForm& f, const SamplePlan& plan);
double sup_norm(const Expr& e, const SamplePlan& plan);

}  // namespace dbar
