#pragma once

#include "dbar/operator_t.hpp"

namespace dbar {

/// T^{[I]} f at z: the mixed solid × boundary integrals of f_{i_k} against
/// ∂^m g_z^{k,I}/∂ζ̄_J, summed over k, m and J ⊆ I∖{i_k} with |J| = m. The
/// solid factors J ∪ {i_k} share one SolidBlock about z; every other factor of I
/// runs over its boundary rule. For |I| = 1 this is the slice transform.
cplx t_bracket(const ProductDomain& domain, const IndexSet& I, const OneForm& f, const EvalPoint& z,
               const QuadratureSuite& suite);

/// Evaluates T̃ f = Σ_s (−1)^{s−1} Σ_{|I|=s} T^{[I]} f pointwise.
class TTildeSolver {
 public:
  TTildeSolver(ProductDomain domain, OneForm f, QuadratureSuite suite);

  SolveEntry evaluate(const EvalPoint& z) const;
  cplx operator()(const EvalPoint& z) const { return evaluate(z).value; }

 private:
  ProductDomain domain_;
  OneForm f_;
  QuadratureSuite suite_;
  std::vector<CompiledExpr> components_;
};

SolveEntry solve_ttilde(const ProductDomain& domain, const OneForm& f, const EvalPoint& z,
                        const QuadratureSuite& suite);

/// Evaluates at every point of the plan; flags forms that are not ∂̄-closed.
SolveReport solve_ttilde(const ProductDomain& domain, const OneForm& f, const SamplePlan& plan,
                         const QuadratureSuite& suite, int threads = default_threads(),
                         bool timings = false);

/// n = 2 only: T¹f₁ + T²f₂ − (2πi)^{−2}[∮_{∂D₁}∫_{D₂} conj(a₁) f₂ /(a₂|a|²)
///   + ∫_{D₁}∮_{∂D₂} conj(a₂) f₁/(a₁|a|²) − ∫∫ conj(a₁) f₁/|a|⁴ − ∫∫ conj(a₂) f₂/|a|⁴],
/// a = ζ − z, written out term by term on the same quadrature blocks.
cplx ttilde_dim2_explicit(const ProductDomain& domain, const OneForm& f, const EvalPoint& z,
                          const QuadratureSuite& suite);

}  // namespace dbar
