#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dbar/forms.hpp"
#include "dbar/kernel_algebra.hpp"
#include "dbar/quadrature.hpp"

namespace dbar {

/// One term of the combinatorial sum: the index set I = (i1..is) and the
/// unsigned value of T^{i1}…T^{is}(∂^{s−1} f_{is}/∂z̄_{i1}…∂z̄_{i(s−1)}), or of
/// the bracket T^{[I]}f for the derivative-free operator.
struct TermValue {
  std::vector<int> indices;
  cplx value;
};

struct SolveEntry {
  EvalPoint point;
  cplx value;
  /// value = Σ (−1)^{s−1} term, s = |indices|
  std::vector<TermValue> terms;
  double seconds = 0.0;
};

struct SolveReport {
  std::string op;  // "t" or "ttilde"
  std::vector<SolveEntry> entries;
  QuadratureSuite suite;
  /// Largest |∂̄_i f_j − ∂̄_j f_i| seen at the evaluation points.
  double closedness = 0.0;
  bool closed = true;
};

/// T^k g at z: the Cauchy transform in ζ_k with every other variable frozen
/// at z. `k` is 1-based.
cplx slice_transform(const ProductDomain& domain, int k, const Expr& g, const EvalPoint& z,
                     const QuadratureSuite& suite);

/// T^{i1}…T^{is} g at z as one nested quadrature over D_{i1} × … × D_{is}.
/// `nesting` lists positions of I from the outermost loop inwards (default:
/// the order of I). |I| > 3 is rejected unless suite.allow_large.
cplx iterated_slice(const ProductDomain& domain, const IndexSet& I, const Expr& g, const EvalPoint& z,
                    const QuadratureSuite& suite, std::span<const int> nesting = {});

/// Precomputes the derivative stack of f once and evaluates T f pointwise.
class TSolver {
 public:
  TSolver(ProductDomain domain, OneForm f, QuadratureSuite suite);

  SolveEntry evaluate(const EvalPoint& z) const;
  cplx operator()(const EvalPoint& z) const { return evaluate(z).value; }

  struct Term {
    IndexSet indices;
    Expr integrand;
    CompiledExpr compiled;
  };
  const std::vector<Term>& terms() const noexcept { return terms_; }

 private:
  ProductDomain domain_;
  OneForm f_;
  QuadratureSuite suite_;
  std::vector<Term> terms_;
};

SolveEntry solve_t(const ProductDomain& domain, const OneForm& f, const EvalPoint& z,
                   const QuadratureSuite& suite);

/// Evaluates at every point of the plan, in parallel over points.
SolveReport solve_t(const ProductDomain& domain, const OneForm& f, const SamplePlan& plan,
                    const QuadratureSuite& suite, int threads = default_threads(), bool timings = false);

using PointSolver = std::function<cplx(const EvalPoint&)>;

/// max over points and k of |FD ∂/∂z̄_k solver − f_k| with central Wirtinger
/// stencils of step h.
double residual_dbar(const OneForm& f, const PointSolver& solver, const SamplePlan& plan, double h);

namespace detail {
/// Σ over the tensor product of per-factor weighted node lists; `factors`
/// gives the 0-based coordinate each list substitutes into `point`.
cplx tensor_sum(const CompiledExpr& g, EvalPoint point, std::span<const int> factors,
                std::span<const CauchyRule> rules);
}  // namespace detail

}  // namespace dbar
