#pragma once

#include <functional>

#include "dbar/geometry.hpp"

namespace dbar {

using ScalarField1D = std::function<cplx(cplx)>;

/// Default interior margin for evaluation points.
inline constexpr double kDefaultMargin = 1e-3;

/// Node counts for the polar rule centred at the evaluation point.
struct PolarSize {
  int n_rho = 64;
  int n_phi = 64;
};

/// (1/2πi) ∮ g(ζ)/(ζ − z) dζ on the boundary rule.
/// Throws NumericalError when z is not inside with the given margin.
cplx boundary_cauchy(const StarDomain& d, const ScalarField1D& g, cplx z, const BoundaryRule& rule,
                     double margin = kDefaultMargin);

/// ∫_D dζ̄∧dζ/(ζ − z) = 2πi (boundary_cauchy(conj, z) − conj(z)).
cplx singular_moment(const StarDomain& d, cplx z, const BoundaryRule& rule,
                     double margin = kDefaultMargin);

/// Nodes and complex weights with Tf(z) ≈ Σ weights[q] f(nodes[q]), where
/// Tf(z) = −(1/2πi) ∫_D f(ζ)/(ζ − z) dζ̄∧dζ. The polar rule is centred at z, so
/// the Jacobian ρ absorbs the Cauchy kernel and the weights stay bounded.
struct CauchyRule {
  std::vector<cplx> nodes;
  std::vector<cplx> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

CauchyRule cauchy_rule(const StarDomain& d, cplx z, PolarSize size,
                       double margin = kDefaultMargin);

/// Solid Cauchy transform Tf(z).
cplx cauchy_transform(const StarDomain& d, const ScalarField1D& f, cplx z, PolarSize size,
                      double margin = kDefaultMargin);

/// Solid Cauchy transform by singularity subtraction on the center-based area
/// rule plus the exact moment:
///   −(1/2πi)[Σ (f(ζ) − f(z)) 2i w/(ζ − z) + f(z) singular_moment(z)].
/// Only first-order accurate near z; kept as an independent route for checks.
cplx cauchy_transform_subtracted(const StarDomain& d, const ScalarField1D& f, cplx z,
                                 const AreaRule& arule, const BoundaryRule& brule,
                                 double margin = kDefaultMargin);

}  // namespace dbar
