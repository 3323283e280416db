#include "dbar/cauchy1d.hpp"

#include <cmath>
#include <numbers>

#include "dbar/error.hpp"

namespace dbar {

namespace {

void require_interior(const StarDomain& d, cplx z, double margin) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw NumericalError("evaluation point is not finite");
  }
  if (!contains(d, z, margin)) {
    throw NumericalError("near-singular evaluation: point is not inside the domain with margin " +
                         std::to_string(margin));
  }
}

cplx checked(cplx v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NumericalError("non-finite value in Cauchy transform");
  }
  return v;
}

}  // namespace

cplx boundary_cauchy(const StarDomain& d, const ScalarField1D& g, cplx z, const BoundaryRule& rule,
                     double margin) {
  require_interior(d, z, margin);
  cplx sum(0.0);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    sum += g(rule.nodes[q]) * rule.tangents[q] / (rule.nodes[q] - z);
  }
  return checked(sum / cplx(0.0, 2.0 * std::numbers::pi));
}

cplx singular_moment(const StarDomain& d, cplx z, const BoundaryRule& rule, double margin) {
  const cplx bc = boundary_cauchy(d, [](cplx w) { return std::conj(w); }, z, rule, margin);
  return cplx(0.0, 2.0 * std::numbers::pi) * (bc - std::conj(z));
}

CauchyRule cauchy_rule(const StarDomain& d, cplx z, PolarSize size, double margin) {
  require_interior(d, z, margin);
  const RayRule ray = ray_rule(d, z, size.n_rho, size.n_phi);
  CauchyRule rule;
  rule.nodes = ray.nodes;
  rule.weights.resize(ray.size());
  for (std::size_t q = 0; q < ray.size(); ++q) {
    // −(1/π) dA/(ζ − z) with dA = ρ dρ dφ and ζ − z = ρ e^{iφ}
    rule.weights[q] = -(ray.weights[q] / ray.rho[q]) * std::conj(ray.direction[q]) / std::numbers::pi;
  }
  return rule;
}

cplx cauchy_transform(const StarDomain& d, const ScalarField1D& f, cplx z, PolarSize size,
                      double margin) {
  const CauchyRule rule = cauchy_rule(d, z, size, margin);
  cplx sum(0.0);
  for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * f(rule.nodes[q]);
  return checked(sum);
}

cplx cauchy_transform_subtracted(const StarDomain& d, const ScalarField1D& f, cplx z,
                                 const AreaRule& arule, const BoundaryRule& brule, double margin) {
  require_interior(d, z, margin);
  const cplx fz = f(z);
  cplx sum(0.0);
  for (std::size_t q = 0; q < arule.size(); ++q) {
    const cplx diff = arule.nodes[q] - z;
    if (diff == cplx(0.0)) continue;  // bounded integrand; the node carries no mass
    sum += (f(arule.nodes[q]) - fz) * cplx(0.0, 2.0 * arule.weights[q]) / diff;
  }
  const cplx total = sum + fz * singular_moment(d, z, brule, margin);
  return checked(-total / cplx(0.0, 2.0 * std::numbers::pi));
}

}  // namespace dbar
