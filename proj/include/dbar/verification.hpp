#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dbar/operator_t.hpp"

namespace dbar {

/// 2∫_D dA/|ζ − z|^α (the |dζ̄∧dζ| measure) for each z, in polar coordinates
/// about z with the radial integral done exactly: Σ_segments (hi^{2−α} − lo^{2−α})/(2−α).
/// The angular trapezoid count grows like 1/dist(z, ∂D). Requires α < 2.
std::vector<double> lemma_bound_area(const StarDomain& d, double alpha, const std::vector<cplx>& z_list);

/// ∮_{∂D} |dζ|/|ζ − z|^α for each z on a trapezoid rule refined like 1/dist(z, ∂D).
/// Requires α < 1.
std::vector<double> lemma_bound_boundary(const StarDomain& d, double alpha,
                                         const std::vector<cplx>& z_list);

struct BoundProbe {
  std::vector<double> distances;  // dist(z, ∂D) of each probe point
  std::vector<double> values;
  /// Every value ≤ factor × the running max of the values before it.
  bool bounded = true;
  double worst_growth = 0.0;  // max of value / running max
};

enum class BoundKind { kArea, kBoundary };

/// Probe points on the ray from the center through θ0, at the given radial gaps
/// to the boundary, ordered as given.
BoundProbe probe_bound(const StarDomain& d, BoundKind kind, double alpha, const std::vector<double>& gaps,
                       double theta0 = 0.0, double factor = 1.1);

struct StokesResult {
  cplx lhs;
  cplx rhs;
  double difference = 0.0;
};

/// Both sides of the iterated Stokes identity for smooth f, g on Ω (n ≤ 3):
///   ∫_Ω (∂ⁿf/∂ζ̄₁…∂ζ̄ₙ) g = Σ_J (−1)^{|J|} ∫_{D_J × ∂D_{J^c}} f · ∂^{|J|} g/∂ζ̄_J,
/// solid factors with dζ̄∧dζ, boundary factors with dζ. Uses centre-based area
/// rules (n_rho × n_theta) and boundary rules (n_boundary) from the suite.
StokesResult stokes_check(const Expr& f, const Expr& g, const ProductDomain& domain,
                          const QuadratureSuite& suite);

struct SupnormRow {
  std::string label;
  double f_norm = 0.0;
  double tf_norm = 0.0;
  std::optional<double> ratio;  // empty for the zero form
};

struct SupnormTable {
  std::vector<SupnormRow> rows;
  std::optional<double> max_ratio;
};

struct CatalogEntry {
  std::string label;
  OneForm form;
};

/// Twenty manufactured ∂̄-closed forms on n = 2 whose sup norms span four decades.
std::vector<CatalogEntry> default_catalog();

/// sup|T f| / sup|f| over the plan for each form.
SupnormTable supnorm_study(const std::vector<CatalogEntry>& catalog, const ProductDomain& domain,
                           const QuadratureSuite& suite, const SamplePlan& plan,
                           int threads = default_threads());

struct ConvergenceRow {
  QuadratureSuite suite;
  double max_error = 0.0;  // max |T f − u| over the plan
  double residual = 0.0;   // residual_dbar
};

/// T(∂̄u) against u and its FD ∂̄ residual for each suite.
std::vector<ConvergenceRow> convergence_study(const Expr& u, const ProductDomain& domain,
                                              const std::vector<QuadratureSuite>& suites,
                                              const SamplePlan& plan, double h,
                                              int threads = default_threads());

/// g_z^{k,I} as an expression in the s variables z1..zs (standing for ζ_{i1}..ζ_{is})
/// with z fixed; `k` is 0-based. The oracle for the closed-form derivatives.
Expr kernel_expression(const std::vector<cplx>& z, std::size_t k);

}  // namespace dbar
