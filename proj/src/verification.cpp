#include "dbar/verification.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>

#include "dbar/error.hpp"

namespace dbar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int refined_count(double dist, int minimum) {
  const double want = 64.0 / std::max(dist, 1e-9);
  return std::max(minimum, static_cast<int>(std::min(want, 1e8)));
}

void require_inside(const StarDomain& d, cplx z) {
  if (!contains(d, z, 0.0) || boundary_distance(d, z) <= 0.0) {
    throw ValidationError("probe point is not inside the domain");
  }
}

// Nodes with weights for the tensor sums below; CauchyRule is just that pair.
CauchyRule solid_nodes(const StarDomain& d, const FactorSize& size) {
  const AreaRule r = area_rule(d, size.n_rho, size.n_theta);
  CauchyRule out;
  out.nodes = r.nodes;
  for (double w : r.weights) out.weights.emplace_back(0.0, 2.0 * w);
  return out;
}

CauchyRule boundary_nodes(const StarDomain& d, const FactorSize& size) {
  const BoundaryRule r = boundary_rule(d, size.n_boundary);
  return CauchyRule{r.nodes, r.tangents};
}

}  // namespace

std::vector<double> lemma_bound_area(const StarDomain& d, double alpha, const std::vector<cplx>& z_list) {
  if (!(alpha < 2.0)) throw ValidationError("area bound needs alpha < 2");
  const double e = 2.0 - alpha;
  std::vector<double> out;
  for (const cplx& z : z_list) {
    require_inside(d, z);
    const int n = refined_count(boundary_distance(d, z), 1024);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      for (const auto& [lo, hi] : ray_segments(d, z, kTwoPi * j / n)) {
        sum += (std::pow(hi, e) - std::pow(lo, e)) / e;
      }
    }
    out.push_back(2.0 * sum * kTwoPi / n);
  }
  return out;
}

std::vector<double> lemma_bound_boundary(const StarDomain& d, double alpha,
                                         const std::vector<cplx>& z_list) {
  if (!(alpha < 1.0)) throw ValidationError("boundary bound needs alpha < 1");
  std::vector<double> out;
  for (const cplx& z : z_list) {
    require_inside(d, z);
    const BoundaryRule rule = boundary_rule(d, refined_count(boundary_distance(d, z), 1024));
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      sum += std::abs(rule.tangents[q]) / std::pow(std::abs(rule.nodes[q] - z), alpha);
    }
    out.push_back(sum);
  }
  return out;
}

BoundProbe probe_bound(const StarDomain& d, BoundKind kind, double alpha, const std::vector<double>& gaps,
                       double theta0, double factor) {
  const cplx dir(std::cos(theta0), std::sin(theta0));
  const double r = d.radius(theta0);
  std::vector<cplx> points;
  BoundProbe probe;
  for (double g : gaps) {
    if (!(g > 0.0 && g < r)) throw ValidationError("probe gaps must lie in (0, r(theta0))");
    points.push_back(d.center() + (r - g) * dir);
    probe.distances.push_back(boundary_distance(d, points.back()));
  }
  probe.values = kind == BoundKind::kArea ? lemma_bound_area(d, alpha, points)
                                          : lemma_bound_boundary(d, alpha, points);
  double running = probe.values.empty() ? 0.0 : probe.values.front();
  for (std::size_t i = 1; i < probe.values.size(); ++i) {
    const double growth = probe.values[i] / running;
    probe.worst_growth = std::max(probe.worst_growth, growth);
    if (!(growth <= factor)) probe.bounded = false;
    running = std::max(running, probe.values[i]);
  }
  return probe;
}

StokesResult stokes_check(const Expr& f, const Expr& g, const ProductDomain& domain,
                          const QuadratureSuite& suite) {
  const int n = domain.arity();
  suite.validate(n);
  if (n > kMaxIteratedOrder && !suite.allow_large) {
    throw ValidationError("Stokes check for n > 3 exceeds the cost guard");
  }
  if (f.max_variable() > n || g.max_variable() > n) throw ValidationError("expression exceeds the arity");
  std::vector<CauchyRule> solid, boundary;
  for (int j = 0; j < n; ++j) {
    solid.push_back(solid_nodes(domain[j], suite.factors[j]));
    boundary.push_back(boundary_nodes(domain[j], suite.factors[j]));
  }
  std::vector<int> all(n);
  for (int j = 0; j < n; ++j) all[j] = j + 1;
  std::vector<int> coords(n);
  for (int j = 0; j < n; ++j) coords[j] = j;
  const EvalPoint origin(n, cplx(0.0));

  StokesResult result;
  const Expr lhs_integrand = d_bar(f, std::span<const int>(all)) * g;
  result.lhs = detail::tensor_sum(CompiledExpr(lhs_integrand), origin, coords, solid);

  cplx rhs(0.0);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> J;
    std::vector<CauchyRule> rules;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        J.push_back(j + 1);
        rules.push_back(solid[j]);
      } else {
        rules.push_back(boundary[j]);
      }
    }
    const Expr integrand = f * d_bar(g, std::span<const int>(J));
    const cplx v = detail::tensor_sum(CompiledExpr(integrand), origin, coords, rules);
    rhs += (J.size() % 2 == 0) ? v : -v;
  }
  result.rhs = rhs;
  result.difference = std::abs(result.lhs - result.rhs);
  return result;
}

std::vector<CatalogEntry> default_catalog() {
  static const char* const potentials[] = {
      "conj(z1)*conj(z2)",        "conj(z1)^2",
      "conj(z2)^2*z1",            "conj(z1)*z2^2",
      "conj(z1)^2*conj(z2)",      "exp(conj(z1))",
      "sin(conj(z2))",            "conj(z1)*conj(z2)^2 + z1",
      "cos(conj(z1) + conj(z2))", "conj(z1)*z1",
      "conj(z1)*z1*conj(z2)*z2",  "conj(z1)^3",
      "exp(conj(z1)*conj(z2))",   "conj(z2)*z1*z2",
      "conj(z1) + 2i*conj(z2)",   "sin(conj(z1))*cos(z2)",
      "conj(z1)^2*z1 - conj(z2)", "(conj(z1) - conj(z2))^2",
      "conj(z1)*exp(z2)",         "conj(z2)^3*z1^2",
  };
  constexpr int count = static_cast<int>(std::size(potentials));
  std::vector<CatalogEntry> out;
  for (int i = 0; i < count; ++i) {
    // scales 1e-2 .. 1e2, geometric
    const double scale = std::pow(10.0, -2.0 + 4.0 * i / (count - 1));
    const Expr u = Expr(scale) * parse(potentials[i], 2);
    char label[160];
    std::snprintf(label, sizeof label, "%.6g*(%s)", scale, potentials[i]);
    out.push_back(CatalogEntry{label, manufacture_form(u, 2)});
  }
  return out;
}

SupnormTable supnorm_study(const std::vector<CatalogEntry>& catalog, const ProductDomain& domain,
                           const QuadratureSuite& suite, const SamplePlan& plan, int threads) {
  if (catalog.empty()) throw ValidationError("supnorm study needs a non-empty catalog");
  if (plan.points.empty()) throw ValidationError("supnorm study needs sample points");
  SupnormTable table;
  for (const CatalogEntry& entry : catalog) {
    SupnormRow row;
    row.label = entry.label;
    row.f_norm = sup_norm(entry.form, plan);
    const TSolver solver(domain, entry.form, suite);
    std::vector<double> mags(plan.points.size());
    parallel_for(plan.points.size(), threads,
                 [&](std::size_t i) { mags[i] = std::abs(solver(plan.points[i])); });
    row.tf_norm = *std::max_element(mags.begin(), mags.end());
    if (row.f_norm > 0.0) {
      row.ratio = row.tf_norm / row.f_norm;
      table.max_ratio = std::max(table.max_ratio.value_or(0.0), *row.ratio);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<ConvergenceRow> convergence_study(const Expr& u, const ProductDomain& domain,
                                              const std::vector<QuadratureSuite>& suites,
                                              const SamplePlan& plan, double h, int threads) {
  const OneForm f = manufacture_form(u, domain.arity());
  const CompiledExpr exact(u);
  std::vector<ConvergenceRow> rows;
  for (const QuadratureSuite& suite : suites) {
    const TSolver solver(domain, f, suite);
    ConvergenceRow row;
    row.suite = suite;
    std::vector<double> err(plan.points.size()), res(plan.points.size());
    parallel_for(plan.points.size(), threads, [&](std::size_t i) {
      const EvalPoint& z = plan.points[i];
      err[i] = std::abs(solver(z) - exact(z));
      res[i] = residual_dbar(f, solver, SamplePlan{{z}}, h);
    });
    for (std::size_t i = 0; i < err.size(); ++i) {
      row.max_error = std::max(row.max_error, err[i]);
      row.residual = std::max(row.residual, res[i]);
    }
    rows.push_back(row);
  }
  return rows;
}

Expr kernel_expression(const std::vector<cplx>& z, std::size_t k) {
  const std::size_t s = z.size();
  if (s == 0 || k >= s) throw ValidationError("kernel expression: bad distinguished position");
  std::vector<Expr> a;
  for (std::size_t l = 0; l < s; ++l) a.push_back(Expr::variable(static_cast<int>(l) + 1) - Expr(z[l]));
  Expr g_sum;
  for (std::size_t p = 0; p < s; ++p) {
    Expr prod(1.0);
    for (std::size_t l = 0; l < s; ++l) {
      if (l != p) prod = prod * a[l] * conj(a[l]);
    }
    g_sum = g_sum + prod;
  }
  Expr num(1.0);
  for (std::size_t l = 0; l < s; ++l) {
    if (l != k) num = num * conj(a[l]);
  }
  return num / (a[k] * g_sum);
}

}  // namespace dbar
