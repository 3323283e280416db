#include "dbar/operator_ttilde.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <numbers>

#include "dbar/error.hpp"

namespace dbar {

namespace {

void require_interior(const ProductDomain& domain, const EvalPoint& z, double margin) {
  if (static_cast<int>(z.size()) != domain.arity()) {
    throw ValidationError("evaluation point arity does not match the domain");
  }
  if (!domain.contains(z, margin)) {
    throw NumericalError("evaluation point is not inside the domain with the required margin");
  }
}

template <class F>
cplx boundary_sum(const std::vector<BoundaryRule>& rules, std::span<const int> coords, EvalPoint& point,
                  std::size_t level, F& integrand) {
  if (level == rules.size()) return integrand(point);
  const BoundaryRule& r = rules[level];
  cplx sum(0.0);
  for (std::size_t q = 0; q < r.size(); ++q) {
    point[coords[level]] = r.nodes[q];
    sum += r.tangents[q] * boundary_sum(rules, coords, point, level + 1, integrand);
  }
  return sum;
}

/// ∫ over Π_{solid} D_j (dζ̄∧dζ each, singular at z) × Π_{boundary} ∂D_t (dζ each).
template <class F>
cplx mixed_integral(const ProductDomain& domain, const EvalPoint& z, const QuadratureSuite& suite,
                    std::span<const int> solid, std::span<const int> boundary, F&& integrand) {
  std::vector<StarDomain> factors;
  std::vector<cplx> centre;
  std::vector<FactorSize> sizes;
  for (int j : solid) {
    factors.push_back(domain[j]);
    centre.push_back(z[j]);
    sizes.push_back(suite.factors[j]);
  }
  const SolidBlock block(std::move(factors), std::move(centre), std::move(sizes));
  std::vector<BoundaryRule> brules;
  for (int t : boundary) brules.push_back(boundary_rule(domain[t], suite.factors[t].n_boundary));
  const std::size_t p = solid.size();
  EvalPoint point = z;
  std::vector<cplx> nodes, weights;
  cplx total(0.0);
  for (std::size_t c = 0; c < block.chunk_count(); ++c) {
    block.chunk(c, nodes, weights);
    cplx part(0.0);
    for (std::size_t q = 0; q < weights.size(); ++q) {
      for (std::size_t j = 0; j < p; ++j) point[solid[j]] = nodes[q * p + j];
      part += weights[q] * boundary_sum(brules, boundary, point, 0, integrand);
    }
    total += part;
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) {
    throw NumericalError("non-finite value in a mixed solid/boundary integral");
  }
  return total;
}

cplx bracket(const ProductDomain& domain, const IndexSet& I, const std::vector<CompiledExpr>& comps,
             const EvalPoint& z, const QuadratureSuite& suite) {
  const std::size_t s = I.size();
  cplx total(0.0);
  std::vector<cplx> a(s);
  for (std::size_t k = 0; k < s; ++k) {
    const CompiledExpr& fk = comps[I[k] - 1];
    if (fk.is_zero()) continue;
    // every subset J of the other positions; its complement runs over the boundary
    const std::uint32_t others = ((1u << s) - 1) & ~(1u << k);
    for (std::uint32_t mask = others;; mask = (mask - 1) & others) {
      std::vector<int> solid, boundary;
      for (std::size_t p = 0; p < s; ++p) {
        if (p == k || (mask & (1u << p))) {
          solid.push_back(I[p] - 1);
        } else {
          boundary.push_back(I[p] - 1);
        }
      }
      const cplx v = mixed_integral(domain, z, suite, solid, boundary, [&](const EvalPoint& pt) {
        for (std::size_t p = 0; p < s; ++p) a[p] = pt[I[p] - 1] - z[I[p] - 1];
        return fk(pt) * kernel_derivative_from_differences(a, k, mask);
      });
      total += (std::popcount(mask) % 2 == 0) ? v : -v;
      if (mask == 0) break;
    }
  }
  return total / std::pow(cplx(0.0, -2.0 * std::numbers::pi), static_cast<int>(s));
}

std::vector<CompiledExpr> compile(const OneForm& f) {
  std::vector<CompiledExpr> out;
  for (const Expr& c : f.components()) out.emplace_back(c);
  return out;
}

void check_setup(const ProductDomain& domain, const OneForm& f, const QuadratureSuite& suite) {
  if (f.arity() != domain.arity()) throw ValidationError("form arity does not match the domain");
  suite.validate(domain.arity());
}

}  // namespace

cplx t_bracket(const ProductDomain& domain, const IndexSet& I, const OneForm& f, const EvalPoint& z,
               const QuadratureSuite& suite) {
  check_setup(domain, f, suite);
  if (I.max() > domain.arity()) throw ValidationError("index set exceeds the domain arity");
  if (static_cast<int>(I.size()) > kMaxIteratedOrder && !suite.allow_large) {
    throw ValidationError("bracket of order " + std::to_string(I.size()) +
                          " exceeds the cost guard; set allow_large to proceed");
  }
  if (I.size() == 1) return slice_transform(domain, I[0], f[I[0] - 1], z, suite);
  require_interior(domain, z, suite.margin);
  return bracket(domain, I, compile(f), z, suite);
}

TTildeSolver::TTildeSolver(ProductDomain domain, OneForm f, QuadratureSuite suite)
    : domain_(std::move(domain)), f_(std::move(f)), suite_(std::move(suite)) {
  check_setup(domain_, f_, suite_);
  if (domain_.arity() > kMaxIteratedOrder && !suite_.allow_large) {
    throw ValidationError("T̃ for n = " + std::to_string(domain_.arity()) +
                          " exceeds the cost guard; set allow_large to proceed");
  }
  components_ = compile(f_);
}

SolveEntry TTildeSolver::evaluate(const EvalPoint& z) const {
  require_interior(domain_, z, suite_.margin);
  const int n = domain_.arity();
  SolveEntry entry;
  entry.point = z;
  cplx total(0.0);
  for (int s = 1; s <= n; ++s) {
    for (const IndexSet& I : index_sets(n, s)) {
      const cplx v = s == 1 ? slice_transform(domain_, I[0], f_[I[0] - 1], z, suite_)
                            : bracket(domain_, I, components_, z, suite_);
      entry.terms.push_back(TermValue{I.indices(), v});
      total += (s % 2 == 1) ? v : -v;
    }
  }
  entry.value = total;
  return entry;
}

SolveEntry solve_ttilde(const ProductDomain& domain, const OneForm& f, const EvalPoint& z,
                        const QuadratureSuite& suite) {
  return TTildeSolver(domain, f, suite).evaluate(z);
}

SolveReport solve_ttilde(const ProductDomain& domain, const OneForm& f, const SamplePlan& plan,
                         const QuadratureSuite& suite, int threads, bool timings) {
  const TTildeSolver solver(domain, f, suite);
  SolveReport report;
  report.op = "ttilde";
  report.suite = suite;
  report.entries.resize(plan.points.size());
  parallel_for(plan.points.size(), threads, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    report.entries[i] = solver.evaluate(plan.points[i]);
    if (timings) {
      report.entries[i].seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  });
  report.closedness = closedness_residual(f, plan);
  report.closed = report.closedness <= 1e-9 * std::max(1.0, sup_norm(f, plan));
  return report;
}

cplx ttilde_dim2_explicit(const ProductDomain& domain, const OneForm& f, const EvalPoint& z,
                          const QuadratureSuite& suite) {
  if (domain.arity() != 2) throw ValidationError("the explicit formula is for n = 2");
  check_setup(domain, f, suite);
  require_interior(domain, z, suite.margin);
  const CompiledExpr f1(f[0]), f2(f[1]);
  const int first[] = {0}, second[] = {1}, both[] = {0, 1};
  const auto diffs = [&z](const EvalPoint& p) {
    return std::pair<cplx, cplx>(p[0] - z[0], p[1] - z[1]);
  };
  const cplx term1 = mixed_integral(domain, z, suite, second, first, [&](const EvalPoint& p) {
    const auto [a1, a2] = diffs(p);
    return std::conj(a1) * f2(p) / (a2 * (std::norm(a1) + std::norm(a2)));
  });
  const cplx term2 = mixed_integral(domain, z, suite, first, second, [&](const EvalPoint& p) {
    const auto [a1, a2] = diffs(p);
    return std::conj(a2) * f1(p) / (a1 * (std::norm(a1) + std::norm(a2)));
  });
  const cplx term3 = mixed_integral(domain, z, suite, both, {}, [&](const EvalPoint& p) {
    const auto [a1, a2] = diffs(p);
    const double r2 = std::norm(a1) + std::norm(a2);
    return std::conj(a1) * f1(p) / (r2 * r2);
  });
  const cplx term4 = mixed_integral(domain, z, suite, both, {}, [&](const EvalPoint& p) {
    const auto [a1, a2] = diffs(p);
    const double r2 = std::norm(a1) + std::norm(a2);
    return std::conj(a2) * f2(p) / (r2 * r2);
  });
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  return slice_transform(domain, 1, f[0], z, suite) + slice_transform(domain, 2, f[1], z, suite) -
         (term1 + term2 - term3 - term4) / (two_pi_i * two_pi_i);
}

}  // namespace dbar
