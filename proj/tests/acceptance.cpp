// Acceptance runner: `acceptance N` checks criterion N, `acceptance` checks all.
// Each criterion prints one PASS/FAIL line; the exit status is 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>

#include "dbar/cauchy1d.hpp"
#include "dbar/finite_difference.hpp"
#include "dbar/kernel_algebra.hpp"
#include "dbar/operator_ttilde.hpp"
#include "dbar/random.hpp"
#include "dbar/verification.hpp"

using namespace dbar;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ProductDomain polydisk(int n) { return ProductDomain(std::vector<StarDomain>(n, make_disk(0.0, 1.0))); }

std::function<cplx(const std::vector<cplx>&)> as_function(const PointSolver& s) {
  return [s](const std::vector<cplx>& z) { return s(z); };
}

// --------------------------------------------------------------------------

Outcome decomposition() {
  Rng rng(101);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<cplx> a(rng.integer(1, 8));
    for (cplx& x : a) x = rng.polar(0.1, 10.0);
    // oracle: the product evaluated directly
    cplx product(1.0);
    for (const cplx& x : a) product *= x;
    cplx sum(0.0);
    for (const cplx& t : decompose_inverse_product(a)) sum += t;
    worst = std::max(worst, std::abs(sum * product - 1.0));
  }
  return {worst <= 1e-12, "max rel error " + fmt("%.3g", worst)};
}

Outcome exponent_systems() {
  bool ok = true;
  int checked = 0;
  for (int n = 2; n <= 12; ++n) {
    for (int m = 0; m < n; ++m) {
      const ExponentChoice c = exponent_choice(n, m);
      // independent restatement of the system in integer arithmetic
      long long sum = 0;
      for (int v : c.parts) sum += v;
      bool sys = c.k > 0 && sum == c.k && static_cast<int>(c.parts.size()) == n;
      for (int j = 0; j < m; ++j) sys = sys && static_cast<long long>(c.parts[j]) * (m + 1) > c.k;
      for (int j = m; j < n - 1; ++j) sys = sys && c.parts[j] > 0;
      sys = sys && 2LL * (m + 1) * c.parts[n - 1] > c.k;
      ok = ok && sys && satisfies_bound_system(c);
      ++checked;
    }
  }
  const bool instances = exponent_choice(3, 1).parts == std::vector<int>{9, 1, 6} &&
                         exponent_choice(3, 2).parts == std::vector<int>{9, 9, 6} &&
                         exponent_choice(3, 0).parts == std::vector<int>{1, 1, 6};
  return {ok && instances, std::to_string(checked) + " systems, n=3 instances " + (instances ? "match" : "differ")};
}

Outcome kernel_derivatives() {
  Rng rng(303);
  double worst = 0.0;
  int cases = 0;
  for (int s = 1; s <= 4; ++s) {
    for (int k = 0; k < s; ++k) {
      for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
        if (mask & (1u << k)) continue;
        std::vector<int> J;
        for (int q = 0; q < s; ++q) {
          if (mask & (1u << q)) J.push_back(q + 1);
        }
        ++cases;
        // symbolic Wirtinger derivatives of g written out as an expression in a,
        // evaluated in long double to keep its own cancellation out of the comparison
        const Expr oracle = d_bar(kernel_expression(std::vector<cplx>(s, cplx(0.0)), k), J);
        for (int c = 0; c < 100; ++c) {
          std::vector<cplx> a(s);
          for (cplx& x : a) x = rng.polar(0.1, 10.0);
          const std::complex<long double> w = eval_extended(oracle, a);
          const cplx want(static_cast<double>(w.real()), static_cast<double>(w.imag()));
          worst = std::max(worst, std::abs(kernel_derivative_from_differences(a, k, mask) - want) / std::abs(want));
        }
      }
    }
  }
  return {worst <= 1e-9, std::to_string(cases) + " (n,k,J) cases, max rel error " + fmt("%.3g", worst)};
}

Outcome derivative_bound() {
  Rng rng(404);
  double worst = 0.0;
  long long configs = 0;
  for (int n = 2; n <= 4; ++n) {
    std::vector<int> all(n);
    for (int q = 0; q < n; ++q) all[q] = q + 1;
    const IndexSet I(all);
    for (int m = 0; m < n; ++m) {
      const ExponentChoice choice = exponent_choice(n, m);
      for (int c = 0; c < 1000; ++c) {
        const std::size_t k = rng.integer(0, n - 1);
        std::vector<int> pool;
        for (int q = 0; q < n; ++q) {
          if (static_cast<std::size_t>(q) != k) pool.push_back(q + 1);
        }
        for (int q = static_cast<int>(pool.size()) - 1; q > 0; --q) std::swap(pool[q], pool[rng.integer(0, q)]);
        std::vector<int> J(pool.begin(), pool.begin() + m);
        std::sort(J.begin(), J.end());
        std::vector<cplx> zeta(n), z(n);
        for (int q = 0; q < n; ++q) {
          z[q] = rng.polar(0.01, 1.0);
          zeta[q] = z[q] + rng.polar(1e-3, 10.0);
        }
        const double lhs = std::abs(kernel_g_derivative(zeta, z, k, I, J));
        worst = std::max(worst, lhs / hm_bound(zeta, z, k, I, J, choice));
        ++configs;
      }
    }
  }
  // both sides are rounded, so the ratio is compared with one plus a few ulps
  return {worst <= 1.0 + 1e-12, std::to_string(configs) + " configs, max |d^m g|/(m! H_m) " + fmt("%.6f", worst)};
}

Outcome cauchy_oracles() {
  const StarDomain disk = make_disk(0.0, 1.0);
  const SamplePlan plan = sample_plan(ProductDomain({disk}), 100, 0.1, 505);
  double worst = 0.0;
  for (const EvalPoint& p : plan.points) {
    const cplx z = p[0];
    const CauchyRule rule = cauchy_rule(disk, z, PolarSize{128, 128});
    cplx t1(0.0), tc(0.0), tz(0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      t1 += rule.weights[q];
      tc += rule.weights[q] * std::conj(rule.nodes[q]);
      tz += rule.weights[q] * rule.nodes[q];
    }
    worst = std::max({worst, std::abs(t1 - std::conj(z)), std::abs(tc - std::conj(z) * std::conj(z) / 2.0),
                      std::abs(tz - (std::norm(z) - 1.0))});
    worst = std::max(worst, std::abs(cauchy_transform(disk, [](cplx w) { return std::conj(w); }, z,
                                                      PolarSize{128, 128}) -
                                     std::conj(z) * std::conj(z) / 2.0));
  }
  return {worst <= 1e-6, "max abs error " + fmt("%.3g", worst)};
}

struct Dim2Setup {
  ProductDomain domain = polydisk(2);
  OneForm f = manufacture_form(parse("conj(z1)*conj(z2)", 2), 2);
  QuadratureSuite suite = QuadratureSuite::uniform(2, 64, 64);
  SamplePlan plan = sample_plan(domain, 25, 0.05, 606);
};

Outcome solve_dim2() {
  const Dim2Setup s;
  const SolveReport r = solve_t(s.domain, s.f, s.plan, s.suite);
  double err = 0.0;
  for (const SolveEntry& e : r.entries) err = std::max(err, std::abs(e.value - std::conj(e.point[0]) * std::conj(e.point[1])));
  const TSolver solver(s.domain, s.f, s.suite);
  std::vector<double> res(s.plan.points.size());
  parallel_for(s.plan.points.size(), default_threads(),
               [&](std::size_t i) { res[i] = residual_dbar(s.f, solver, SamplePlan{{s.plan.points[i]}}, 1e-4); });
  const double residual = *std::max_element(res.begin(), res.end());
  return {err <= 1e-4 && residual <= 1e-3,
          "max |Tf-u| " + fmt("%.3g", err) + ", FD residual " + fmt("%.3g", residual)};
}

Outcome ttilde_agreement() {
  const Dim2Setup s;
  const SolveReport t = solve_t(s.domain, s.f, s.plan, s.suite);
  const SolveReport tt = solve_ttilde(s.domain, s.f, s.plan, s.suite);
  double gap = 0.0;
  for (std::size_t i = 0; i < s.plan.points.size(); ++i) {
    gap = std::max(gap, std::abs(tt.entries[i].value - t.entries[i].value));
  }
  std::vector<double> rel(s.plan.points.size());
  parallel_for(s.plan.points.size(), default_threads(), [&](std::size_t i) {
    const cplx e = ttilde_dim2_explicit(s.domain, s.f, s.plan.points[i], s.suite);
    rel[i] = std::abs(tt.entries[i].value - e) / std::abs(e);
  });
  const double worst = *std::max_element(rel.begin(), rel.end());
  return {gap <= 1e-3 && worst <= 1e-9,
          "max |T~f-Tf| " + fmt("%.3g", gap) + ", explicit formula rel " + fmt("%.3g", worst)};
}

Outcome solve_dim3() {
  const ProductDomain d = polydisk(3);
  const Expr u = parse("conj(z1)*conj(z2)*conj(z3)", 3);
  const OneForm f = manufacture_form(u, 3);
  const QuadratureSuite suite = QuadratureSuite::uniform(3, 16, 24);
  const SamplePlan plan = sample_plan(d, 3, 0.05, 808);
  const TSolver solver(d, f, suite);
  const CompiledExpr exact(u);
  std::vector<double> err(plan.points.size()), res(plan.points.size());
  parallel_for(plan.points.size(), default_threads(), [&](std::size_t i) {
    err[i] = std::abs(solver(plan.points[i]) - exact(plan.points[i]));
    res[i] = residual_dbar(f, solver, SamplePlan{{plan.points[i]}}, 1e-4);
  });
  const double e = *std::max_element(err.begin(), err.end());
  const double r = *std::max_element(res.begin(), res.end());
  return {e <= 5e-2 && r <= 5e-2, "max |Tf-u| " + fmt("%.3g", e) + ", FD residual " + fmt("%.3g", r)};
}

Outcome stokes() {
  struct Case {
    std::vector<StarDomain> domains;
    const char* f;
    const char* g;
  };
  const StarDomain unit = make_disk(0.0, 1.0);
  const StarDomain shifted = make_disk({0.3, -0.2}, 0.7);
  const StarDomain big = make_disk({-1.0, 0.5}, 1.5);
  const Case cases[] = {
      {{unit}, "conj(z1)", "1"},
      {{shifted}, "conj(z1)^2*z1", "z1 + conj(z1)"},
      {{big}, "1 + z1^2", "z1*conj(z1)^2"},
      {{unit, unit}, "conj(z1)*conj(z2)", "z1*z2"},
      {{shifted, big}, "conj(z1)^2*conj(z2)*z2", "1 + conj(z1)*z2"},
      {{unit, shifted}, "z1*conj(z2)^2 + conj(z1)", "conj(z1)*conj(z2) + z2^2"},
      {{unit, unit, unit}, "conj(z1)*conj(z2)*conj(z3)", "z1*z2*z3 + 1"},
      {{shifted, unit, big}, "conj(z1)^2*conj(z2)*conj(z3)*z3", "conj(z2) + z1*conj(z3)"},
      {{big, shifted, unit}, "z1*z2*conj(z3)^2 + conj(z1)*conj(z2)*conj(z3)", "conj(z1)*z2 + conj(z3)^2"},
  };
  double worst = 0.0;
  for (const Case& c : cases) {
    const int n = static_cast<int>(c.domains.size());
    const StokesResult r = stokes_check(parse(c.f, n), parse(c.g, n), ProductDomain(c.domains),
                                        QuadratureSuite::uniform(n, 12, 24, 64));
    worst = std::max(worst, r.difference / (1.0 + std::abs(r.lhs)));
  }
  return {worst <= 1e-6, std::to_string(std::size(cases)) + " pairs, max |lhs-rhs|/(1+|lhs|) " + fmt("%.3g", worst)};
}

Outcome bound_probes() {
  const StarDomain disk = make_disk(0.0, 1.0);
  std::vector<double> gaps;
  for (double g = 0.1; g >= 1e-3 * (1.0 - 1e-12); g *= 0.5) gaps.push_back(g);
  if (gaps.back() > 1e-3) gaps.push_back(1e-3);
  bool ok = true;
  double growth = 0.0;
  for (double a : {1.0 / 3.0, 5.0 / 3.0}) {
    const BoundProbe p = probe_bound(disk, BoundKind::kArea, a, gaps);
    ok = ok && p.bounded;
    growth = std::max(growth, p.worst_growth);
  }
  for (double a : {0.5, 0.75}) {
    const BoundProbe p = probe_bound(disk, BoundKind::kBoundary, a, gaps);
    ok = ok && p.bounded;
    growth = std::max(growth, p.worst_growth);
  }
  return {ok, std::to_string(gaps.size()) + " distances, worst growth " + fmt("%.4f", growth)};
}

Outcome supnorm() {
  const ProductDomain d = polydisk(2);
  const auto catalog = default_catalog();
  const SamplePlan plan = sample_plan(d, 10, 0.05, 1111);
  double lo = 1e300, hi = 0.0;
  for (const CatalogEntry& e : catalog) {
    lo = std::min(lo, sup_norm(e.form, plan));
    hi = std::max(hi, sup_norm(e.form, plan));
  }
  QuadratureSuite coarse = QuadratureSuite::uniform(2, 16, 24), fine = QuadratureSuite::uniform(2, 32, 48);
  const SupnormTable a = supnorm_study(catalog, d, coarse, plan);
  const SupnormTable b = supnorm_study(catalog, d, fine, plan);
  const bool finite = a.max_ratio && b.max_ratio && std::isfinite(*a.max_ratio) && std::isfinite(*b.max_ratio);
  const double change = finite ? std::abs(*b.max_ratio - *a.max_ratio) / *a.max_ratio : INFINITY;
  // a power-of-two scale is exact in floating point, so the ratio must not move at all
  const OneForm& f = catalog.front().form;
  const SupnormTable s = supnorm_study({{"f", f}, {"1024 f", f.scaled(1024.0)}, {"f/2^20", f.scaled(0x1p-20)}},
                                       d, coarse, plan);
  const bool exact = s.rows[0].ratio == s.rows[1].ratio && s.rows[0].ratio == s.rows[2].ratio;
  const SupnormTable t = supnorm_study({{"f", f}, {"1000 f", f.scaled(1000.0)}}, d, coarse, plan);
  const double drift = std::abs(*t.rows[1].ratio - *t.rows[0].ratio) / *t.rows[0].ratio;
  const bool pass = hi / lo >= 1e4 && finite && change <= 0.2 && exact && drift <= 1e-12;
  return {pass, "norm span " + fmt("%.3g", hi / lo) + ", max ratio " + fmt("%.6g", a.max_ratio.value_or(NAN)) +
                    " -> " + fmt("%.6g", b.max_ratio.value_or(NAN)) + " (change " + fmt("%.3g", change) +
                    "), scale drift " + fmt("%.3g", drift) + (exact ? ", 2^k exact" : ", 2^k NOT exact")};
}

Expr random_expr(Rng& rng, int depth) {
  if (depth == 0 || rng.uniform() < 0.25) {
    const int pick = rng.integer(0, 2);
    const Expr v = Expr::variable(rng.integer(1, 3));
    if (pick == 0) return v;
    if (pick == 1) return conj(v);
    return Expr(rng.polar(0.5, 2.0));
  }
  switch (rng.integer(0, 8)) {
    case 0: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 1: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 2:
    case 3: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 4: return random_expr(rng, depth - 1) / (Expr(3.0) + random_expr(rng, 0));
    case 5: return conj(random_expr(rng, depth - 1));
    case 6: return exp(random_expr(rng, depth - 1) * Expr(0.5));
    case 7: return rng.uniform() < 0.5 ? sin(random_expr(rng, depth - 1)) : cos(random_expr(rng, depth - 1));
    default: return pow(random_expr(rng, depth - 1), rng.integer(2, 3));
  }
}

Outcome wirtinger() {
  Rng rng(1212);
  double worst = 0.0;
  int made = 0;
  while (made < 100) {
    const Expr e = random_expr(rng, 5);
    if (e.max_variable() == 0) continue;
    ++made;
    std::vector<cplx> z(3);
    for (cplx& c : z) c = rng.polar(0.05, 0.8);
    const CompiledExpr compiled(e);
    const auto u = [&](const std::vector<cplx>& p) { return compiled(p); };
    // derivatives are compared relative to the size of the full gradient at z
    std::vector<cplx> sym, fd;
    for (int j = 1; j <= 3; ++j) {
      sym.push_back(eval(d_bar(e, j), z));
      fd.push_back(fd_dbar(u, z, j - 1, 1e-5));
      sym.push_back(eval(d_z(e, j), z));
      fd.push_back(fd_dz(u, z, j - 1, 1e-5));
    }
    double scale = 0.0, diff = 0.0;
    for (std::size_t q = 0; q < sym.size(); ++q) {
      scale = std::max(scale, std::abs(sym[q]));
      diff = std::max(diff, std::abs(sym[q] - fd[q]));
    }
    if (scale == 0.0) continue;  // locally constant; nothing to compare
    worst = std::max(worst, diff / scale);
  }
  return {worst <= 1e-6, "100 expressions, max rel error " + fmt("%.3g", worst)};
}

struct Criterion {
  const char* name;
  double budget_seconds;
  Outcome (*check)();
};

const Criterion kCriteria[] = {
    {"decomposition identity", 1.0, decomposition},
    {"exponent systems", 1.0, exponent_systems},
    {"kernel derivative closed form", 10.0, kernel_derivatives},
    {"derivative bound", 10.0, derivative_bound},
    {"1-D Cauchy transform oracles", 10.0, cauchy_oracles},
    {"n=2 solve", 300.0, solve_dim2},
    {"T~ = T agreement", 600.0, ttilde_agreement},
    {"n=3 smoke", 1800.0, solve_dim3},
    {"Stokes identity", 300.0, stokes},
    {"uniform-bound probes", 60.0, bound_probes},
    {"supnorm surrogate", 600.0, supnorm},
    {"Wirtinger differentiation", 5.0, wirtinger},
};

bool run_one(int index) {
  const Criterion& c = kCriteria[index - 1];
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= c.budget_seconds;
  const bool pass = o.pass && in_time;
  std::printf("criterion %2d %-30s %s  %s; %.2f s (budget %.0f s%s)\n", index, c.name, pass ? "PASS" : "FAIL",
              o.detail.c_str(), secs, c.budget_seconds, in_time ? "" : ", exceeded");
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  constexpr int count = static_cast<int>(std::size(kCriteria));
  if (argc > 2) {
    std::fprintf(stderr, "usage: acceptance [criterion 1..%d]\n", count);
    return 2;
  }
  bool all = true;
  if (argc == 2) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > count) {
      std::fprintf(stderr, "criterion must be in 1..%d\n", count);
      return 2;
    }
    all = run_one(n);
  } else {
    for (int n = 1; n <= count; ++n) all = run_one(n) && all;
  }
  return all ? 0 : 1;
}
