#include "dbar/operator_t.hpp"

#include <chrono>
#include <cmath>

#include "dbar/error.hpp"
#include "dbar/finite_difference.hpp"

namespace dbar {

namespace {

void check_point(const ProductDomain& domain, const EvalPoint& z) {
  if (static_cast<int>(z.size()) != domain.arity()) {
    throw ValidationError("evaluation point arity does not match the domain");
  }
}

cplx finite_or_throw(cplx v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NumericalError(std::string("non-finite value in ") + what);
  }
  return v;
}

cplx nested(const CompiledExpr& g, EvalPoint& point, std::span<const int> factors,
            std::span<const CauchyRule> rules, std::size_t level) {
  const CauchyRule& rule = rules[level];
  const int coord = factors[level];
  cplx sum(0.0);
  if (level + 1 == rules.size()) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      point[coord] = rule.nodes[q];
      sum += rule.weights[q] * g(point);
    }
  } else {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      point[coord] = rule.nodes[q];
      sum += rule.weights[q] * nested(g, point, factors, rules, level + 1);
    }
  }
  return sum;
}

}  // namespace

namespace detail {

cplx tensor_sum(const CompiledExpr& g, EvalPoint point, std::span<const int> factors,
                std::span<const CauchyRule> rules) {
  if (g.is_constant()) {
    // the tensor sum of a constant factorises exactly
    cplx prod = g(point);
    for (const CauchyRule& r : rules) {
      cplx s(0.0);
      for (const cplx& w : r.weights) s += w;
      prod *= s;
    }
    return prod;
  }
  return nested(g, point, factors, rules, 0);
}

}  // namespace detail

cplx slice_transform(const ProductDomain& domain, int k, const Expr& g, const EvalPoint& z,
                     const QuadratureSuite& suite) {
  return iterated_slice(domain, IndexSet({k}), g, z, suite);
}

cplx iterated_slice(const ProductDomain& domain, const IndexSet& I, const Expr& g, const EvalPoint& z,
                    const QuadratureSuite& suite, std::span<const int> nesting) {
  check_point(domain, z);
  suite.validate(domain.arity());
  if (I.max() > domain.arity()) throw ValidationError("index set exceeds the domain arity");
  if (static_cast<int>(I.size()) > kMaxIteratedOrder && !suite.allow_large) {
    throw ValidationError("iterated slice of order " + std::to_string(I.size()) +
                          " exceeds the cost guard; set allow_large to proceed");
  }
  if (g.max_variable() > domain.arity()) throw ValidationError("integrand exceeds the domain arity");
  std::vector<int> order;
  if (nesting.empty()) {
    for (std::size_t p = 0; p < I.size(); ++p) order.push_back(static_cast<int>(p));
  } else {
    if (nesting.size() != I.size()) throw ValidationError("nesting must list every position of I");
    std::vector<bool> seen(I.size(), false);
    for (int p : nesting) {
      if (p < 0 || p >= static_cast<int>(I.size()) || seen[p]) {
        throw ValidationError("nesting must be a permutation of the positions of I");
      }
      seen[p] = true;
    }
    order.assign(nesting.begin(), nesting.end());
  }
  std::vector<int> coords;
  std::vector<CauchyRule> rules;
  for (int p : order) {
    const int c = I[p] - 1;
    coords.push_back(c);
    rules.push_back(cauchy_rule(domain[c], z[c], suite.polar(c), suite.margin));
  }
  return finite_or_throw(detail::tensor_sum(CompiledExpr(g), z, coords, rules), "iterated slice");
}

TSolver::TSolver(ProductDomain domain, OneForm f, QuadratureSuite suite)
    : domain_(std::move(domain)), f_(std::move(f)), suite_(std::move(suite)) {
  const int n = domain_.arity();
  if (f_.arity() != n) throw ValidationError("form arity does not match the domain");
  suite_.validate(n);
  if (n > kMaxIteratedOrder && !suite_.allow_large) {
    throw ValidationError("T for n = " + std::to_string(n) +
                          " exceeds the cost guard; set allow_large to proceed");
  }
  for (int s = 1; s <= n; ++s) {
    for (const IndexSet& I : index_sets(n, s)) {
      const std::vector<int> lower(I.begin(), I.end() - 1);
      Expr g = d_bar(f_[I.max() - 1], std::span<const int>(lower));
      CompiledExpr code(g);
      terms_.push_back(Term{I, std::move(g), std::move(code)});
    }
  }
}

SolveEntry TSolver::evaluate(const EvalPoint& z) const {
  check_point(domain_, z);
  SolveEntry entry;
  entry.point = z;
  cplx total(0.0);
  for (const Term& t : terms_) {
    cplx v(0.0);
    if (!t.compiled.is_zero()) {
      std::vector<int> coords;
      std::vector<CauchyRule> rules;
      for (int i : t.indices) {
        coords.push_back(i - 1);
        rules.push_back(cauchy_rule(domain_[i - 1], z[i - 1], suite_.polar(i - 1), suite_.margin));
      }
      v = finite_or_throw(detail::tensor_sum(t.compiled, z, coords, rules), "T");
    }
    entry.terms.push_back(TermValue{t.indices.indices(), v});
    total += (t.indices.size() % 2 == 1) ? v : -v;
  }
  entry.value = total;
  return entry;
}

SolveEntry solve_t(const ProductDomain& domain, const OneForm& f, const EvalPoint& z,
                   const QuadratureSuite& suite) {
  return TSolver(domain, f, suite).evaluate(z);
}

SolveReport solve_t(const ProductDomain& domain, const OneForm& f, const SamplePlan& plan,
                    const QuadratureSuite& suite, int threads, bool timings) {
  const TSolver solver(domain, f, suite);
  SolveReport report;
  report.op = "t";
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

double residual_dbar(const OneForm& f, const PointSolver& solver, const SamplePlan& plan, double h) {
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
  std::vector<CompiledExpr> comps;
  for (const Expr& c : f.components()) comps.emplace_back(c);
  const auto u = [&solver](const std::vector<cplx>& z) { return solver(z); };
  double worst = 0.0;
  for (const EvalPoint& z : plan.points) {
    if (static_cast<int>(z.size()) != f.arity()) throw ValidationError("sample arity mismatch");
    for (std::size_t k = 0; k < comps.size(); ++k) {
      worst = std::max(worst, std::abs(fd_dbar(u, z, k, h) - comps[k](z)));
    }
  }
  return worst;
}

}  // namespace dbar
