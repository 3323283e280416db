#include "dbar/forms.hpp"

#include <algorithm>
#include <cmath>

#include "dbar/error.hpp"
#include "dbar/random.hpp"

namespace dbar {

ProductDomain::ProductDomain(std::vector<StarDomain> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ValidationError("product domain needs at least one factor");
  if (factors_.size() > 9) throw ValidationError("product domain supports at most 9 factors");
}

bool ProductDomain::contains(const EvalPoint& z, double margin) const {
  if (z.size() != factors_.size()) return false;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (!dbar::contains(factors_[j], z[j], margin)) return false;
  }
  return true;
}

OneForm::OneForm(int arity, std::vector<Expr> components)
    : arity_(arity), components_(std::move(components)) {
  if (arity_ < 1) throw ValidationError("form arity must be positive");
  if (static_cast<int>(components_.size()) != arity_) {
    throw ValidationError("form needs exactly one component per variable");
  }
  for (const Expr& c : components_) {
    if (c.max_variable() > arity_) throw ValidationError("form component exceeds the arity");
  }
}

OneForm OneForm::scaled(cplx alpha) const {
  std::vector<Expr> out;
  out.reserve(components_.size());
  for (const Expr& c : components_) out.push_back(Expr(alpha) * c);
  return OneForm(arity_, std::move(out));
}

OneForm OneForm::combined(cplx alpha, const OneForm& other, cplx beta) const {
  if (other.arity_ != arity_) throw ValidationError("arity mismatch");
  std::vector<Expr> out;
  for (std::size_t j = 0; j < components_.size(); ++j) {
    out.push_back(Expr(alpha) * components_[j] + Expr(beta) * other.components_[j]);
  }
  return OneForm(arity_, std::move(out));
}

SamplePlan sample_plan(const ProductDomain& domain, int count, double margin, std::uint64_t seed) {
  if (count < 0) throw ValidationError("sample count must be non-negative");
  if (margin < 0.0) throw ValidationError("margin must be non-negative");
  Rng rng(seed);
  SamplePlan plan;
  plan.points.reserve(count);
  for (int p = 0; p < count; ++p) {
    EvalPoint z(domain.arity());
    for (int j = 0; j < domain.arity(); ++j) {
      const StarDomain& d = domain[j];
      const double r = d.max_radius();
      int attempts = 0;
      for (;;) {
        const double x = rng.uniform(-r, r);
        const double y = rng.uniform(-r, r);
        const cplx w = d.center() + cplx(x, y);
        if (contains(d, w, margin)) {
          z[j] = w;
          break;
        }
        if (++attempts > 100000) throw ValidationError("margin leaves no interior to sample");
      }
    }
    plan.points.push_back(std::move(z));
  }
  return plan;
}

SamplePlan explicit_plan(const ProductDomain& domain, std::vector<EvalPoint> points, double margin) {
  for (const EvalPoint& z : points) {
    if (static_cast<int>(z.size()) != domain.arity()) {
      throw ValidationError("evaluation point arity does not match the domain");
    }
    if (!domain.contains(z, margin)) {
      throw ValidationError("evaluation point is not inside the domain with the required margin");
    }
  }
  return SamplePlan{std::move(points)};
}

OneForm manufacture_form(const Expr& u, int arity) {
  if (u.max_variable() > arity) throw ValidationError("potential exceeds the arity");
  std::vector<Expr> comps;
  for (int j = 1; j <= arity; ++j) comps.push_back(d_bar(u, j));
  return OneForm(arity, std::move(comps));
}

double closedness_residual(const OneForm& f, const SamplePlan& plan) {
  const int n = f.arity();
  std::vector<CompiledExpr> lhs, rhs;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      lhs.emplace_back(d_bar(f[j - 1], i));
      rhs.emplace_back(d_bar(f[i - 1], j));
    }
  }
  double worst = 0.0;
  for (const EvalPoint& z : plan.points) {
    if (static_cast<int>(z.size()) != n) throw ValidationError("sample arity mismatch");
    for (std::size_t q = 0; q < lhs.size(); ++q) {
      worst = std::max(worst, std::abs(lhs[q](z) - rhs[q](z)));
    }
  }
  return worst;
}

double sup_norm(const OneForm& f, const SamplePlan& plan) {
  double worst = 0.0;
  for (const Expr& c : f.components()) worst = std::max(worst, sup_norm(c, plan));
  return worst;
}

double sup_norm(const Expr& e, const SamplePlan& plan) {
  const CompiledExpr code(e);
  double worst = 0.0;
  for (const EvalPoint& z : plan.points) worst = std::max(worst, std::abs(code(z)));
  return worst;
}

}  // namespace dbar
