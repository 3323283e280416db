#include "dbar/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "dbar/error.hpp"
#include "dbar/kernel_algebra.hpp"
#include "dbar/operator_ttilde.hpp"
#include "dbar/random.hpp"
#include "dbar/verification.hpp"

namespace dbar {

namespace {

json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

json point_json(const EvalPoint& z) {
  json out = json::array();
  for (const cplx& c : z) out.push_back(complex_json(c));
  return out;
}

std::string join_indices(const std::vector<int>& I) {
  std::string s;
  for (std::size_t p = 0; p < I.size(); ++p) s += (p ? "-" : "") + std::to_string(I[p]);
  return s;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Non-finite numbers have no JSON spelling; they are written as strings.
json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

class Checks {
 public:
  void add(const std::string& name, double value, double tolerance, bool pass) {
    items_.push_back({{"name", name}, {"value", number_json(value)}, {"tolerance", tolerance}, {"pass", pass}});
    all_pass_ = all_pass_ && pass;
  }
  void at_most(const std::string& name, double value, double tolerance) {
    add(name, value, tolerance, value <= tolerance);
  }
  bool empty() const { return items_.empty(); }
  bool all_pass() const { return all_pass_; }
  json to_json() const { return items_; }

 private:
  json items_ = json::array();
  bool all_pass_ = true;
};

json params(const RunConfig& cfg, const char* key) {
  if (!cfg.echo.contains(key)) return json::object();
  const json& p = cfg.echo[key];
  if (!p.is_object()) throw ValidationError(std::string("config: ") + key + ": expected an object");
  return p;
}

template <class T>
T param(const json& p, const char* key, T fallback) {
  if (!p.contains(key)) return fallback;
  try {
    return p[key].get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config: parameter '") + key + "' has the wrong type");
  }
}

std::vector<QuadratureSuite> suite_list(const json& p, int arity, const std::vector<std::pair<int, int>>& fallback,
                                        double margin) {
  std::vector<QuadratureSuite> out;
  if (p.contains("suites")) {
    if (!p["suites"].is_array() || p["suites"].empty()) throw ValidationError("config: suites: expected a list");
    for (const json& s : p["suites"]) out.push_back(parse_suite(s, arity));
  } else {
    for (const auto& [nr, nt] : fallback) out.push_back(QuadratureSuite::uniform(arity, nr, nt));
  }
  for (QuadratureSuite& s : out) s.margin = margin;
  return out;
}

int threads_of(const RunConfig& cfg) { return cfg.threads > 0 ? cfg.threads : default_threads(); }

// ---------------------------------------------------------------- identities

RunResult run_identities(const RunConfig& cfg) {
  const json p = params(cfg, "identities");
  const int count = param(p, "count", 10000);
  const int max_factors = param(p, "max_factors", 8);
  const std::uint64_t seed = param<std::uint64_t>(p, "seed", 1);
  const double r_lo = param(p, "r_min", 0.1), r_hi = param(p, "r_max", 10.0);
  const int kernel_n = param(p, "kernel_max_n", 4);
  const int kernel_configs = param(p, "kernel_configs", 100);
  if (count < 1 || max_factors < 1 || max_factors > 32 || !(r_lo > 0.0 && r_hi >= r_lo)) {
    throw ValidationError("config: identities: bad count, max_factors or modulus range");
  }
  if (kernel_n < 2 || kernel_n > 6 || kernel_configs < 1) {
    throw ValidationError("config: identities: kernel_max_n must be in [2, 6]");
  }
  RunResult result;
  Checks checks;
  Rng rng(seed);

  double decomposition = 0.0;
  for (int i = 0; i < count; ++i) {
    const int m = rng.integer(1, max_factors);
    std::vector<cplx> a(m);
    for (cplx& x : a) x = rng.polar(r_lo, r_hi);
    cplx product(1.0);
    for (const cplx& x : a) product *= x;
    cplx sum(0.0);
    for (const cplx& t : decompose_inverse_product(a)) sum += t;
    const cplx target = 1.0 / product;
    decomposition = std::max(decomposition, std::abs(sum - target) / std::abs(target));
  }
  checks.at_most("decomposition_rel_error", decomposition, cfg.tolerance("decomposition", 1e-12));

  result.table.header = {"n", "k", "J", "configs", "max_rel_error", "max_bound_ratio"};
  json kernels = json::array();
  double kernel_worst = 0.0, bound_worst = 0.0;
  for (int s = 2; s <= kernel_n; ++s) {
    for (int k = 0; k < s; ++k) {
      const std::uint32_t others = ((1u << s) - 1) & ~(1u << k);
      for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
        if (mask & ~others) continue;
        std::vector<int> J;
        for (int q = 0; q < s; ++q) {
          if (mask & (1u << q)) J.push_back(q + 1);
        }
        // long double keeps the cancellation inside the symbolic derivative out of the comparison
        const Expr symbolic = d_bar(kernel_expression(std::vector<cplx>(s, cplx(0.0)), k), J);
        const ExponentChoice choice = exponent_choice(s, static_cast<int>(J.size()));
        std::vector<int> all(s);
        for (int q = 0; q < s; ++q) all[q] = q + 1;
        const IndexSet I(all);
        double worst = 0.0, ratio = 0.0;
        for (int c = 0; c < kernel_configs; ++c) {
          std::vector<cplx> a(s);
          for (cplx& x : a) x = rng.polar(r_lo, r_hi);
          const cplx closed = kernel_derivative_from_differences(a, k, mask);
          const std::complex<long double> w = eval_extended(symbolic, a);
          const cplx oracle(static_cast<double>(w.real()), static_cast<double>(w.imag()));
          worst = std::max(worst, std::abs(closed - oracle) / std::abs(oracle));
          const std::vector<cplx> origin(s, cplx(0.0));
          ratio = std::max(ratio, std::abs(closed) / hm_bound(a, origin, k, I, J, choice));
        }
        kernel_worst = std::max(kernel_worst, worst);
        bound_worst = std::max(bound_worst, ratio);
        kernels.push_back({{"n", s}, {"k", k + 1}, {"J", J}, {"max_rel_error", worst}, {"max_bound_ratio", ratio}});
        result.table.rows.push_back({static_cast<long long>(s), static_cast<long long>(k + 1), join_indices(J),
                                     static_cast<long long>(kernel_configs), worst, ratio});
      }
    }
  }
  checks.at_most("kernel_derivative_rel_error", kernel_worst, cfg.tolerance("kernel", 1e-9));
  // |∂^m g| ≤ m!·H_m, allowing for rounding in both sides
  checks.at_most("kernel_bound_ratio", bound_worst, 1.0 + 1e-12);
  result.report["results"] = {{"decomposition", {{"count", count}, {"max_factors", max_factors},
                                                 {"max_rel_error", decomposition}}},
                              {"kernels", kernels}};
  result.report["checks"] = checks.to_json();
  if (!checks.all_pass()) result.exit_code = kExitTolerance;
  return result;
}

// ---------------------------------------------------------------- exponents

std::string rational_text(const Rational& r) {
  return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
}

RunResult run_exponents(const RunConfig& cfg) {
  if (!cfg.echo.contains("n") || !cfg.echo["n"].is_number_integer()) {
    throw ValidationError("config: exponents mode needs an integer 'n'");
  }
  const int n = cfg.echo["n"].get<int>();
  if (n < 2 || n > 64) throw ValidationError("config: n must be in [2, 64]");
  RunResult result;
  Checks checks;
  result.table.header = {"m", "k", "parts", "satisfied", "exponents", "integrable"};
  json rows = json::array();
  bool all_ok = true;
  for (int m = 0; m < n; ++m) {
    const ExponentChoice c = exponent_choice(n, m);
    const bool ok = satisfies_bound_system(c);
    const auto exps = hm_singular_exponents(c);
    bool integrable = true;
    json exp_text = json::array();
    std::string joined_parts, joined_exps;
    for (int p = 0; p < n; ++p) {
      const bool solid = p < m || p == n - 1;
      const Rational limit{solid ? 2 : 1, 1};
      integrable = integrable && exps[p] < limit;
      exp_text.push_back(rational_text(exps[p]));
      joined_parts += (p ? " " : "") + std::to_string(c.parts[p]);
      joined_exps += (p ? " " : "") + rational_text(exps[p]);
    }
    all_ok = all_ok && ok && integrable;
    rows.push_back({{"m", m}, {"k", c.k}, {"parts", c.parts}, {"satisfied", ok}, {"exponents", exp_text},
                    {"integrable", integrable}});
    result.table.rows.push_back({static_cast<long long>(m), static_cast<long long>(c.k), joined_parts,
                                 std::string(ok ? "true" : "false"), joined_exps,
                                 std::string(integrable ? "true" : "false")});
  }
  checks.add("bound_system_and_integrability", all_ok ? 1.0 : 0.0, 1.0, all_ok);
  result.report["results"] = {{"n", n}, {"choices", rows}};
  result.report["checks"] = checks.to_json();
  if (!checks.all_pass()) result.exit_code = kExitTolerance;
  return result;
}

// ---------------------------------------------------------------- solve / verify

json entry_json(const SolveEntry& e, bool timings) {
  json terms = json::array();
  for (const TermValue& t : e.terms) {
    terms.push_back({{"indices", t.indices}, {"sign", t.indices.size() % 2 == 1 ? 1 : -1},
                     {"value", complex_json(t.value)}});
  }
  json out = {{"point", point_json(e.point)}, {"value", complex_json(e.value)}, {"terms", terms}};
  if (timings) out["seconds"] = e.seconds;
  return out;
}

RunResult run_solve(const RunConfig& cfg, bool verify) {
  const ProductDomain domain = cfg.product();
  const OneForm f = cfg.form();
  const SamplePlan plan = cfg.plan(domain);
  const QuadratureSuite& suite = *cfg.suite;
  const int threads = threads_of(cfg);
  RunResult result;
  Checks checks;
  std::vector<SolveReport> reports;
  if (cfg.op == "t" || cfg.op == "both") reports.push_back(solve_t(domain, f, plan, suite, threads, cfg.timings));
  if (cfg.op == "ttilde" || cfg.op == "both") {
    reports.push_back(solve_ttilde(domain, f, plan, suite, threads, cfg.timings));
  }
  result.table.header = {"operator", "point", "term", "sign", "value_re", "value_im"};
  json ops = json::object();
  for (const SolveReport& r : reports) {
    json entries = json::array();
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      const SolveEntry& e = r.entries[i];
      entries.push_back(entry_json(e, cfg.timings));
      result.table.rows.push_back({r.op, static_cast<long long>(i), std::string("total"), 1LL, e.value.real(),
                                   e.value.imag()});
      for (const TermValue& t : e.terms) {
        result.table.rows.push_back({r.op, static_cast<long long>(i), join_indices(t.indices),
                                     t.indices.size() % 2 == 1 ? 1LL : -1LL, t.value.real(), t.value.imag()});
      }
    }
    ops[r.op] = entries;
  }
  const bool closed = reports.front().closed;
  json results = {{"operators", ops}, {"closed", closed}, {"closedness", reports.front().closedness}};
  if (!closed) results["warning"] = "form is not dbar-closed";

  const bool check_solution = cfg.potential && (verify || cfg.tolerances.contains("solution"));
  if (check_solution && cfg.tolerances.contains("solution")) {
    const CompiledExpr u(parse(*cfg.potential, cfg.arity()));
    for (const SolveReport& r : reports) {
      double err = 0.0;
      for (const SolveEntry& e : r.entries) err = std::max(err, std::abs(e.value - u(e.point)));
      checks.at_most(r.op + "_solution_error", err, cfg.tolerance("solution", 0.0));
    }
  }
  if (reports.size() == 2 && (verify || cfg.tolerances.contains("agreement"))) {
    double gap = 0.0;
    for (std::size_t i = 0; i < plan.points.size(); ++i) {
      gap = std::max(gap, std::abs(reports[0].entries[i].value - reports[1].entries[i].value));
    }
    results["max_t_ttilde_gap"] = gap;
    checks.at_most("t_ttilde_agreement", gap, cfg.tolerance("agreement", 1e-3));
  }
  if (verify) {
    json residuals = json::object();
    for (const SolveReport& r : reports) {
      double res = 0.0;
      if (r.op == "t") {
        const TSolver solver(domain, f, suite);
        std::vector<double> per(plan.points.size());
        parallel_for(plan.points.size(), threads, [&](std::size_t i) {
          per[i] = residual_dbar(f, solver, SamplePlan{{plan.points[i]}}, cfg.fd_step);
        });
        for (double v : per) res = std::max(res, v);
      } else {
        const TTildeSolver solver(domain, f, suite);
        std::vector<double> per(plan.points.size());
        parallel_for(plan.points.size(), threads, [&](std::size_t i) {
          per[i] = residual_dbar(f, solver, SamplePlan{{plan.points[i]}}, cfg.fd_step);
        });
        for (double v : per) res = std::max(res, v);
      }
      residuals[r.op] = res;
      checks.at_most(r.op + "_dbar_residual", res, cfg.tolerance("residual", 1e-3));
    }
    results["residual_dbar"] = residuals;
  }
  result.report["results"] = results;
  result.report["checks"] = checks.to_json();
  if (!checks.all_pass()) result.exit_code = kExitTolerance;
  return result;
}

// ---------------------------------------------------------------- bounds

RunResult run_bounds(const RunConfig& cfg) {
  const json p = params(cfg, "bounds");
  const StarDomain d = cfg.domains.empty() ? make_disk(0.0, 1.0) : cfg.domains.front();
  const auto area_alphas = param(p, "area_alphas", std::vector<double>{1.0 / 3.0, 5.0 / 3.0});
  const auto boundary_alphas = param(p, "boundary_alphas", std::vector<double>{0.5, 0.75});
  std::vector<double> gaps;
  for (double g = 0.1; g >= 1e-3 * (1.0 - 1e-12); g *= 0.5) gaps.push_back(g);
  gaps = param(p, "gaps", gaps);
  const double theta0 = param(p, "theta0", 0.0);
  const double factor = cfg.tolerance("growth", 1.1);
  RunResult result;
  Checks checks;
  result.table.header = {"kind", "alpha", "gap", "distance", "value"};
  json probes = json::array();
  const auto probe = [&](BoundKind kind, double alpha) {
    const BoundProbe b = probe_bound(d, kind, alpha, gaps, theta0, factor);
    const std::string name = kind == BoundKind::kArea ? "area" : "boundary";
    probes.push_back({{"kind", name}, {"alpha", alpha}, {"distances", b.distances}, {"values", b.values},
                      {"worst_growth", b.worst_growth}, {"bounded", b.bounded}});
    for (std::size_t i = 0; i < b.values.size(); ++i) {
      result.table.rows.push_back({name, alpha, gaps[i], b.distances[i], b.values[i]});
    }
    checks.add(name + "_alpha_" + format_double(alpha) + "_growth", b.worst_growth, factor, b.bounded);
  };
  for (double a : area_alphas) probe(BoundKind::kArea, a);
  for (double a : boundary_alphas) probe(BoundKind::kBoundary, a);
  result.report["results"] = {{"probes", probes}};
  result.report["checks"] = checks.to_json();
  if (!checks.all_pass()) result.exit_code = kExitTolerance;
  return result;
}

// ---------------------------------------------------------------- stokes

std::vector<std::pair<std::string, std::string>> default_stokes_pairs(int n) {
  switch (n) {
    case 1:
      return {{"conj(z1)", "1"}, {"conj(z1)^2*z1", "z1 + conj(z1)"}, {"1", "z1*conj(z1)^2"}};
    case 2:
      return {{"conj(z1)*conj(z2)", "z1*z2"},
              {"conj(z1)^2*conj(z2)*z2", "1 + conj(z1)*z2"},
              {"z1*conj(z2)^2 + conj(z1)", "conj(z1)*conj(z2) + z2^2"}};
    default:
      return {{"conj(z1)*conj(z2)*conj(z3)", "z1*z2*z3 + 1"},
              {"conj(z1)^2*conj(z2)*conj(z3)*z3", "conj(z2) + z1*conj(z3)"}};
  }
}

RunResult run_stokes(const RunConfig& cfg) {
  const ProductDomain domain = cfg.product();
  const int n = domain.arity();
  const json p = params(cfg, "stokes");
  std::vector<std::pair<std::string, std::string>> pairs;
  if (p.contains("pairs")) {
    for (const json& pr : p["pairs"]) {
      if (!pr.is_object() || !pr.contains("f") || !pr.contains("g")) {
        throw ValidationError("config: stokes.pairs: expected {f, g} objects");
      }
      pairs.emplace_back(pr["f"].get<std::string>(), pr["g"].get<std::string>());
    }
  } else {
    pairs = default_stokes_pairs(n);
  }
  const double tol = cfg.tolerance("stokes", 1e-6);
  RunResult result;
  Checks checks;
  result.table.header = {"f", "g", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "difference"};
  json rows = json::array();
  for (const auto& [fs, gs] : pairs) {
    const StokesResult r = stokes_check(parse(fs, n), parse(gs, n), domain, *cfg.suite);
    rows.push_back({{"f", fs}, {"g", gs}, {"lhs", complex_json(r.lhs)}, {"rhs", complex_json(r.rhs)},
                    {"difference", r.difference}});
    result.table.rows.push_back({fs, gs, r.lhs.real(), r.lhs.imag(), r.rhs.real(), r.rhs.imag(), r.difference});
    const double bound = tol * (1.0 + std::abs(r.lhs));
    checks.add("stokes[" + fs + " | " + gs + "]", r.difference, bound, r.difference <= bound);
  }
  result.report["results"] = {{"pairs", rows}};
  result.report["checks"] = checks.to_json();
  if (!checks.all_pass()) result.exit_code = kExitTolerance;
  return result;
}

// ---------------------------------------------------------------- supnorm

RunResult run_supnorm(const RunConfig& cfg) {
  const ProductDomain domain = cfg.product();
  const json p = params(cfg, "supnorm");
  std::vector<CatalogEntry> catalog;
  if (p.contains("potentials")) {
    for (const json& u : p["potentials"]) {
      const std::string text = u.get<std::string>();
      catalog.push_back({text, manufacture_form(parse(text, domain.arity()), domain.arity())});
    }
  } else {
    if (domain.arity() != 2) throw ValidationError("config: the default supnorm catalog is for n = 2");
    catalog = default_catalog();
  }
  const double margin = cfg.suite->margin;
  const auto suites = suite_list(p, domain.arity(), {{16, 24}, {32, 48}}, margin);
  const SamplePlan plan = cfg.plan(domain);
  const int threads = threads_of(cfg);
  RunResult result;
  Checks checks;
  result.table.header = {"suite", "form", "f_norm", "tf_norm", "ratio"};
  json tables = json::array();
  std::vector<double> maxima;
  for (std::size_t s = 0; s < suites.size(); ++s) {
    const SupnormTable t = supnorm_study(catalog, domain, suites[s], plan, threads);
    json rows = json::array();
    for (const SupnormRow& r : t.rows) {
      rows.push_back({{"form", r.label}, {"f_norm", r.f_norm}, {"tf_norm", r.tf_norm},
                      {"ratio", r.ratio ? json(*r.ratio) : json(nullptr)}});
      result.table.rows.push_back({static_cast<long long>(s), r.label, r.f_norm, r.tf_norm,
                                   r.ratio ? Table::Cell(*r.ratio) : Table::Cell(std::string("undefined"))});
    }
    const double mx = t.max_ratio.value_or(std::numeric_limits<double>::quiet_NaN());
    maxima.push_back(mx);
    tables.push_back({{"suite", suites[s].factors.front().n_rho}, {"ntheta", suites[s].factors.front().n_theta},
                      {"rows", rows}, {"max_ratio", number_json(mx)}});
    checks.add("max_ratio_finite[" + std::to_string(s) + "]", mx, std::numeric_limits<double>::max(),
               std::isfinite(mx));
  }
  for (std::size_t s = 1; s < maxima.size(); ++s) {
    const double change = std::abs(maxima[s] - maxima[s - 1]) / maxima[s - 1];
    checks.at_most("max_ratio_change[" + std::to_string(s) + "]", change, cfg.tolerance("stability", 0.2));
  }
  // homogeneity: scaling a form leaves its ratio unchanged
  const double alpha = param(p, "scale", 1000.0);
  const std::vector<CatalogEntry> pair = {catalog.front(),
                                          {"scaled", catalog.front().form.scaled(cplx(alpha))}};
  const SupnormTable h = supnorm_study(pair, domain, suites.front(), plan, threads);
  if (h.rows[0].ratio && h.rows[1].ratio) {
    const double drift = std::abs(*h.rows[1].ratio - *h.rows[0].ratio) / *h.rows[0].ratio;
    checks.at_most("scale_invariance", drift, cfg.tolerance("homogeneity", 1e-10));
  }
  result.report["results"] = {{"suites", tables}, {"max_ratios", maxima}};
  result.report["checks"] = checks.to_json();
  if (!checks.all_pass()) result.exit_code = kExitTolerance;
  return result;
}

// ---------------------------------------------------------------- convergence

RunResult run_convergence(const RunConfig& cfg) {
  const ProductDomain domain = cfg.product();
  if (!cfg.potential) throw ValidationError("config: convergence mode needs 'potential'");
  const json p = params(cfg, "convergence");
  const auto suites = suite_list(p, domain.arity(), {{16, 16}, {32, 32}, {64, 64}}, cfg.suite->margin);
  const SamplePlan plan = cfg.plan(domain);
  const auto rows =
      convergence_study(parse(*cfg.potential, domain.arity()), domain, suites, plan, cfg.fd_step, threads_of(cfg));
  RunResult result;
  Checks checks;
  result.table.header = {"nr", "ntheta", "nboundary", "max_error", "residual"};
  json out = json::array();
  for (const ConvergenceRow& r : rows) {
    const FactorSize& f = r.suite.factors.front();
    out.push_back({{"nr", f.n_rho}, {"ntheta", f.n_theta}, {"nboundary", f.n_boundary}, {"max_error", r.max_error},
                   {"residual", r.residual}});
    result.table.rows.push_back({static_cast<long long>(f.n_rho), static_cast<long long>(f.n_theta),
                                 static_cast<long long>(f.n_boundary), r.max_error, r.residual});
  }
  if (cfg.tolerances.contains("residual")) {
    checks.at_most("final_residual", rows.back().residual, cfg.tolerance("residual", 0.0));
  }
  if (cfg.tolerances.contains("solution")) {
    checks.at_most("final_error", rows.back().max_error, cfg.tolerance("solution", 0.0));
  }
  result.report["results"] = {{"rows", out}};
  result.report["checks"] = checks.to_json();
  if (!checks.all_pass()) result.exit_code = kExitTolerance;
  return result;
}

std::string csv_field(const Table::Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) out += (c ? "," : "") + csv_field(table.header[c]);
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_field(row[c]);
    out += "\n";
  }
  return out;
}

RunResult run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  if (cfg.mode == "identities") {
    result = run_identities(cfg);
  } else if (cfg.mode == "exponents") {
    result = run_exponents(cfg);
  } else if (cfg.mode == "solve" || cfg.mode == "verify") {
    result = run_solve(cfg, cfg.mode == "verify");
  } else if (cfg.mode == "bounds") {
    result = run_bounds(cfg);
  } else if (cfg.mode == "stokes") {
    result = run_stokes(cfg);
  } else if (cfg.mode == "supnorm") {
    result = run_supnorm(cfg);
  } else if (cfg.mode == "convergence") {
    result = run_convergence(cfg);
  } else {
    throw ValidationError("unknown mode '" + cfg.mode + "'");
  }
  json report = {{"mode", cfg.mode}, {"config", cfg.echo}};
  report["status"] = result.exit_code == kExitOk ? "pass" : "fail";
  for (const auto& [key, value] : result.report.items()) report[key] = value;
  if (cfg.timings) {
    report["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  result.report = std::move(report);
  return result;
}

std::string render(const RunConfig& cfg, const RunResult& result) {
  if (cfg.format == "csv") return to_csv(result.table);
  return result.report.dump(2) + "\n";
}

int execute(const std::string& mode, const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_path, std::ostream& out, std::ostream& err) {
  try {
    json document = load_config_file(config_path);
    for (const std::string& o : overrides) apply_override(document, o);
    if (!document.is_object()) throw ValidationError("config: expected a JSON object");
    if (document.contains("mode") && document["mode"] != mode) {
      throw ValidationError("config: mode '" + document["mode"].dump() + "' does not match the command '" + mode +
                            "'");
    }
    document["mode"] = mode;
    const RunConfig cfg = parse_config(document);
    const RunResult result = run(cfg);
    const std::string text = render(cfg, result);
    const std::string path = out_path.empty() ? cfg.output_path : out_path;
    if (path.empty()) {
      out << text;
    } else {
      std::ofstream file(path, std::ios::binary);
      if (!file) throw ValidationError("cannot write report to '" + path + "'");
      file << text;
    }
    if (result.exit_code == kExitTolerance) err << "dbar: tolerance check failed\n";
    return result.exit_code;
  } catch (const ValidationError& e) {
    err << "dbar: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "dbar: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const json::exception& e) {
    err << "dbar: config: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace dbar
