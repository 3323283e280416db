#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <bit>

#include "dbar/error.hpp"
#include "dbar/kernel_algebra.hpp"
#include "dbar/operator_ttilde.hpp"
#include "dbar/run.hpp"

namespace py = pybind11;
using namespace dbar;

namespace {

ProductDomain domains_from_json(const std::string& text) {
  const json spec = json::parse(text);
  if (!spec.is_array() || spec.empty()) throw ValidationError("domains: expected a non-empty list");
  std::vector<StarDomain> factors;
  for (const json& d : spec) factors.push_back(parse_domain(d));
  return ProductDomain(std::move(factors));
}

OneForm form_of(const std::vector<std::string>& components, int arity) {
  if (static_cast<int>(components.size()) != arity) throw ValidationError("need one component per factor");
  std::vector<Expr> exprs;
  for (const std::string& c : components) exprs.push_back(parse(c, arity));
  return OneForm(arity, std::move(exprs));
}

template <class Solve>
std::vector<cplx> solve_points(const std::string& domains, const std::vector<std::string>& components,
                               const std::vector<EvalPoint>& points, int nr, int ntheta, int nboundary,
                               double margin, int threads, Solve solve) {
  const ProductDomain d = domains_from_json(domains);
  const OneForm f = form_of(components, d.arity());
  QuadratureSuite suite = QuadratureSuite::uniform(d.arity(), nr, ntheta, nboundary);
  suite.margin = margin;
  const SamplePlan plan = explicit_plan(d, points, margin);
  py::gil_scoped_release release;
  const SolveReport report = solve(d, f, plan, suite, threads > 0 ? threads : default_threads());
  std::vector<cplx> out;
  for (const SolveEntry& e : report.entries) out.push_back(e.value);
  return out;
}

}  // namespace

PYBIND11_MODULE(_dbar, m) {
  m.doc() = "Integral solution operators for the d-bar equation on product domains";

  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", validation.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<Expr>(m, "Expr")
      .def("__call__", [](const Expr& e, const std::vector<cplx>& z) { return eval(e, z); })
      .def("d_bar", [](const Expr& e, int j) { return d_bar(e, j); })
      .def("d_z", [](const Expr& e, int j) { return d_z(e, j); })
      .def("max_variable", &Expr::max_variable)
      .def("__str__", &Expr::to_string)
      .def("__repr__", [](const Expr& e) { return "Expr('" + e.to_string() + "')"; });
  m.def("parse", &parse, py::arg("text"), py::arg("arity"));

  m.def("decompose_inverse_product",
        [](const std::vector<cplx>& a) { return decompose_inverse_product(a); });
  m.def(
      "kernel_derivative",
      [](const std::vector<cplx>& a, std::size_t distinguished, const std::vector<int>& positions) {
        if (distinguished >= a.size()) throw ValidationError("distinguished position out of range");
        std::uint32_t mask = 0;
        for (int p : positions) {
          if (p < 0 || static_cast<std::size_t>(p) >= a.size() || static_cast<std::size_t>(p) == distinguished ||
              (mask >> p & 1u)) {
            throw ValidationError("bad derivative position");
          }
          mask |= 1u << p;
        }
        return kernel_derivative_from_differences(a, distinguished, mask);
      },
      py::arg("a"), py::arg("distinguished"), py::arg("positions") = std::vector<int>{},
      "d^m g / d conj(a)_J for differences a, 0-based positions");

  py::class_<ExponentChoice>(m, "ExponentChoice")
      .def_readonly("n", &ExponentChoice::n)
      .def_readonly("m", &ExponentChoice::m)
      .def_readonly("k", &ExponentChoice::k)
      .def_readonly("parts", &ExponentChoice::parts);
  m.def("exponent_choice", &exponent_choice, py::arg("n"), py::arg("m"));
  m.def("satisfies_bound_system", &satisfies_bound_system);

  m.def(
      "solve_t",
      [](const std::string& domains, const std::vector<std::string>& components, const std::vector<EvalPoint>& points,
         int nr, int ntheta, int nboundary, double margin, int threads) {
        return solve_points(domains, components, points, nr, ntheta, nboundary, margin, threads,
                            [](const ProductDomain& d, const OneForm& f, const SamplePlan& p,
                               const QuadratureSuite& s, int t) { return solve_t(d, f, p, s, t); });
      },
      py::arg("domains"), py::arg("components"), py::arg("points"), py::arg("nr") = 64, py::arg("ntheta") = 64,
      py::arg("nboundary") = 0, py::arg("margin") = kDefaultMargin, py::arg("threads") = 0);
  m.def(
      "solve_ttilde",
      [](const std::string& domains, const std::vector<std::string>& components, const std::vector<EvalPoint>& points,
         int nr, int ntheta, int nboundary, double margin, int threads) {
        return solve_points(domains, components, points, nr, ntheta, nboundary, margin, threads,
                            [](const ProductDomain& d, const OneForm& f, const SamplePlan& p,
                               const QuadratureSuite& s, int t) { return solve_ttilde(d, f, p, s, t); });
      },
      py::arg("domains"), py::arg("components"), py::arg("points"), py::arg("nr") = 64, py::arg("ntheta") = 64,
      py::arg("nboundary") = 0, py::arg("margin") = kDefaultMargin, py::arg("threads") = 0);

  m.def(
      "run_config",
      [](const std::string& text) {
        const RunConfig cfg = parse_config(json::parse(text));
        RunResult result;
        {
          py::gil_scoped_release release;
          result = run(cfg);
        }
        return py::make_tuple(result.exit_code, result.report.dump());
      },
      py::arg("config"), "Runs one configured experiment; returns (exit_code, report JSON).");
}
