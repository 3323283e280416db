#include "dbar/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dbar/error.hpp"

namespace dbar {

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw ValidationError("config: " + where + ": " + what);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) invalid(where, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) invalid(where, "expected an integer");
  return j.get<int>();
}

cplx complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) invalid(where, "expected [re, im]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

FactorSize factor_size(const json& j, const std::string& where) {
  if (!j.is_object()) invalid(where, "expected an object");
  FactorSize f;
  if (j.contains("nr")) f.n_rho = integer(j["nr"], where + ".nr");
  if (j.contains("ntheta")) f.n_theta = integer(j["ntheta"], where + ".ntheta");
  f.n_boundary = j.contains("nboundary") ? integer(j["nboundary"], where + ".nboundary") : 8 * f.n_theta;
  for (const auto& [key, _] : j.items()) {
    if (key != "nr" && key != "ntheta" && key != "nboundary") invalid(where, "unknown field '" + key + "'");
  }
  return f;
}

PointSpec point_spec(const json& j, int arity) {
  PointSpec spec;
  if (j.is_object()) {
    spec.sampled = true;
    if (!j.contains("count")) invalid("eval_points", "missing 'count'");
    spec.count = integer(j["count"], "eval_points.count");
    if (spec.count < 1) invalid("eval_points.count", "must be positive");
    if (j.contains("margin")) spec.margin = number(j["margin"], "eval_points.margin");
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) invalid("eval_points.seed", "expected a non-negative integer");
      spec.seed = j["seed"].get<std::uint64_t>();
    }
    return spec;
  }
  if (!j.is_array() || j.empty()) invalid("eval_points", "expected a non-empty list or {count, margin, seed}");
  for (std::size_t p = 0; p < j.size(); ++p) {
    const std::string where = "eval_points[" + std::to_string(p) + "]";
    if (!j[p].is_array() || static_cast<int>(j[p].size()) != arity) {
      invalid(where, "expected " + std::to_string(arity) + " coordinates");
    }
    EvalPoint z;
    for (std::size_t c = 0; c < j[p].size(); ++c) {
      z.push_back(complex_value(j[p][c], where + "[" + std::to_string(c) + "]"));
    }
    spec.explicit_points.push_back(std::move(z));
  }
  return spec;
}

}  // namespace

StarDomain parse_domain(const json& spec) {
  if (!spec.is_object()) invalid("domain", "expected an object");
  const std::string type = spec.value("type", "disk");
  for (const auto& [key, value] : spec.items()) {
    if (key != "type" && key != "center" && key != "radius" && key != "a" && key != "b" && key != "coeffs") {
      invalid("domain", "unknown field '" + key + "'");
    }
  }
  const cplx center = spec.contains("center") ? complex_value(spec["center"], "domain.center") : cplx(0.0);
  if (type == "disk") {
    return make_disk(center, spec.contains("radius") ? number(spec["radius"], "domain.radius") : 1.0);
  }
  if (type == "ellipse") {
    if (!spec.contains("a") || !spec.contains("b")) invalid("domain", "ellipse needs 'a' and 'b'");
    return make_ellipse(center, number(spec["a"], "domain.a"), number(spec["b"], "domain.b"));
  }
  if (type == "star") {
    // "coeffs": [a0, [a1, b1], [a2, b2], ...]
    if (!spec.contains("coeffs") || !spec["coeffs"].is_array() || spec["coeffs"].empty()) {
      invalid("domain.coeffs", "star domain needs [a0, [a1, b1], ...]");
    }
    const json& c = spec["coeffs"];
    std::vector<std::pair<double, double>> harmonics;
    for (std::size_t k = 1; k < c.size(); ++k) {
      const std::string where = "domain.coeffs[" + std::to_string(k) + "]";
      if (!c[k].is_array() || c[k].size() != 2) invalid(where, "expected [a_k, b_k]");
      harmonics.emplace_back(number(c[k][0], where), number(c[k][1], where));
    }
    return StarDomain(center, number(c[0], "domain.coeffs[0]"), std::move(harmonics));
  }
  invalid("domain.type", "unknown domain type '" + type + "'");
}

QuadratureSuite parse_suite(const json& spec, int arity) {
  QuadratureSuite suite;
  if (spec.is_array()) {
    if (static_cast<int>(spec.size()) != arity) invalid("quadrature", "need one entry per domain factor");
    for (std::size_t j = 0; j < spec.size(); ++j) {
      suite.factors.push_back(factor_size(spec[j], "quadrature[" + std::to_string(j) + "]"));
    }
  } else {
    suite.factors.assign(arity, factor_size(spec, "quadrature"));
  }
  suite.validate(arity);
  return suite;
}

ProductDomain RunConfig::product() const {
  if (domains.empty()) throw ValidationError("config: mode '" + mode + "' needs 'domains'");
  return ProductDomain(domains);
}

OneForm RunConfig::form() const {
  const int n = arity();
  if (potential) return manufacture_form(parse(*potential, n), n);
  if (components.empty()) {
    throw ValidationError("config: mode '" + mode + "' needs 'potential' or 'components'");
  }
  std::vector<Expr> comps;
  for (const std::string& c : components) comps.push_back(parse(c, n));
  return OneForm(n, std::move(comps));
}

SamplePlan RunConfig::plan(const ProductDomain& domain) const {
  if (!points) throw ValidationError("config: mode '" + mode + "' needs 'eval_points'");
  const double margin = suite ? suite->margin : kDefaultMargin;
  if (points->sampled) return sample_plan(domain, points->count, std::max(points->margin, margin), points->seed);
  return explicit_plan(domain, points->explicit_points, margin);
}

double RunConfig::tolerance(const std::string& key, double fallback) const {
  if (!tolerances.contains(key)) return fallback;
  return tolerances[key].get<double>();
}

RunConfig parse_config(const json& document) {
  if (!document.is_object()) invalid("(root)", "expected a JSON object");
  static const std::vector<std::string> known = {
      "mode",      "domains",     "potential", "components", "operator", "quadrature", "eval_points",
      "fd_step",   "tolerances",  "output",    "timings",    "threads",  "n",          "identities",
      "bounds",    "stokes",      "supnorm",   "convergence", "margin"};
  for (const auto& [key, _] : document.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) invalid(key, "unknown field");
  }
  RunConfig cfg;
  cfg.echo = document;
  if (!document.contains("mode") || !document["mode"].is_string()) invalid("mode", "missing or not a string");
  cfg.mode = document["mode"].get<std::string>();
  const auto& modes = run_modes();
  if (std::find(modes.begin(), modes.end(), cfg.mode) == modes.end()) {
    invalid("mode", "unknown mode '" + cfg.mode + "'");
  }
  if (document.contains("domains")) {
    const json& ds = document["domains"];
    if (!ds.is_array() || ds.empty() || ds.size() > 9) invalid("domains", "expected 1 to 9 domain descriptors");
    for (const json& d : ds) cfg.domains.push_back(parse_domain(d));
  }
  if (document.contains("potential")) {
    if (!document["potential"].is_string()) invalid("potential", "expected an expression string");
    cfg.potential = document["potential"].get<std::string>();
  }
  if (document.contains("components")) {
    const json& cs = document["components"];
    if (!cs.is_array()) invalid("components", "expected a list of expression strings");
    for (const json& c : cs) {
      if (!c.is_string()) invalid("components", "expected expression strings");
      cfg.components.push_back(c.get<std::string>());
    }
    if (static_cast<int>(cfg.components.size()) != cfg.arity()) {
      invalid("components", "need one component per domain factor");
    }
  }
  if (cfg.potential && !cfg.components.empty()) invalid("potential", "give either 'potential' or 'components'");
  if (document.contains("operator")) {
    cfg.op = document["operator"].is_string() ? document["operator"].get<std::string>() : "";
    if (cfg.op != "t" && cfg.op != "ttilde" && cfg.op != "both") invalid("operator", "expected t, ttilde or both");
  }
  if (!cfg.domains.empty()) {
    cfg.suite = parse_suite(document.value("quadrature", json::object()), cfg.arity());
    if (document.contains("margin")) cfg.suite->margin = number(document["margin"], "margin");
    cfg.suite->validate(cfg.arity());
    if (document.contains("eval_points")) cfg.points = point_spec(document["eval_points"], cfg.arity());
  } else if (document.contains("eval_points") || document.contains("quadrature")) {
    invalid("domains", "required with 'eval_points' or 'quadrature'");
  }
  if (document.contains("fd_step")) {
    cfg.fd_step = number(document["fd_step"], "fd_step");
    if (!(cfg.fd_step > 0.0)) invalid("fd_step", "must be positive");
  }
  if (document.contains("tolerances")) {
    const json& t = document["tolerances"];
    if (!t.is_object()) invalid("tolerances", "expected an object");
    for (const auto& [key, value] : t.items()) number(value, "tolerances." + key);
    cfg.tolerances = t;
  }
  if (document.contains("output")) {
    const json& o = document["output"];
    if (!o.is_object()) invalid("output", "expected {path, format}");
    if (o.contains("path")) cfg.output_path = o["path"].get<std::string>();
    if (o.contains("format")) cfg.format = o["format"].get<std::string>();
    if (cfg.format != "json" && cfg.format != "csv") invalid("output.format", "expected json or csv");
  }
  if (document.contains("timings")) {
    if (!document["timings"].is_boolean()) invalid("timings", "expected true or false");
    cfg.timings = document["timings"].get<bool>();
  }
  if (document.contains("threads")) {
    cfg.threads = integer(document["threads"], "threads");
    if (cfg.threads < 0) invalid("threads", "must be non-negative");
  }
  return cfg;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ValidationError("config: '" + path + "' is not valid JSON: " + e.what());
  }
}

void apply_override(json& document, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ValidationError("override must look like key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  if (key.find('.') != std::string::npos) {
    throw ValidationError("override '" + key + "': only top-level fields can be overridden");
  }
  if (document.contains(key) && (document[key].is_object() || document[key].is_array())) {
    throw ValidationError("override '" + key + "': only scalar fields can be overridden");
  }
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded() || value.is_object() || value.is_array()) value = text;
  document[key] = std::move(value);
}

}  // namespace dbar
