#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dbar/forms.hpp"
#include "dbar/quadrature.hpp"

namespace dbar {

using json = nlohmann::json;

inline const std::vector<std::string>& run_modes() {
  static const std::vector<std::string> modes = {"identities", "exponents", "solve",   "verify",
                                                 "bounds",     "stokes",    "supnorm", "convergence"};
  return modes;
}

/// Either explicit points or a seeded rejection sample.
struct PointSpec {
  std::vector<EvalPoint> explicit_points;
  int count = 0;
  double margin = 0.05;
  std::uint64_t seed = 1;
  bool sampled = false;
};

struct RunConfig {
  json echo;  // the parsed input after overrides
  std::string mode;
  std::vector<StarDomain> domains;
  std::optional<std::string> potential;
  std::vector<std::string> components;
  std::string op = "t";  // t | ttilde | both
  std::optional<QuadratureSuite> suite;
  std::optional<PointSpec> points;
  double fd_step = 1e-4;
  json tolerances = json::object();
  std::string output_path;
  std::string format = "json";
  bool timings = false;
  int threads = 0;  // 0: DBAR_THREADS or hardware

  int arity() const { return static_cast<int>(domains.size()); }
  ProductDomain product() const;
  /// ∂̄ of the potential, or the explicit components.
  OneForm form() const;
  SamplePlan plan(const ProductDomain& domain) const;
  double tolerance(const std::string& key, double fallback) const;
};

StarDomain parse_domain(const json& spec);
QuadratureSuite parse_suite(const json& spec, int arity);

/// Validates and converts; throws ValidationError with a field path on failure.
RunConfig parse_config(const json& document);

json load_config_file(const std::string& path);

/// `key=value` on a top-level scalar field; the value is read as JSON when it
/// parses, otherwise as a string.
void apply_override(json& document, std::string_view assignment);

}  // namespace dbar
