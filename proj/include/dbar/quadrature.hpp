#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dbar/cauchy1d.hpp"
#include "dbar/forms.hpp"

namespace dbar {

/// Node counts for one factor D_j: n_rho × n_theta for solid rules, n_boundary
/// for the trapezoid rule on ∂D_j.
struct FactorSize {
  int n_rho = 64;
  int n_theta = 64;
  int n_boundary = 512;

  friend bool operator==(const FactorSize&, const FactorSize&) = default;
};

struct QuadratureSuite {
  std::vector<FactorSize> factors;
  double margin = kDefaultMargin;
  /// Lifts the cost guard on |I| > 3.
  bool allow_large = false;

  /// Same sizes for every factor; n_boundary = 0 picks 8·n_theta.
  static QuadratureSuite uniform(int arity, int n_rho, int n_theta, int n_boundary = 0);

  /// Throws ValidationError on a size mismatch or counts below the minimums.
  void validate(int arity) const;
  PolarSize polar(std::size_t j) const { return {factors[j].n_rho, factors[j].n_theta}; }
};

/// Largest |I| evaluated without `allow_large`.
inline constexpr int kMaxIteratedOrder = 3;

/// Tensor product of solid factors D_{j1} × … × D_{jp}, all centred at the
/// matching coordinates of z, for integrands singular where ζ_j = z_j.
///
/// p = 1 is the polar rule about z. For p ≥ 2 each factor uses polar
/// coordinates about z_j normalised to t_j = ρ_j/R_j(φ_j) ∈ [0, 1], and the cube
/// [0,1]^p is split into p pyramids (t_a = u, t_j = u·v_j) so that the joint
/// singularity at t = 0 is absorbed by the Jacobian u^{p−1}. This requires each
/// D_j to be star-shaped about z_j.
///
/// Weights carry the measure Π dζ̄_j∧dζ_j = (2i)^p Π dA_j.
class SolidBlock {
 public:
  SolidBlock(std::vector<StarDomain> factors, std::vector<cplx> centre, std::vector<FactorSize> sizes);

  int dimension() const noexcept { return static_cast<int>(factors_.size()); }
  std::size_t chunk_count() const noexcept { return chunks_; }
  /// Nodes (dimension() consecutive entries per node) and weights of one chunk.
  void chunk(std::size_t c, std::vector<cplx>& nodes, std::vector<cplx>& weights) const;

 private:
  std::vector<StarDomain> factors_;
  std::vector<cplx> centre_;
  std::vector<FactorSize> sizes_;
  std::vector<GaussRule> gauss_;
  std::vector<std::vector<double>> radii_;
  std::vector<double> unit_nodes_;    // p entries per node
  std::vector<double> unit_weights_;
  std::size_t chunks_ = 0;
  RayRule ray_;  // p = 1
};

/// Integrand evaluated at a full point ζ (length n).
using PointFunction = std::function<cplx(std::span<const cplx>)>;

/// Worker count: DBAR_THREADS if set and positive, otherwise the hardware count.
int default_threads();

/// Runs body(i) for i in [0, count) on up to `threads` workers; rethrows the
/// first exception.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace dbar
