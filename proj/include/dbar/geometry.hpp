#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace dbar {

using cplx = std::complex<double>;

/// Gauss–Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre01(int n);

/// Planar domain bounded by the star-shaped curve
///   c + r(θ) e^{iθ},  r(θ) = a0 + Σ_k a_k cos(kθ) + b_k sin(kθ).
class StarDomain {
 public:
  StarDomain(cplx center, double a0, std::vector<std::pair<double, double>> harmonics);

  cplx center() const noexcept { return center_; }
  double a0() const noexcept { return a0_; }
  const std::vector<std::pair<double, double>>& harmonics() const noexcept { return harmonics_; }
  int order() const noexcept { return static_cast<int>(harmonics_.size()); }
  bool is_disk() const noexcept { return harmonics_.empty(); }

  double radius(double theta) const;
  double radius_derivative(double theta) const;
  double min_radius() const noexcept { return r_min_; }
  double max_radius() const noexcept { return r_max_; }

  /// Boundary point at parameter θ.
  cplx boundary_point(double theta) const;

  /// Same domain with its radial profile rotated by φ about the center.
  StarDomain rotated(double phi) const;
  StarDomain translated(cplx shift) const;

 private:
  cplx center_;
  double a0_;
  std::vector<std::pair<double, double>> harmonics_;
  double r_min_ = 0.0;
  double r_max_ = 0.0;
};

StarDomain make_disk(cplx center, double radius);

/// Ellipse x²/a² + y²/b² = 1 about `center`; radial profile fitted to 1e-10.
StarDomain make_ellipse(cplx center, double a, double b);

/// True iff |z − c| ≤ r(arg(z − c)) − margin.
bool contains(const StarDomain& d, cplx z, double margin = 0.0);

/// Radial distance from z to the boundary along the ray through the center.
double radial_gap(const StarDomain& d, cplx z);

/// Euclidean distance from z to the boundary curve (sampled, then refined).
double boundary_distance(const StarDomain& d, cplx z);

struct AreaRule {
  std::vector<cplx> nodes;
  std::vector<double> weights;  // area measure dA

  std::size_t size() const noexcept { return nodes.size(); }
  double total() const;
};

struct BoundaryRule {
  std::vector<cplx> nodes;
  std::vector<cplx> tangents;  // ζ'(θ)·Δθ, counterclockwise

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Polar rule about the domain center: Gauss–Legendre in ρ ∈ [0,1], trapezoid in θ.
AreaRule area_rule(const StarDomain& d, int n_rho, int n_theta);

BoundaryRule boundary_rule(const StarDomain& d, int n_theta);

/// Sub-intervals [lo, hi] of the ray z + ρ e^{iφ}, ρ ≥ 0, lying inside the domain.
std::vector<std::pair<double, double>> ray_segments(const StarDomain& d, cplx z, double phi);

/// Polar rule centred at the interior point z. Every node records its direction
/// and radius so that kernels singular at z can be paired with the Jacobian ρ.
struct RayRule {
  cplx origin;
  std::vector<cplx> nodes;
  std::vector<double> rho;
  std::vector<cplx> direction;  // e^{iφ}
  std::vector<double> weights;  // area measure dA = ρ dρ dφ

  std::size_t size() const noexcept { return nodes.size(); }
};

RayRule ray_rule(const StarDomain& d, cplx z, int n_rho, int n_phi);

/// Radius of the unique inside segment [0, R(φ)] of each direction
/// φ_j = 2πj/n_phi. Throws NumericalError if a ray leaves and re-enters.
std::vector<double> star_radii_about(const StarDomain& d, cplx z, int n_phi);

}  // namespace dbar
