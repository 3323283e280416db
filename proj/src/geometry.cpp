#include "dbar/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "dbar/error.hpp"

namespace dbar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_finite(cplx z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw ValidationError(std::string(what) + " must be finite");
  }
}

}  // namespace

GaussRule gauss_legendre01(int n) {
  if (n < 1) throw ValidationError("Gauss-Legendre order must be positive");
  // P_n(x) and P_n'(x) by the three-term recurrence
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 1.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

StarDomain::StarDomain(cplx center, double a0, std::vector<std::pair<double, double>> harmonics)
    : center_(center), a0_(a0), harmonics_(std::move(harmonics)) {
  check_finite(center_, "domain center");
  if (!std::isfinite(a0_)) throw ValidationError("radial coefficient a0 must be finite");
  for (const auto& [a, b] : harmonics_) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw ValidationError("radial coefficients must be finite");
    }
  }
  const int samples = std::max(1024, 16 * order());
  r_min_ = std::numeric_limits<double>::infinity();
  r_max_ = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double r = radius(kTwoPi * j / samples);
    r_min_ = std::min(r_min_, r);
    r_max_ = std::max(r_max_, r);
  }
  if (!(r_min_ > 0.0)) {
    throw ValidationError("radial function must stay positive (r_min = " + std::to_string(r_min_) +
                          ")");
  }
}

double StarDomain::radius(double theta) const {
  double r = a0_;
  if (harmonics_.empty()) return r;
  const cplx step(std::cos(theta), std::sin(theta));
  cplx e = step;
  for (const auto& [a, b] : harmonics_) {
    r += a * e.real() + b * e.imag();
    e *= step;
  }
  return r;
}

double StarDomain::radius_derivative(double theta) const {
  double dr = 0.0;
  const cplx step(std::cos(theta), std::sin(theta));
  cplx e = step;
  int k = 1;
  for (const auto& [a, b] : harmonics_) {
    dr += k * (-a * e.imag() + b * e.real());
    e *= step;
    ++k;
  }
  return dr;
}

cplx StarDomain::boundary_point(double theta) const {
  return center_ + radius(theta) * cplx(std::cos(theta), std::sin(theta));
}

StarDomain StarDomain::rotated(double phi) const {
  std::vector<std::pair<double, double>> h;
  h.reserve(harmonics_.size());
  int k = 1;
  for (const auto& [a, b] : harmonics_) {
    const double c = std::cos(k * phi), s = std::sin(k * phi);
    h.emplace_back(a * c - b * s, a * s + b * c);
    ++k;
  }
  return StarDomain(center_, a0_, std::move(h));
}

StarDomain StarDomain::translated(cplx shift) const {
  return StarDomain(center_ + shift, a0_, harmonics_);
}

StarDomain make_disk(cplx center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("disk radius must be positive");
  }
  return StarDomain(center, radius, {});
}

StarDomain make_ellipse(cplx center, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("ellipse semi-axes must be positive");
  }
  if (a == b) return make_disk(center, a);
  auto exact = [a, b](double t) {
    const double c = std::cos(t), s = std::sin(t);
    return a * b / std::sqrt(b * b * c * c + a * a * s * s);
  };
  constexpr double kTol = 1e-10;
  for (int n = 1024; n <= 65536; n *= 2) {
    std::vector<double> samples(n);
    for (int j = 0; j < n; ++j) samples[j] = exact(kTwoPi * j / n);
    double a0 = 0.0;
    for (double v : samples) a0 += v;
    a0 /= n;
    // Only even cosine harmonics are non-zero for an axis-aligned ellipse.
    std::vector<std::pair<double, double>> h;
    const int kmax = n / 2 - 1;
    int quiet = 0;
    for (int k = 1; k <= kmax; ++k) {
      double ck = 0.0;
      if (k % 2 == 0) {
        for (int j = 0; j < n; ++j) {
          ck += samples[j] * std::cos(kTwoPi * static_cast<double>(static_cast<std::int64_t>(k) * j % n) / n);
        }
        ck *= 2.0 / n;
      }
      h.emplace_back(ck, 0.0);
      if (k % 2 == 0) {
        quiet = std::abs(ck) < 1e-14 ? quiet + 1 : 0;
        if (quiet >= 4) break;
      }
    }
    while (!h.empty() && std::abs(h.back().first) < 1e-16) h.pop_back();
    StarDomain d(center, a0, h);
    double err = 0.0;
    for (int j = 0; j < 4096; ++j) {
      const double t = kTwoPi * (j + 0.37) / 4096;
      err = std::max(err, std::abs(d.radius(t) - exact(t)));
    }
    if (err <= kTol) return d;
  }
  throw ValidationError("ellipse too eccentric for the Fourier radial representation");
}

bool contains(const StarDomain& d, cplx z, double margin) {
  const cplx w = z - d.center();
  const double theta = std::atan2(w.imag(), w.real());
  return std::abs(w) <= d.radius(theta) - margin;
}

double radial_gap(const StarDomain& d, cplx z) {
  const cplx w = z - d.center();
  return d.radius(std::atan2(w.imag(), w.real())) - std::abs(w);
}

double boundary_distance(const StarDomain& d, cplx z) {
  const int m = 4096 + 32 * d.order();
  auto dist2 = [&](double t) { return std::norm(d.boundary_point(t) - z); };
  int best = 0;
  double best_val = dist2(0.0);
  for (int j = 1; j < m; ++j) {
    const double v = dist2(kTwoPi * j / m);
    if (v < best_val) best_val = v, best = j;
  }
  double lo = kTwoPi * (best - 1) / m, hi = kTwoPi * (best + 1) / m;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = dist2(x1), f2 = dist2(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - g * (hi - lo), f1 = dist2(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + g * (hi - lo), f2 = dist2(x2);
    }
  }
  return std::sqrt(std::min({best_val, f1, f2}));
}

double AreaRule::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

AreaRule area_rule(const StarDomain& d, int n_rho, int n_theta) {
  if (n_rho < 2 || n_theta < 4) {
    throw ValidationError("area rule needs n_rho >= 2 and n_theta >= 4");
  }
  if (!(d.min_radius() > 0.0)) throw ValidationError("degenerate domain");
  const GaussRule gl = gauss_legendre01(n_rho);
  AreaRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(n_rho) * n_theta);
  rule.weights.reserve(static_cast<std::size_t>(n_rho) * n_theta);
  const double dtheta = kTwoPi / n_theta;
  for (int j = 0; j < n_theta; ++j) {
    const double theta = dtheta * j;
    const double r = d.radius(theta);
    const cplx e(std::cos(theta), std::sin(theta));
    for (int i = 0; i < n_rho; ++i) {
      const double rho = gl.nodes[i];
      rule.nodes.push_back(d.center() + rho * r * e);
      rule.weights.push_back(gl.weights[i] * dtheta * rho * r * r);
    }
  }
  return rule;
}

BoundaryRule boundary_rule(const StarDomain& d, int n_theta) {
  if (n_theta < 8) throw ValidationError("boundary rule needs n_theta >= 8");
  BoundaryRule rule;
  rule.nodes.reserve(n_theta);
  rule.tangents.reserve(n_theta);
  const double dtheta = kTwoPi / n_theta;
  for (int j = 0; j < n_theta; ++j) {
    const double theta = dtheta * j;
    const cplx e(std::cos(theta), std::sin(theta));
    const double r = d.radius(theta);
    const double dr = d.radius_derivative(theta);
    rule.nodes.push_back(d.center() + r * e);
    rule.tangents.push_back((dr * e + r * cplx(0.0, 1.0) * e) * dtheta);
  }
  return rule;
}

std::vector<std::pair<double, double>> ray_segments(const StarDomain& d, cplx z, double phi) {
  const cplx w = z - d.center();
  const cplx e(std::cos(phi), std::sin(phi));
  if (d.is_disk()) {
    const double r = d.a0();
    const double b = (std::conj(w) * e).real();
    const double disc = r * r - std::norm(w) + b * b;
    if (disc <= 0.0) throw ValidationError("ray origin outside the domain");
    // stable form of -b + sqrt(disc)
    const double q = r * r - std::norm(w);
    if (q < 0.0) throw ValidationError("ray origin outside the domain");
    const double s = std::sqrt(disc);
    const double hi = b <= 0.0 ? s - b : q / (s + b);
    return {{0.0, hi}};
  }
  auto gap = [&](double rho) {
    const cplx p = w + rho * e;
    return std::abs(p) - d.radius(std::atan2(p.imag(), p.real()));
  };
  if (!(gap(0.0) < 0.0)) throw ValidationError("ray origin outside the domain");
  const double rho_max = std::abs(w) + d.max_radius() * (1.0 + 1e-9) + 1e-12;
  const int samples = 64 + 16 * d.order();
  std::vector<double> crossings;
  double prev_rho = 0.0, prev_val = gap(0.0);
  for (int j = 1; j <= samples; ++j) {
    const double rho = rho_max * j / samples;
    const double val = gap(rho);
    if ((prev_val < 0.0) != (val < 0.0)) {
      boost::uintmax_t iters = 200;
      auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 4e-16 * std::max(1.0, std::abs(hi)); };
      const auto [lo, hi] =
          boost::math::tools::toms748_solve(gap, prev_rho, rho, prev_val, val, tol, iters);
      crossings.push_back(0.5 * (lo + hi));
    }
    prev_rho = rho;
    prev_val = val;
  }
  if (crossings.empty()) throw NumericalError("ray never leaves the domain");
  std::vector<std::pair<double, double>> segments;
  segments.emplace_back(0.0, crossings[0]);
  for (std::size_t k = 1; k + 1 < crossings.size(); k += 2) {
    segments.emplace_back(crossings[k], crossings[k + 1]);
  }
  return segments;
}

RayRule ray_rule(const StarDomain& d, cplx z, int n_rho, int n_phi) {
  if (n_rho < 2 || n_phi < 4) throw ValidationError("ray rule needs n_rho >= 2 and n_phi >= 4");
  const GaussRule gl = gauss_legendre01(n_rho);
  RayRule rule;
  rule.origin = z;
  const std::size_t cap = static_cast<std::size_t>(n_rho) * n_phi;
  rule.nodes.reserve(cap);
  rule.rho.reserve(cap);
  rule.direction.reserve(cap);
  rule.weights.reserve(cap);
  const double dphi = kTwoPi / n_phi;
  for (int j = 0; j < n_phi; ++j) {
    const double phi = dphi * j;
    const cplx e(std::cos(phi), std::sin(phi));
    for (const auto& [lo, hi] : ray_segments(d, z, phi)) {
      const double len = hi - lo;
      for (int i = 0; i < n_rho; ++i) {
        const double rho = lo + len * gl.nodes[i];
        rule.nodes.push_back(z + rho * e);
        rule.rho.push_back(rho);
        rule.direction.push_back(e);
        rule.weights.push_back(gl.weights[i] * len * dphi * rho);
      }
    }
  }
  return rule;
}

std::vector<double> star_radii_about(const StarDomain& d, cplx z, int n_phi) {
  std::vector<double> radii(n_phi);
  for (int j = 0; j < n_phi; ++j) {
    const auto segs = ray_segments(d, z, kTwoPi * j / n_phi);
    if (segs.size() != 1) {
      throw NumericalError("domain is not star-shaped about the evaluation point");
    }
    radii[j] = segs[0].second;
  }
  return radii;
}

}  // namespace dbar
