#include "dbar/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "dbar/error.hpp"

namespace dbar {

QuadratureSuite QuadratureSuite::uniform(int arity, int n_rho, int n_theta, int n_boundary) {
  if (arity < 1) throw ValidationError("suite arity must be positive");
  QuadratureSuite s;
  s.factors.assign(arity, FactorSize{n_rho, n_theta, n_boundary > 0 ? n_boundary : 8 * n_theta});
  s.validate(arity);
  return s;
}

void QuadratureSuite::validate(int arity) const {
  if (static_cast<int>(factors.size()) != arity) {
    throw ValidationError("quadrature suite has " + std::to_string(factors.size()) +
                          " factors, domain has " + std::to_string(arity));
  }
  for (const FactorSize& f : factors) {
    if (f.n_rho < 2) throw ValidationError("quadrature needs nr >= 2");
    if (f.n_theta < 4) throw ValidationError("quadrature needs ntheta >= 4");
    if (f.n_boundary < 8) throw ValidationError("quadrature needs nboundary >= 8");
  }
  if (!(margin >= 0.0)) throw ValidationError("margin must be non-negative");
}

SolidBlock::SolidBlock(std::vector<StarDomain> factors, std::vector<cplx> centre,
                       std::vector<FactorSize> sizes)
    : factors_(std::move(factors)), centre_(std::move(centre)), sizes_(std::move(sizes)) {
  const std::size_t p = factors_.size();
  if (p == 0 || centre_.size() != p || sizes_.size() != p) {
    throw ValidationError("solid block: inconsistent factor data");
  }
  if (p == 1) {
    ray_ = ray_rule(factors_[0], centre_[0], sizes_[0].n_rho, sizes_[0].n_theta);
    chunks_ = 1;
    return;
  }
  chunks_ = 1;
  for (std::size_t j = 0; j < p; ++j) {
    gauss_.push_back(gauss_legendre01(sizes_[j].n_rho));
    radii_.push_back(star_radii_about(factors_[j], centre_[j], sizes_[j].n_theta));
    chunks_ *= static_cast<std::size_t>(sizes_[j].n_theta);
  }
  // The pyramid nodes t ∈ [0,1]^p and their weights do not depend on the
  // direction tuple, so they are tabulated once.
  std::vector<std::size_t> counter(p);
  for (std::size_t a = 0; a < p; ++a) {
    // pyramid a: t_a = u, t_j = u v_j; the Gauss index of t_a drives u
    std::fill(counter.begin(), counter.end(), 0);
    for (;;) {
      const double u = gauss_[a].nodes[counter[a]];
      double w = gauss_[a].weights[counter[a]] * std::pow(u, static_cast<int>(p) - 1);
      for (std::size_t j = 0; j < p; ++j) {
        double t = u;
        if (j != a) {
          t = u * gauss_[j].nodes[counter[j]];
          w *= gauss_[j].weights[counter[j]];
        }
        w *= t;  // Jacobian of dA_j = R_j² t_j dt_j dφ_j
        unit_nodes_.push_back(t);
      }
      unit_weights_.push_back(w);
      std::size_t j = 0;
      for (; j < p; ++j) {
        if (++counter[j] < gauss_[j].nodes.size()) break;
        counter[j] = 0;
      }
      if (j == p) break;
    }
  }
}

void SolidBlock::chunk(std::size_t c, std::vector<cplx>& nodes, std::vector<cplx>& weights) const {
  nodes.clear();
  weights.clear();
  const std::size_t p = factors_.size();
  const cplx two_i(0.0, 2.0);
  if (p == 1) {
    nodes = ray_.nodes;
    weights.resize(ray_.size());
    for (std::size_t q = 0; q < ray_.size(); ++q) weights[q] = two_i * ray_.weights[q];
    return;
  }
  // direction tuple of this chunk, first factor fastest
  std::vector<cplx> dir(p);
  std::vector<double> radius(p);
  cplx base(1.0);
  for (std::size_t j = 0; j < p; ++j) {
    const int nt = sizes_[j].n_theta;
    const std::size_t idx = c % nt;
    c /= nt;
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(idx) / nt;
    dir[j] = cplx(std::cos(phi), std::sin(phi));
    radius[j] = radii_[j][idx];
    // dA_j = R_j² t_j dt_j dφ_j; t_j and dt_j are in the tabulated weights
    base *= two_i * (2.0 * std::numbers::pi / nt) * radius[j] * radius[j];
  }
  std::vector<cplx> step(p);
  for (std::size_t j = 0; j < p; ++j) step[j] = radius[j] * dir[j];
  const std::size_t count = unit_weights_.size();
  nodes.resize(count * p);
  weights.resize(count);
  for (std::size_t q = 0; q < count; ++q) {
    for (std::size_t j = 0; j < p; ++j) nodes[q * p + j] = centre_[j] + step[j] * unit_nodes_[q * p + j];
    weights[q] = base * unit_weights_[q];
  }
}

int default_threads() {
  if (const char* env = std::getenv("DBAR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(count, threads > 0 ? threads : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace dbar
