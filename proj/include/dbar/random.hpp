#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace dbar {

/// Seeded generator with draws fixed by the algorithm alone (mt19937_64 is
/// fully specified; the distributions of <random> are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }
  /// Modulus log-uniform in [r_lo, r_hi], argument uniform.
  std::complex<double> polar(double r_lo, double r_hi) {
    const double r = r_lo * std::pow(r_hi / r_lo, uniform());
    return std::polar(r, 2.0 * std::numbers::pi * uniform());
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dbar
