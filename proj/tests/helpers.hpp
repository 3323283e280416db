#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "dbar/forms.hpp"
#include "dbar/random.hpp"

namespace dbar::fixtures {

inline ProductDomain unit_polydisk(int n) {
  return ProductDomain(std::vector<StarDomain>(n, make_disk(0.0, 1.0)));
}

/// Points of the unit polydisk with every |z_j| ≤ 1 − margin.
inline std::vector<EvalPoint> polydisk_points(int n, int count, double margin, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<EvalPoint> out;
  for (int p = 0; p < count; ++p) {
    EvalPoint z(n);
    for (cplx& c : z) {
      const double r = (1.0 - margin) * std::sqrt(rng.uniform());
      c = std::polar(r, 2.0 * M_PI * rng.uniform());
    }
    out.push_back(z);
  }
  return out;
}

inline double rel_error(cplx got, cplx want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

}  // namespace dbar::fixtures
