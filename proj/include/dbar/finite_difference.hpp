#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace dbar {

using cplx = std::complex<double>;

/// ∂/∂z̄_j by central differences, ½[(u(z+h) − u(z−h))/2h + i(u(z+ih) − u(z−ih))/2h].
/// `j` is 0-based.
inline cplx fd_dbar(const std::function<cplx(const std::vector<cplx>&)>& u, std::vector<cplx> z,
                    std::size_t j, double h) {
  const cplx z0 = z[j];
  z[j] = z0 + h;
  const cplx xp = u(z);
  z[j] = z0 - h;
  const cplx xm = u(z);
  z[j] = z0 + cplx(0.0, h);
  const cplx yp = u(z);
  z[j] = z0 - cplx(0.0, h);
  const cplx ym = u(z);
  return 0.5 * ((xp - xm) / (2.0 * h) + cplx(0.0, 1.0) * (yp - ym) / (2.0 * h));
}

/// ∂/∂z_j, same stencil with the opposite sign on the imaginary direction.
inline cplx fd_dz(const std::function<cplx(const std::vector<cplx>&)>& u, std::vector<cplx> z,
                  std::size_t j, double h) {
  const cplx z0 = z[j];
  z[j] = z0 + h;
  const cplx xp = u(z);
  z[j] = z0 - h;
  const cplx xm = u(z);
  z[j] = z0 + cplx(0.0, h);
  const cplx yp = u(z);
  z[j] = z0 - cplx(0.0, h);
  const cplx ym = u(z);
  return 0.5 * ((xp - xm) / (2.0 * h) - cplx(0.0, 1.0) * (yp - ym) / (2.0 * h));
}

}  // namespace dbar
