#include "dbar/kernel_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "dbar/error.hpp"

namespace dbar {

namespace {

double ipow(double x, int n) {
  if (n < 0) return 1.0 / ipow(x, -n);
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

std::vector<cplx> differences(std::span<const cplx> zeta, std::span<const cplx> z, const IndexSet& I) {
  if (zeta.size() != z.size()) throw ValidationError("ζ and z must have the same arity");
  if (static_cast<std::size_t>(I.max()) > z.size()) throw ValidationError("index set exceeds arity");
  std::vector<cplx> a(I.size());
  for (std::size_t p = 0; p < I.size(); ++p) a[p] = zeta[I[p] - 1] - z[I[p] - 1];
  return a;
}

std::uint32_t mask_of(const IndexSet& I, std::size_t k, std::span<const int> J) {
  std::uint32_t mask = 0;
  for (int j : J) {
    const int p = I.position(j);
    if (p < 0) throw ValidationError("derivative index not in the index set");
    if (static_cast<std::size_t>(p) == k) {
      throw ValidationError("derivative index equals the distinguished index");
    }
    if (mask & (1u << p)) throw ValidationError("repeated derivative index");
    mask |= 1u << p;
  }
  return mask;
}

}  // namespace

IndexSet::IndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw ValidationError("index set must be non-empty");
  if (indices_.size() > 32) throw ValidationError("index set too large");
  if (indices_.front() < 1) throw ValidationError("indices are 1-based");
  for (std::size_t p = 1; p < indices_.size(); ++p) {
    if (indices_[p] <= indices_[p - 1]) throw ValidationError("index set must be strictly increasing");
  }
}

bool IndexSet::contains(int j) const { return position(j) >= 0; }

int IndexSet::position(int j) const {
  const auto it = std::lower_bound(indices_.begin(), indices_.end(), j);
  if (it == indices_.end() || *it != j) return -1;
  return static_cast<int>(it - indices_.begin());
}

std::vector<IndexSet> index_sets(int n, int s) {
  if (s < 1 || s > n) throw ValidationError("subset size out of range");
  std::vector<IndexSet> out;
  std::vector<int> cur(s);
  std::iota(cur.begin(), cur.end(), 1);
  for (;;) {
    out.emplace_back(cur);
    int p = s - 1;
    while (p >= 0 && cur[p] == n - s + p + 1) --p;
    if (p < 0) break;
    ++cur[p];
    for (int q = p + 1; q < s; ++q) cur[q] = cur[q - 1] + 1;
  }
  return out;
}

double big_g(std::span<const cplx> a) {
  if (a.empty()) throw ValidationError("G needs at least one argument");
  double g = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double prod = 1.0;
    for (std::size_t l = 0; l < a.size(); ++l) {
      if (l != k) prod *= std::norm(a[l]);
    }
    g += prod;
  }
  return g;
}

std::vector<cplx> decompose_inverse_product(std::span<const cplx> a) {
  if (a.empty()) throw ValidationError("decomposition needs at least one factor");
  for (const cplx& x : a) {
    if (x == cplx(0.0)) throw ValidationError("decomposition needs non-zero factors");
  }
  const double g = big_g(a);
  std::vector<cplx> terms(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    cplx num(1.0);
    for (std::size_t l = 0; l < a.size(); ++l) {
      if (l != k) num *= std::conj(a[l]);
    }
    terms[k] = num / (a[k] * g);
  }
  return terms;
}

cplx kernel_g(std::span<const cplx> zeta, std::span<const cplx> z, std::size_t k, const IndexSet& I) {
  if (k >= I.size()) throw ValidationError("distinguished position out of range");
  const auto a = differences(zeta, z, I);
  return kernel_derivative_from_differences(a, k, 0u);
}

cplx kernel_g_derivative(std::span<const cplx> zeta, std::span<const cplx> z, std::size_t k,
                         const IndexSet& I, std::span<const int> J) {
  if (k >= I.size()) throw ValidationError("distinguished position out of range");
  const auto a = differences(zeta, z, I);
  return kernel_derivative_from_differences(a, k, mask_of(I, k, J));
}

cplx kernel_derivative_from_differences(std::span<const cplx> a, std::size_t distinguished,
                                        std::uint32_t derivative_mask) {
  const std::size_t s = a.size();
  const int m = std::popcount(derivative_mask);
  double g = 0.0;
  for (std::size_t k = 0; k < s; ++k) {
    double prod = 1.0;
    for (std::size_t l = 0; l < s; ++l) {
      if (l != k) prod *= std::norm(a[l]);
    }
    g += prod;
  }
  const cplx ad = a[distinguished];
  if (ad == cplx(0.0) || !(g > 0.0)) throw NumericalError("singular kernel configuration");
  // m! Π_J |a|^{2(m−1)} Π_B conj(a)|a|^{2m} conj(a_d)|a_d|^{2m−2} / G^{m+1}
  cplx num = m == 0 ? cplx(1.0) / ad : std::conj(ad) * ipow(std::norm(ad), m - 1);
  for (std::size_t p = 0; p < s; ++p) {
    if (p == distinguished) continue;
    if (derivative_mask & (1u << p)) {
      if (m > 1) num *= ipow(std::norm(a[p]), m - 1);
    } else {
      num *= std::conj(a[p]) * ipow(std::norm(a[p]), m);
    }
  }
  return factorial(m) * num / ipow(g, m + 1);
}

ExponentChoice exponent_choice(int n, int m) {
  if (n < 2) throw ValidationError("exponent choice needs n >= 2");
  if (m < 0 || m > n - 1) throw ValidationError("exponent choice needs 0 <= m <= n-1");
  ExponentChoice c;
  c.n = n;
  c.m = m;
  c.k = 4 * (n - 1) * (m + 1);
  c.parts.assign(n, 1);
  for (int j = 0; j < m; ++j) c.parts[j] = 4 * (n - 1) + 1;
  const int partial = std::accumulate(c.parts.begin(), c.parts.end() - 1, 0);
  c.parts[n - 1] = c.k - partial;
  if (!satisfies_bound_system(c)) {
    throw ValidationError("exponent recipe violates the bound system");  // unreachable
  }
  return c;
}

bool satisfies_bound_system(const ExponentChoice& c) {
  if (c.n < 2 || static_cast<int>(c.parts.size()) != c.n || c.m < 0 || c.m > c.n - 1) return false;
  long long sum = 0;
  for (int v : c.parts) {
    if (v < 0) return false;
    sum += v;
  }
  if (sum != c.k) return false;
  const long long m1 = c.m + 1;
  for (int j = 0; j < c.m; ++j) {
    if (!(static_cast<long long>(c.parts[j]) * m1 > c.k)) return false;
  }
  for (int j = c.m; j < c.n - 1; ++j) {
    if (!(c.parts[j] > 0)) return false;
  }
  return 2 * m1 * c.parts[c.n - 1] > c.k;
}

std::pair<double, double> weighted_bound(std::span<const double> b, std::span<const int> parts, int k) {
  if (b.size() != parts.size()) throw ValidationError("weighted bound: size mismatch");
  long long sum = 0;
  for (int v : parts) {
    if (v < 0) throw ValidationError("weighted bound: negative exponent");
    sum += v;
  }
  if (sum != k) throw ValidationError("weighted bound: exponents must sum to k");
  double total = 0.0, rhs = 1.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j] < 0.0) throw ValidationError("weighted bound: negative base");
    total += b[j];
    rhs *= ipow(b[j], parts[j]);
  }
  return {ipow(total, k), rhs};
}

std::vector<Rational> hm_singular_exponents(const ExponentChoice& c) {
  if (c.n < 2 || static_cast<int>(c.parts.size()) != c.n || c.k <= 0) {
    throw ValidationError("malformed exponent choice");
  }
  std::vector<Rational> out(c.n);
  const long long m = c.m;
  for (int p = 0; p < c.n; ++p) {
    // (2(m+1)/k)(k − k_p) − numerator exponent
    long long num_exp;
    if (p < c.m) {
      num_exp = 2 * (m - 1);
    } else if (p < c.n - 1) {
      num_exp = 2 * m + 1;
    } else {
      num_exp = 2 * m - 1;
    }
    const long long top = 2 * (m + 1) * (c.k - c.parts[p]) - num_exp * c.k;
    const long long g = std::gcd(std::abs(top), static_cast<long long>(c.k));
    out[p] = Rational{top / g, c.k / g};
  }
  return out;
}

double hm_bound(std::span<const cplx> zeta, std::span<const cplx> z, std::size_t k,
                const IndexSet& I, std::span<const int> J, const ExponentChoice& choice) {
  const auto a = differences(zeta, z, I);
  const std::uint32_t mask = mask_of(I, k, J);
  const int s = static_cast<int>(I.size());
  const int m = static_cast<int>(J.size());
  if (choice.n != s || choice.m != m) throw ValidationError("exponent choice does not match (|I|, |J|)");
  // canonical order: J, then the remaining non-distinguished positions, then k
  std::vector<std::size_t> order;
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (mask & (1u << p)) order.push_back(p);
  }
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (p != k && !(mask & (1u << p))) order.push_back(p);
  }
  order.push_back(k);
  const auto exponents = hm_singular_exponents(choice);
  double log_h = 0.0;
  for (int c = 0; c < s; ++c) {
    const double mod = std::abs(a[order[c]]);
    if (!(mod > 0.0)) throw NumericalError("singular configuration in H_m");
    log_h -= exponents[c].value() * std::log(mod);
  }
  return factorial(m) * std::exp(log_h);
}

}  // namespace dbar
