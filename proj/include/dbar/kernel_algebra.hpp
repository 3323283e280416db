#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace dbar {

using cplx = std::complex<double>;

/// Strictly increasing, non-empty list of 1-based variable indices.
class IndexSet {
 public:
  explicit IndexSet(std::vector<int> indices);

  std::size_t size() const noexcept { return indices_.size(); }
  int operator[](std::size_t p) const { return indices_[p]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  int max() const noexcept { return indices_.back(); }
  bool contains(int j) const;
  /// Position of j inside the set, or -1.
  int position(int j) const;
  const std::vector<int>& indices() const noexcept { return indices_; }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<int> indices_;
};

/// All s-element subsets of {1..n} in lexicographic order.
std::vector<IndexSet> index_sets(int n, int s);

/// G(a) = Σ_k Π_{l≠k} |a_l|²; the empty product is 1, so G = 1 for one entry.
double big_g(std::span<const cplx> a);

/// Terms t_k = Π_{l≠k} conj(a_l) / (a_k G) with Σ_k t_k = 1/(a_1⋯a_m).
std::vector<cplx> decompose_inverse_product(std::span<const cplx> a);

/// g_z^{k, I}(ζ) with a_l = ζ_{i_l} − z_{i_l}; `k` is the 0-based position of the
/// distinguished index inside I. ζ and z are full n-vectors.
cplx kernel_g(std::span<const cplx> zeta, std::span<const cplx> z, std::size_t k, const IndexSet& I);

/// ∂^m g_z^{k,I} / ∂ζ̄_{j1}…∂ζ̄_{jm} in closed form, J = {j1..jm} ⊂ I∖{i_k}.
cplx kernel_g_derivative(std::span<const cplx> zeta, std::span<const cplx> z, std::size_t k,
                         const IndexSet& I, std::span<const int> J);

/// Same closed form on the differences a_p = ζ_{i_p} − z_{i_p} directly.
/// `distinguished` is a position in [0, s); bit p of `derivative_mask` marks
/// position p as differentiated. Returns NaN-free values or throws on a
/// singular configuration.
cplx kernel_derivative_from_differences(std::span<const cplx> a, std::size_t distinguished,
                                        std::uint32_t derivative_mask);

/// Integer exponents (k; k_1..k_n) for the weighted product bound at order m.
struct ExponentChoice {
  int n = 0;
  int m = 0;
  int k = 0;
  std::vector<int> parts;
};

/// k = 4(n−1)(m+1); k_j = 4(n−1)+1 (j ≤ m); k_j = 1 (m < j < n); k_n = k − Σ.
ExponentChoice exponent_choice(int n, int m);

/// k_j(m+1) > k for j ≤ m; k_j > 0 for m < j < n; 2(m+1)k_n > k; Σ k_j = k.
bool satisfies_bound_system(const ExponentChoice& choice);

/// (Σ b)^k and Π b_j^{k_j}.
std::pair<double, double> weighted_bound(std::span<const double> b, std::span<const int> parts, int k);

/// Exact rational p/q.
struct Rational {
  long long num = 0;
  long long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
};

/// Singular exponent of |ζ_p − z_p| in H_m for canonical positions p = 1..n:
/// solid positions 1..m and n must stay below 2, boundary positions m+1..n−1
/// below 1 for the bound to be integrable.
std::vector<Rational> hm_singular_exponents(const ExponentChoice& choice);

/// m!·H_m, the majorant of |∂^m g_z^{k,I} / ∂ζ̄_J| obtained from the bound
/// G^{m+1} ≥ Π b_j^{k_j(m+1)/k}. Positions are mapped to canonical order
/// (J first, then the boundary indices, then the distinguished one).
double hm_bound(std::span<const cplx> zeta, std::span<const cplx> z, std::size_t k,
                const IndexSet& I, std::span<const int> J, const ExponentChoice& choice);

}  // namespace dbar
