#include <gtest/gtest.h>

#include <cmath>

#include "dbar/cauchy1d.hpp"
#include "dbar/error.hpp"
#include "helpers.hpp"

using namespace dbar;

namespace {

std::vector<cplx> disk_points(int count, double radius, std::uint64_t seed) {
  std::vector<cplx> out;
  for (const EvalPoint& z : fixtures::polydisk_points(1, count, 1.0 - radius, seed)) out.push_back(z[0]);
  return out;
}

}  // namespace

TEST(CauchyTransform, UnitDiskClosedForms) {
  const StarDomain d = make_disk(0.0, 1.0);
  for (const cplx& z : disk_points(25, 0.9, 3)) {
    EXPECT_NEAR(std::abs(cauchy_transform(d, [](cplx) { return cplx(1.0); }, z, {64, 64}) - std::conj(z)), 0, 1e-10);
    // T(conj ζ) = z̄²/2 and T(ζ) = |z|² − 1 (both solve ∂̄u = f and vanish suitably)
    EXPECT_NEAR(std::abs(cauchy_transform(d, [](cplx w) { return std::conj(w); }, z, {64, 64}) -
                         std::conj(z) * std::conj(z) / 2.0),
                0, 1e-10);
    EXPECT_NEAR(std::abs(cauchy_transform(d, [](cplx w) { return w; }, z, {64, 64}) - (std::norm(z) - 1.0)), 0,
                1e-10);
  }
}

TEST(CauchyTransform, ZeroDatum) {
  EXPECT_EQ(cauchy_transform(make_disk(0, 1), [](cplx) { return cplx(0.0); }, {0.2, 0.1}, {8, 8}), cplx(0.0));
}

TEST(CauchyTransform, PompeiuOnEllipse) {
  // T(1)(z) = z̄ − (1/2πi)∮ conj(ζ)/(ζ − z) dζ, the boundary term on a fine rule
  const StarDomain e = make_ellipse({0.2, -0.1}, 1.5, 0.8);
  const BoundaryRule fine = boundary_rule(e, 4096);
  for (const cplx& z : {cplx(0.2, -0.1), cplx(0.9, 0.3), cplx(-0.8, -0.5)}) {
    const cplx oracle = std::conj(z) - boundary_cauchy(e, [](cplx w) { return std::conj(w); }, z, fine);
    EXPECT_NEAR(std::abs(cauchy_transform(e, [](cplx) { return cplx(1.0); }, z, {64, 128}) - oracle), 0, 1e-8);
  }
}

TEST(CauchyTransform, SubtractionRouteAgreesCoarsely) {
  const StarDomain d = make_disk(0.0, 1.0);
  const AreaRule area = area_rule(d, 128, 128);
  const BoundaryRule bnd = boundary_rule(d, 256);
  const auto f = [](cplx w) { return std::exp(std::conj(w)) * w; };
  for (const cplx& z : disk_points(5, 0.8, 8)) {
    const cplx fast = cauchy_transform(d, f, z, {64, 64});
    EXPECT_NEAR(std::abs(cauchy_transform_subtracted(d, f, z, area, bnd) - fast), 0, 5e-3);
  }
}

TEST(BoundaryCauchy, ResiduesCancelForConjugate) {
  // on |ζ| = 1, conj ζ = 1/ζ: residues at 0 and z cancel
  const StarDomain d = make_disk(0.0, 1.0);
  EXPECT_NEAR(std::abs(boundary_cauchy(d, [](cplx w) { return std::conj(w); }, {0, 0.4}, boundary_rule(d, 256))), 0,
              1e-8);
  // holomorphic data is reproduced
  const cplx z(0.3, 0.2);
  EXPECT_NEAR(std::abs(boundary_cauchy(d, [](cplx w) { return w * w * w; }, z, boundary_rule(d, 256)) - z * z * z), 0,
              1e-12);
}

TEST(SingularMoment, DiskValue) {
  // ∫_D dζ̄∧dζ/(ζ − z) = 2πi(0 − z̄) on the unit disk
  const StarDomain d = make_disk(0.0, 1.0);
  const cplx z(0.1, -0.6);
  EXPECT_NEAR(std::abs(singular_moment(d, z, boundary_rule(d, 256)) - cplx(0, 2 * M_PI) * (-std::conj(z))), 0,
              1e-10);
}

TEST(CauchyTransform, RejectsPointsOutsideTheMargin) {
  const StarDomain d = make_disk(0.0, 1.0);
  const auto one = [](cplx) { return cplx(1.0); };
  EXPECT_THROW(cauchy_transform(d, one, {0.9995, 0}, {8, 8}), NumericalError);
  EXPECT_THROW(cauchy_transform(d, one, {1.5, 0}, {8, 8}), NumericalError);
  EXPECT_NO_THROW(cauchy_transform(d, one, {0.99, 0}, {8, 8}));
  EXPECT_THROW(cauchy_transform(d, one, {0.2, 0}, {1, 8}), ValidationError);
}

TEST(CauchyTransform, DerivativeInZBarRecoversDatum) {
  // ∂̄ T f = f, by central differences on the computed transform
  const StarDomain d = make_disk({0.5, 0.5}, 1.0);
  const auto f = [](cplx w) { return std::sin(w) + std::conj(w) * w; };
  const cplx z(0.7, 0.1);
  const double h = 1e-4;
  const auto T = [&](cplx p) { return cauchy_transform(d, f, p, {48, 64}); };
  const cplx dbar = 0.5 * ((T(z + h) - T(z - h)) / (2 * h) + cplx(0, 1) * (T(z + cplx(0, h)) - T(z - cplx(0, h))) / (2 * h));
  EXPECT_NEAR(std::abs(dbar - f(z)), 0, 1e-6);
}
