#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dbar/error.hpp"
#include "dbar/operator_ttilde.hpp"
#include "helpers.hpp"

using namespace dbar;

namespace {

constexpr double kPi = std::numbers::pi;

const QuadratureSuite kSuite = QuadratureSuite::uniform(2, 24, 32, 256);

cplx block_sum(const SolidBlock& b, const std::function<cplx(const cplx*)>& g) {
  std::vector<cplx> nodes, weights;
  cplx total(0.0);
  const int p = b.dimension();
  for (std::size_t c = 0; c < b.chunk_count(); ++c) {
    b.chunk(c, nodes, weights);
    for (std::size_t q = 0; q < weights.size(); ++q) total += weights[q] * g(&nodes[q * p]);
  }
  return total;
}

}  // namespace

TEST(SolidBlock, WeightsCarryTheProductMeasure) {
  const SolidBlock b({make_disk(0.0, 1.0), make_ellipse(0.0, 1.5, 0.5)}, {cplx(0.3, -0.2), cplx(0.4, 0.1)},
                     {FactorSize{16, 64, 64}, FactorSize{16, 128, 64}});
  // (2i)² · π · π·1.5·0.5
  EXPECT_NEAR(std::abs(block_sum(b, [](const cplx*) { return cplx(1.0); }) - cplx(-4.0 * kPi * kPi * 0.75)), 0,
              1e-8);
}

TEST(SolidBlock, JointSingularityIsIntegrated) {
  // ∫∫ dA dA /|ζ|³ over the unit bidisk = (2π)²(2 − √2) by polar reduction in (|ζ1|, |ζ2|)
  const SolidBlock b({make_disk(0.0, 1.0), make_disk(0.0, 1.0)}, {cplx(0.0), cplx(0.0)},
                     {FactorSize{24, 8, 8}, FactorSize{24, 8, 8}});
  const cplx got = block_sum(b, [](const cplx* z) {
    const double r2 = std::norm(z[0]) + std::norm(z[1]);
    return cplx(1.0 / (r2 * std::sqrt(r2)));
  });
  EXPECT_NEAR(std::abs(got - cplx(-4.0 * 4.0 * kPi * kPi * (2.0 - std::sqrt(2.0)))), 0, 1e-9);
}

TEST(SolidBlock, OneFactorIsThePolarRule) {
  const SolidBlock b({make_disk(0.0, 1.0)}, {cplx(0.2, 0.3)}, {FactorSize{16, 32, 64}});
  // −(1/2πi) ∫ dζ̄∧dζ/(ζ − z) = z̄ on the unit disk
  const cplx z(0.2, 0.3);
  const cplx got = block_sum(b, [&](const cplx* w) { return 1.0 / (w[0] - z); }) / cplx(0.0, -2.0 * kPi);
  EXPECT_NEAR(std::abs(got - std::conj(z)), 0, 1e-10);
}

TEST(SolidBlock, RequiresStarShapeAboutTheCentre) {
  const StarDomain lobes(0.0, 1.0, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0.6, 0}});
  EXPECT_THROW(SolidBlock({lobes, make_disk(0.0, 1.0)}, {cplx(1.4, 0.0), cplx(0.0)},
                          {FactorSize{8, 64, 64}, FactorSize{8, 64, 64}}),
               NumericalError);
}

TEST(TBracket, SingleIndexIsTheSliceTransform) {
  const ProductDomain d = fixtures::unit_polydisk(2);
  const OneForm f = manufacture_form(parse("conj(z1)^2*z2 + conj(z2)*exp(z1)", 2), 2);
  const EvalPoint z = {cplx(0.3, 0.3), cplx(-0.2, 0.6)};
  for (int k = 1; k <= 2; ++k) {
    EXPECT_NEAR(std::abs(t_bracket(d, IndexSet({k}), f, z, kSuite) - slice_transform(d, k, f[k - 1], z, kSuite)), 0,
                1e-10);
  }
  EXPECT_EQ(t_bracket(d, IndexSet({1, 2}), OneForm(2, {Expr(), Expr()}), z, kSuite), cplx(0.0));
}

TEST(TBracket, PairEqualsIteratedSliceOfMixedDerivative) {
  const ProductDomain d = fixtures::unit_polydisk(2);
  const OneForm f = manufacture_form(parse("conj(z1)^2*conj(z2) + sin(conj(z2))*z1", 2), 2);
  const QuadratureSuite fine = QuadratureSuite::uniform(2, 32, 48, 512);
  for (const EvalPoint& z : fixtures::polydisk_points(2, 3, 0.05, 6)) {
    const cplx bracket = t_bracket(d, IndexSet({1, 2}), f, z, fine);
    const cplx oracle = iterated_slice(d, IndexSet({1, 2}), d_bar(f[1], 1), z, fine);
    EXPECT_NEAR(std::abs(bracket - oracle), 0, 1e-6);
  }
}

TEST(SolveTTilde, ManufacturedSolutionAndExplicitFormula) {
  const ProductDomain d = fixtures::unit_polydisk(2);
  const OneForm f = manufacture_form(parse("conj(z1)*conj(z2)", 2), 2);
  for (const EvalPoint& z : fixtures::polydisk_points(2, 4, 0.05, 12)) {
    const SolveEntry e = solve_ttilde(d, f, z, kSuite);
    EXPECT_NEAR(std::abs(e.value - std::conj(z[0]) * std::conj(z[1])), 0, 1e-3);
    const cplx explicit_value = ttilde_dim2_explicit(d, f, z, kSuite);
    EXPECT_LE(std::abs(e.value - explicit_value), 1e-9 * std::abs(explicit_value));
  }
  EXPECT_EQ(ttilde_dim2_explicit(d, OneForm(2, {Expr(), Expr()}), {0.1, 0.1}, kSuite), cplx(0.0));
  EXPECT_THROW(ttilde_dim2_explicit(fixtures::unit_polydisk(1), OneForm(1, {Expr()}), {0.1}, kSuite),
               ValidationError);
}

TEST(SolveTTilde, AgreesWithTOnClosedCatalog) {
  const ProductDomain d({make_disk(0.0, 1.0), make_ellipse({0.1, 0.0}, 1.3, 0.9)});
  const QuadratureSuite s = QuadratureSuite::uniform(2, 24, 48, 384);
  const SamplePlan plan = sample_plan(d, 2, 0.05, 2);
  for (const char* u : {"conj(z1)^2*conj(z2)", "exp(conj(z1))*conj(z2) + z1*conj(z2)^2"}) {
    const OneForm f = manufacture_form(parse(u, 2), 2);
    for (const EvalPoint& z : plan.points) {
      EXPECT_NEAR(std::abs(solve_ttilde(d, f, z, s).value - solve_t(d, f, z, s).value), 0, 1e-3) << u;
    }
  }
}

TEST(SolveTTilde, NonClosedFormIsFlagged) {
  const ProductDomain d = fixtures::unit_polydisk(2);
  const OneForm f(2, {parse("conj(z2)", 2), Expr()});
  const SamplePlan plan = sample_plan(d, 2, 0.05, 1);
  const SolveReport r = solve_ttilde(d, f, plan, QuadratureSuite::uniform(2, 12, 16, 64), 1);
  EXPECT_FALSE(r.closed);
  for (const SolveEntry& e : r.entries) EXPECT_TRUE(std::isfinite(std::abs(e.value)));
}

TEST(SolveTTilde, Linearity) {
  const ProductDomain d = fixtures::unit_polydisk(2);
  const QuadratureSuite s = QuadratureSuite::uniform(2, 12, 16, 128);
  const OneForm f = manufacture_form(parse("conj(z1)*conj(z2)^2", 2), 2);
  const OneForm g(2, {parse("z2*conj(z1)", 2), parse("exp(z1)", 2)});
  const cplx alpha(1.5, 0.5), beta(-0.25, 2.0);
  const EvalPoint z = {cplx(0.1, 0.5), cplx(-0.4, -0.2)};
  const cplx lhs = solve_ttilde(d, f.combined(alpha, g, beta), z, s).value;
  const cplx rhs = alpha * solve_ttilde(d, f, z, s).value + beta * solve_ttilde(d, g, z, s).value;
  EXPECT_LE(std::abs(lhs - rhs), 1e-8 * std::abs(lhs));
}

TEST(SolveTTilde, OneVariable) {
  const ProductDomain d = fixtures::unit_polydisk(1);
  const QuadratureSuite s = QuadratureSuite::uniform(1, 16, 32);
  const OneForm f(1, {parse("conj(z1)*z1", 1)});
  const EvalPoint z = {cplx(0.3, -0.1)};
  EXPECT_EQ(solve_ttilde(d, f, z, s).value, slice_transform(d, 1, f[0], z, s));
}

TEST(SolveTTilde, ThreeVariablesCoarse) {
  const ProductDomain d = fixtures::unit_polydisk(3);
  const OneForm f = manufacture_form(parse("conj(z1)*conj(z2)*conj(z3)", 3), 3);
  const QuadratureSuite s = QuadratureSuite::uniform(3, 8, 12, 96);
  const EvalPoint z = {cplx(0.2, 0.1), cplx(-0.1, 0.3), cplx(0.25, -0.2)};
  const SolveEntry e = solve_ttilde(d, f, z, s);
  EXPECT_EQ(e.terms.size(), 7u);
  EXPECT_NEAR(std::abs(e.value - std::conj(z[0]) * std::conj(z[1]) * std::conj(z[2])), 0, 5e-2);
}

TEST(SolveTTilde, PointsOutsideTheMarginAreRejected) {
  const ProductDomain d = fixtures::unit_polydisk(2);
  const OneForm f = manufacture_form(parse("conj(z1)*conj(z2)", 2), 2);
  EXPECT_THROW(solve_ttilde(d, f, {cplx(0.9999, 0.0), cplx(0.0)}, kSuite), NumericalError);
  EXPECT_THROW(solve_ttilde(d, f, {cplx(0.1)}, kSuite), ValidationError);
}
