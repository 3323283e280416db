#include <gtest/gtest.h>

#include "dbar/error.hpp"
#include "dbar/forms.hpp"
#include "helpers.hpp"

using namespace dbar;

TEST(SamplePlan, DeterministicAndInside) {
  const ProductDomain d({make_disk(0.0, 1.0), make_ellipse({1.0, 0.0}, 2.0, 0.5)});
  const SamplePlan a = sample_plan(d, 50, 0.05, 42);
  const SamplePlan b = sample_plan(d, 50, 0.05, 42);
  const SamplePlan c = sample_plan(d, 50, 0.05, 43);
  ASSERT_EQ(a.points.size(), 50u);
  EXPECT_EQ(a.points, b.points);
  EXPECT_NE(a.points, c.points);
  for (const EvalPoint& z : a.points) EXPECT_TRUE(d.contains(z, 0.05));
}

TEST(SamplePlan, ExplicitPointsAreValidated) {
  const ProductDomain d = fixtures::unit_polydisk(2);
  EXPECT_NO_THROW(explicit_plan(d, {{0.1, 0.2}}, 0.05));
  EXPECT_THROW(explicit_plan(d, {{0.99, 0.2}}, 0.05), ValidationError);
  EXPECT_THROW(explicit_plan(d, {{0.1}}, 0.05), ValidationError);
}

TEST(ManufactureForm, ComponentsAreWirtingerDerivatives) {
  const OneForm f = manufacture_form(parse("conj(z1)^2*conj(z2) + z1*z2", 2), 2);
  const EvalPoint z = {cplx(0.3, 0.4), cplx(-0.5, 0.1)};
  EXPECT_NEAR(std::abs(eval(f[0], z) - 2.0 * std::conj(z[0]) * std::conj(z[1])), 0, 1e-15);
  EXPECT_NEAR(std::abs(eval(f[1], z) - std::conj(z[0]) * std::conj(z[0])), 0, 1e-15);
  EXPECT_THROW(manufacture_form(parse("z3", 3), 2), ValidationError);
}

TEST(Closedness, ManufacturedFormsAreClosed) {
  const ProductDomain d = fixtures::unit_polydisk(3);
  const SamplePlan plan = sample_plan(d, 20, 0.05, 1);
  const OneForm f = manufacture_form(parse("exp(conj(z1)*conj(z2))*sin(conj(z3)) + conj(z2)^2*z3", 3), 3);
  EXPECT_LE(closedness_residual(f, plan), 1e-13);
  // (conj z2, 0): ∂̄1 f2 − ∂̄2 f1 = −1 everywhere
  const OneForm g(2, {parse("conj(z2)", 2), Expr()});
  EXPECT_NEAR(closedness_residual(g, sample_plan(fixtures::unit_polydisk(2), 5, 0.05, 1)), 1.0, 1e-15);
}

TEST(SupNorm, MaxOverThePlan) {
  const SamplePlan plan{{{cplx(0.5, 0.0), cplx(0.1)}, {cplx(0.0, -0.8), cplx(0.2)}}};
  EXPECT_DOUBLE_EQ(sup_norm(parse("conj(z1)", 2), plan), 0.8);
  const OneForm f(2, {parse("z1", 2), parse("3*z2", 2)});
  EXPECT_NEAR(sup_norm(f, plan), 0.8, 1e-15);
  EXPECT_NEAR(sup_norm(f.scaled(2.0), plan), 1.6, 1e-15);
}

TEST(OneForm, ArityChecks) {
  EXPECT_THROW(OneForm(2, {parse("z1", 2)}), ValidationError);
  EXPECT_THROW(OneForm(1, {parse("z2", 2)}), ValidationError);
  EXPECT_THROW(ProductDomain({}), ValidationError);
}
