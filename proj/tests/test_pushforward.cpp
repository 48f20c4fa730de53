#include "support.hpp"

namespace {

using namespace lauricella;
using namespace lauricella::cover;
using lauricella::testing::expect_error;

const PdeSystem& invariant_pushforward_system() {
  static const PdeSystem s = pushforward(invariant_script_e());
  return s;
}

// f_* of the D-form normal gauge, before the final z-frame gauge.
const PdeSystem& dnormal_raw() {
  static const PdeSystem s = change_coordinates_pform(dform_to_pform(recover_p0(normal_form(invariant_script_e()))), as_map());
  return s;
}

TEST(Pushforward, StructuralSuitePasses) {
  auto r = structural_suite(invariant_pushforward_system(), 20, 42);
  EXPECT_TRUE(r.not_invariant.empty()) << r.not_invariant.front().k << r.not_invariant.front().i << r.not_invariant.front().j;
  EXPECT_TRUE(r.stray_denominators.empty()) << r.stray_denominators.front();
  EXPECT_EQ(r.sampled_points, 20);
  EXPECT_EQ(r.flat_points, 20);
  EXPECT_TRUE(r.passes());
}

TEST(Pushforward, AllowedDenominatorsAreTheTwentyLinearForms) {
  auto allowed = allowed_denominators();
  EXPECT_EQ(allowed.size(), 20u);
  EXPECT_TRUE(allowed.count(to_string(parse_expr("x1+1", x_table()).num())));
  EXPECT_FALSE(allowed.count(to_string(parse_expr("x1", x_table()).num())));
}

TEST(Pushforward, IndependentOfTheInputGauge) {
  auto via_normal = gauge_normal_form(dnormal_raw());
  EXPECT_TRUE(systems_equal(via_normal, invariant_pushforward_system(), Scope::Full));
}

TEST(Pushforward, FrameGaugeIsNeeded) {
  // Without the final trace-free gauge the coefficients still depend on the
  // chosen gauge of the source and are not functions of z.
  auto raw = change_coordinates_pform(dform_to_pform(invariant_script_e()), as_map());
  auto r = structural_suite(raw, 3, 1);
  EXPECT_FALSE(r.not_invariant.empty());
  EXPECT_EQ(r.flat_points, 3);

  auto s = structural_suite(dnormal_raw(), 3, 1);
  EXPECT_TRUE(s.not_invariant.empty());
  EXPECT_FALSE(s.stray_denominators.empty());
}

TEST(Pushforward, OffTheInvariantLineIsNotInvariant) {
  const Rational b(1, 3);
  auto e = build_script_e(4, numeric_bindings(x_table(), Rational(5, 3), {b, b, b, b}, 2));
  auto r = structural_suite(pushforward(e), 2, 3);
  EXPECT_FALSE(r.not_invariant.empty());
  EXPECT_FALSE(r.passes());
}

TEST(CompareExternal, SelfRoundTripAgreesExactly) {
  auto text = serialize(invariant_pushforward_system());
  auto r = compare_external(text, invariant_pushforward_system(), 10, 5);
  EXPECT_EQ(r.coefficients.size(), 50u);
  EXPECT_TRUE(r.agrees());
  for (const auto& c : r.coefficients) {
    EXPECT_EQ(c.points, 10);
    EXPECT_EQ(c.symbolic, std::optional<bool>(true));
  }
}

TEST(CompareExternal, PerturbationIsLocalized) {
  auto sys = invariant_pushforward_system();
  sys.set(2, 1, 3, sys.p(2, 1, 3) + Rational(1));
  auto r = compare_external(serialize(sys), invariant_pushforward_system(), 5, 5);
  auto bad = r.disagreements();
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0].k, 2u);
  EXPECT_EQ(bad[0].i, 1u);
  EXPECT_EQ(bad[0].j, 3u);
}

TEST(CompareExternal, ZCoefficientsArePulledBack) {
  PdeSystem ref("ref", Form::Partial, x_table(), x_table()->coordinates(), true);
  ref.set(0, 1, 2, components()[0] * components()[3]);
  ref.set(3, 4, 4, Rational(1) - components()[2]);
  std::string text = "system ext n=4 form=partial\np[0][1][2] = z1*z4\np[3][4][4] = 1-z3\n";
  EXPECT_TRUE(compare_external(text, ref, 5, 9).agrees());
  text = "system ext n=4 form=partial\np[0][1][2] = z1*z4\np[3][4][4] = 1-z2\n";
  EXPECT_FALSE(compare_external(text, ref, 5, 9).agrees());
}

TEST(CompareExternal, Errors) {
  PdeSystem ref("ref", Form::Partial, x_table(), x_table()->coordinates(), true);
  expect_error(Errc::ParseError, [&] { compare_external("nonsense\n", ref, 1, 1); });
  expect_error(Errc::ShapeMismatch, [&] { compare_external("system s n=3 form=partial\np[0][1][1] = z1\n", ref, 1, 1); });
  expect_error(Errc::ShapeMismatch, [&] { compare_external("system s n=4 form=D\np[0][1][1] = z1\n", ref, 1, 1); });
}

}  // namespace
