#include "support.hpp"

using namespace lauricella;
using lauricella::testing::expect_error;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

void expect_rf(const RationalFunction& got, const std::string& want) {
  auto w = parse_expr(want, got.vars());
  EXPECT_TRUE(equal(got, w)) << "got " << print_expr(got) << "\nwant " << want;
}

/// Bindings for the big system E_D^{2n+1} with b_{n+i} = b_i and
/// b_{2n+1} = a - c + 1 imposed by substitution.
Bindings constrained(const VarTablePtr& vt, std::size_t n) {
  auto p = symbolic_bindings(vt, 2 * n + 1);
  for (std::size_t i = 0; i < n; ++i) p.b[n + i] = p.b[i];
  p.b[2 * n] = p.a - p.c + Rational(1);
  return p;
}

Bindings small(const Bindings& big, std::size_t n) {
  Bindings s{big.a, {}, big.c};
  for (std::size_t i = 0; i < n; ++i) s.b.push_back(big.b[i]);
  return s;
}

std::vector<Rational> random_point(std::mt19937_64& rng, std::size_t size) {
  std::uniform_int_distribution<long> num(-50, 50), den(3, 41);
  std::vector<Rational> pt;
  for (std::size_t v = 0; v < size; ++v) pt.push_back(q(num(rng), den(rng)));
  return pt;
}

}  // namespace

TEST(Iota, OneVariable) {
  auto vt = hypergeometric_table(3, 3);
  auto p = constrained(vt, 1);
  auto sys = pullback_iota(1, p);
  expect_rf(sys.p(0, 1, 1), "2*a*b1*x1^2/(1-x1^2)");
  EXPECT_TRUE(systems_equal(sys, build_script_e(1, small(p, 1)), Scope::Full));
}

TEST(Iota, TwoVariablesSymbolic) {
  auto vt = hypergeometric_table(5, 5);
  auto p = constrained(vt, 2);
  auto sys = pullback_iota(2, p);
  EXPECT_TRUE(systems_equal(sys, build_script_e(2, small(p, 2)), Scope::Full));
  EXPECT_TRUE(is_integrable(sys));
}

TEST(Iota, InvariantParameters) {
  auto vt = hypergeometric_table(9, 9);
  std::vector<Rational> b(9, q(1, 3));
  auto p = numeric_bindings(vt, q(5, 3), b, q(7, 3));
  auto sys = pullback_iota(4, p);
  EXPECT_TRUE(systems_equal(sys, build_script_e(4, small(p, 4)), Scope::Full));
}

TEST(Iota, NecessityReportsExactlyTheConstraints) {
  for (std::size_t n = 1; n <= 2; ++n) {
    auto vt = hypergeometric_table(2 * n + 1, 2 * n + 1);
    auto data = iota_pullback_data(n, symbolic_bindings(vt, 2 * n + 1));
    EXPECT_FALSE(data.closes());
    auto conds = closure_conditions(data.residuals);
    // The pairing constraint set: b_i - b_{i+n} and a - c - b_{2n+1} + 1.
    std::vector<Polynomial> prop;
    auto var = [&](const std::string& s) { return Polynomial::variable(vt, s); };
    for (std::size_t i = 1; i <= n; ++i) prop.push_back(var("b" + std::to_string(i)) - var("b" + std::to_string(i + n)));
    prop.push_back(var("a") - var("c") - var("b" + std::to_string(2 * n + 1)) + Polynomial::constant(vt, 1));
    auto both = conds;
    both.insert(both.end(), prop.begin(), prop.end());
    ASSERT_TRUE(affine_rank(conds).has_value());
    EXPECT_EQ(*affine_rank(conds), n + 1);
    EXPECT_EQ(*affine_rank(both), n + 1);
  }
}

TEST(Iota, ConditionFailureCarriesResidual) {
  auto vt = hypergeometric_table(5, 5);
  auto p = constrained(vt, 2);
  p.b[2] = RationalFunction::variable(vt, "b3");
  try {
    pullback_iota(2, p);
    FAIL() << "expected ConditionFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConditionFailure);
  }
  auto data = iota_pullback_data(2, p);
  // every nonzero residual vanishes once b3 = b1
  Assignment fix{{"b3", RationalFunction::variable(vt, "b1")}};
  bool any = false;
  for (const auto& r : data.residuals) {
    if (r.value.is_zero()) continue;
    any = true;
    EXPECT_TRUE(specialize(r.value, fix).is_zero()) << print_expr(r.value);
  }
  EXPECT_TRUE(any);
}

TEST(Iota, RandomViolationsLeaveNonzeroResidual) {
  std::mt19937_64 rng(11);
  auto vt = hypergeometric_table(5, 5);
  for (int t = 0; t < 10; ++t) {
    auto pt = random_point(rng, 8);
    std::vector<Rational> b(pt.begin() + 2, pt.begin() + 7);
    if (t % 2 == 0) {
      b[2] = b[0];
      b[3] = b[1];  // only the last condition is violated (generically)
    }
    auto data = iota_pullback_data(2, numeric_bindings(vt, pt[0], b, pt[1]));
    EXPECT_FALSE(data.closes());
  }
}

TEST(PowerSubst, IdentityAndCor3) {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto yt = hypergeometric_table(n, n, "y");
    auto xt = hypergeometric_table(n, n, "x");
    auto py = symbolic_bindings(yt, n);
    auto ed = build_ed(n, py);
    EXPECT_TRUE(systems_equal(dform_power_subst(ed, 1, yt), ed, Scope::Full));
    Bindings half{py.a / Rational(2), py.b, py.c - py.a / Rational(2)};
    auto got = dform_power_subst(build_ed(n, half), 2, xt);
    EXPECT_TRUE(systems_equal(got, build_script_e(n, symbolic_bindings(xt, n)), Scope::Full)) << n;
    if (n == 1) expect_rf(got.p(0, 1, 1), "4*(a/2)*b1*x1^2/(1-x1^2)");
  }
}

TEST(PForm, GaussEquation) {
  auto vt = hypergeometric_table(1, 1);
  auto p = symbolic_bindings(vt, 1);
  auto pf = dform_to_pform(build_ed(1, p));
  // u'' = a1 u' + a0 u  <=>  x(1-x)u'' + (c-(a+b+1)x)u' - ab u = 0
  expect_rf(pf.p(1, 1, 1), "((a+b1+1)*x1-c)/(x1*(1-x1))");
  expect_rf(pf.p(0, 1, 1), "a*b1/(x1*(1-x1))");
}

TEST(PForm, RoundTrip) {
  auto vt = hypergeometric_table(4, 4);
  auto se = build_script_e(4, numeric_bindings(vt, q(5, 3), {q(1, 3), q(1, 3), q(1, 3), q(1, 3)}, q(7, 3)));
  auto back = pform_to_dform(dform_to_pform(se));
  EXPECT_EQ(serialize(back), serialize(se));
  expect_error(Errc::WrongForm, [&] { pform_to_dform(se); });
  expect_error(Errc::WrongForm, [&] { dform_to_pform(dform_to_pform(se)); });
}

TEST(PForm, DiagonalShift) {
  auto [vt, p] = std::pair{hypergeometric_table(2, 2), symbolic_bindings(hypergeometric_table(2, 2), 2)};
  auto se = build_script_e(2, p);
  auto pf = dform_to_pform(se);
  auto x1 = RationalFunction::variable(vt, "x1");
  EXPECT_TRUE(equal(pf.p(1, 1, 1), (se.p(1, 1, 1) - Rational(1)) / x1));
}

TEST(PForm, FlatnessIsFormIndependent) {
  auto vt = hypergeometric_table(2, 2);
  auto e = build_ed(2, symbolic_bindings(vt, 2));
  EXPECT_TRUE(is_integrable(dform_to_pform(e)));
  e.set(0, 1, 1, e.p(0, 1, 1) + Rational(1));
  EXPECT_FALSE(is_integrable(dform_to_pform(e)));
}

TEST(ChangeCoordinates, Identity) {
  auto vt = hypergeometric_table(2, 2);
  auto pf = dform_to_pform(build_ed(2, numeric_bindings(vt, q(1, 2), {q(1, 3), q(1, 5)}, q(7, 4))));
  auto out = change_coordinates_pform(pf, RationalMap::identity(vt, pf.coords()));
  out.set_frame({});
  EXPECT_TRUE(systems_equal(out, pf, Scope::Full));
}

// x -> 1/x on the Gauss equation against the #-transform written in the new
// coordinate and pulled back to x.
TEST(ChangeCoordinates, InversionMatchesSharp) {
  auto vt = hypergeometric_table(1, 1);
  auto p = numeric_bindings(vt, q(1, 2), {q(1, 3)}, q(5, 4));
  auto ed = build_ed(1, p);
  auto x = RationalFunction::variable(vt, "x1");
  RationalMap inv{vt, {0}, {"y1"}, {x.inverse()}};
  auto moved = change_coordinates_pform(dform_to_pform(ed), inv);
  auto sharp = dform_to_pform(sharp_transform(ed));
  Assignment back{{"x1", x.inverse()}};
  for (std::size_t k = 0; k <= 1; ++k) EXPECT_TRUE(equal(moved.p(k, 1, 1), substitute(sharp.p(k, 1, 1), back))) << k;
}

TEST(ChangeCoordinates, SingularJacobian) {
  auto vt = hypergeometric_table(2, 2);
  auto pf = dform_to_pform(build_ed(2, numeric_bindings(vt, q(1, 2), {q(1, 3), q(1, 5)}, q(7, 4))));
  auto x1 = RationalFunction::variable(vt, "x1");
  RationalMap bad{vt, pf.coords(), {"z1", "z2"}, {x1, x1 * x1}};
  expect_error(Errc::SingularJacobian, [&] { change_coordinates_pform(pf, bad); });
}

// Two successive changes agree with the composite change at a random point.
TEST(ChangeCoordinates, CompositeAtPoint) {
  auto vt = hypergeometric_table(2, 2);
  auto pf = dform_to_pform(build_ed(2, numeric_bindings(vt, q(1, 2), {q(1, 3), q(1, 5)}, q(7, 4))));
  auto x1 = RationalFunction::variable(vt, "x1"), x2 = RationalFunction::variable(vt, "x2");
  // g: (x1, x2) -> (x1 + x2, x1*x2);  h: (u, v) -> (u, u - v) ; h o g = (x1 + x2, x1 + x2 - x1*x2)
  RationalMap g{vt, pf.coords(), {"u", "v"}, {x1 + x2, x1 * x2}};
  RationalMap hg{vt, pf.coords(), {"s", "t"}, {x1 + x2, x1 + x2 - x1 * x2}};
  auto viaG = change_coordinates_pform(pf, g);
  auto direct = change_coordinates_pform(pf, hg);
  // In (u, v): d_s = d_u + d_v, d_t = -d_v. So with V = (v, d_u, d_v):
  // d_s d_s = d_uu + 2 d_uv + d_vv, d_s d_t = -(d_uv + d_vv), d_t d_t = d_vv.
  std::vector<Rational> pt{q(1, 3), q(2, 7)};
  pt.resize(vt->size(), q(0));
  auto G = [&](std::size_t k, std::size_t i, std::size_t j) { return viaG.p(k, i, j).eval(pt); };
  auto H = [&](std::size_t k, std::size_t i, std::size_t j) { return direct.p(k, i, j).eval(pt); };
  // d_u = d_s + d_t and d_v = -d_t rewrite first-order data in the target basis
  auto to_st = [&](Rational cu, Rational cv) { return std::pair{cu, cu - cv}; };
  auto combo = [&](std::vector<std::pair<Rational, std::pair<std::size_t, std::size_t>>> terms, std::size_t k) {
    Rational s = 0;
    for (auto& [w, ij] : terms) s += w * G(k, ij.first, ij.second);
    return s;
  };
  auto check = [&](std::size_t i, std::size_t j, std::vector<std::pair<Rational, std::pair<std::size_t, std::size_t>>> terms) {
    auto [s1, t1] = to_st(combo(terms, 1), combo(terms, 2));
    EXPECT_EQ(s1, H(1, i, j));
    EXPECT_EQ(t1, H(2, i, j));
    EXPECT_EQ(combo(terms, 0), H(0, i, j));
  };
  check(1, 1, {{1, {1, 1}}, {2, {1, 2}}, {1, {2, 2}}});
  check(1, 2, {{-1, {1, 2}}, {-1, {2, 2}}});
  check(2, 2, {{1, {2, 2}}});
}

TEST(Regularity, TheoremSystemRegularAtZero) {
  auto vt = hypergeometric_table(4, 4);
  auto pf = dform_to_pform(build_script_e(4, numeric_bindings(vt, q(5, 3), {q(1, 3), q(1, 3), q(1, 3), q(1, 3)}, q(7, 3))));
  for (std::size_t j = 1; j <= 4; ++j) EXPECT_TRUE(regularity_check(pf, Polynomial::variable(vt, j - 1)));
  EXPECT_FALSE(regularity_check(pf, Polynomial::constant(vt, 1) - Polynomial::variable(vt, 0)));
}

TEST(Regularity, GenericParametersSingular) {
  auto vt = hypergeometric_table(4, 4);
  auto pf = dform_to_pform(build_script_e(4, shared_b_bindings(vt, 4)));
  auto r = regularity_check(pf, Polynomial::variable(vt, "x1"));
  EXPECT_FALSE(r);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->k, 1u);
}

TEST(Regularity, GaussSingularAtOne) {
  auto vt = hypergeometric_table(1, 1);
  auto pf = dform_to_pform(build_ed(1, symbolic_bindings(vt, 1)));
  EXPECT_FALSE(regularity_check(pf, Polynomial::constant(vt, 1) - Polynomial::variable(vt, "x1")));
}

// The condition along {x_j = 0}: q^j_jj restricted to x_j = 0 equals 1.
TEST(Regularity, DerivedConditionAlongZero) {
  auto vt = hypergeometric_table(4, 4);
  auto p = shared_b_bindings(vt, 4);
  auto se = build_script_e(4, p);
  Assignment at0{{"x1", RationalFunction(Polynomial(vt))}};
  auto restricted = substitute(se.p(1, 1, 1), at0);
  // 2 * 3b + a - 2c + 2
  auto b = RationalFunction::variable(vt, "b");
  EXPECT_TRUE(equal(restricted, b * Rational(6) + p.a - p.c * Rational(2) + Rational(2)));
  // at a = 5b, c = 4b + 1 the value is 1 exactly when b = 1/3
  Assignment summary{{"a", b * Rational(5)}, {"c", b * Rational(4) + Rational(1)}};
  EXPECT_TRUE(equal(specialize(restricted, summary), b * Rational(3)));
}

// In partial form the connection matrices of E_D^2 do not commute, so only
// the column-vector ordering D_jA_i - D_iA_j + A_iA_j - A_jA_i vanishes.
TEST(PForm, CurvatureOrderingMatters) {
  auto vt = hypergeometric_table(2, 2);
  auto pf = dform_to_pform(build_ed(2, numeric_bindings(vt, q(1, 2), {q(1, 3), q(1, 5)}, q(7, 4))));
  ASSERT_TRUE(is_integrable(pf));
  auto zero = RationalFunction(Polynomial(vt));
  std::vector<RfMatrix> A(3, RfMatrix(3, std::vector<RationalFunction>(3, zero)));
  for (std::size_t i = 1; i <= 2; ++i) {
    A[i][0][i] = RationalFunction::constant(vt, 1);
    for (std::size_t k = 1; k <= 2; ++k)
      for (std::size_t l = 0; l <= 2; ++l) A[i][k][l] = pf.p(l, i, k);
  }
  bool commutes = true;
  for (std::size_t r = 0; r <= 2; ++r)
    for (std::size_t c = 0; c <= 2; ++c) {
      RationalFunction v = zero;
      for (std::size_t l = 0; l <= 2; ++l) v += A[1][r][l] * A[2][l][c] - A[2][r][l] * A[1][l][c];
      commutes &= v.is_zero();
    }
  EXPECT_FALSE(commutes);
}
