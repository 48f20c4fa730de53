#include "support.hpp"

using namespace lauricella;
using lauricella::testing::expect_error;
using lauricella::testing::rf;

namespace {

VarTablePtr xy() { return VarTable::make({"x1", "x2"}, {"b1"}); }

Polynomial P(const std::string& s, const VarTablePtr& vt) {
  auto f = parse_expr(s, vt);
  EXPECT_TRUE(f.is_polynomial());
  return f.num();
}

}  // namespace

TEST(Polynomial, Arithmetic) {
  auto vt = xy();
  auto x1 = Polynomial::variable(vt, "x1");
  auto x2 = Polynomial::variable(vt, "x2");
  auto one = Polynomial::constant(vt, 1);
  EXPECT_TRUE((x1 + (-x1)).is_zero());
  EXPECT_EQ((x1 + one) * (x1 - one), x1 * x1 - one);
  EXPECT_EQ(exact_div(x1 * x1 - x2 * x2, x1 - x2), x1 + x2);
  expect_error(Errc::InexactDivision, [&] { exact_div(x1 * x1 + one, x1 - x2); });
}

TEST(Polynomial, TableMismatch) {
  auto a = VarTable::make({"x1"});
  auto b = VarTable::make({"y1"});
  expect_error(Errc::VarTableMismatch, [&] { (void)(Polynomial::variable(a, 0) + Polynomial::variable(b, 0)); });
  // Structurally equal tables are compatible.
  auto c = VarTable::make({"x1"});
  EXPECT_EQ(Polynomial::variable(a, 0) + Polynomial::variable(c, 0), Polynomial::variable(a, 0) * Rational(2));
}

TEST(Polynomial, Derivatives) {
  auto vt = xy();
  EXPECT_EQ(diff(P("x1^2*x2", vt), 0), P("2*x1*x2", vt));
  EXPECT_TRUE(diff(P("x1^2", vt), 1).is_zero());
  EXPECT_EQ(euler(P("x1^3", vt), 0), P("3*x1^3", vt));
  expect_error(Errc::NotACoordinate, [&] { diff(P("b1*x1", vt), 2); });
}

TEST(Polynomial, GradedLexOrder) {
  auto vt = xy();
  auto p = P("1 + x2 + x1 + x1*x2 + x2^2 + x1^2", vt);
  EXPECT_EQ(to_string(p), "x1^2 + x1*x2 + x2^2 + x1 + x2 + 1");
}

TEST(RationalFunction, FieldOperations) {
  auto vt = xy();
  auto f = rf("x1/(1 - x1)", vt);
  auto zero = RationalFunction::constant(vt, 0);
  EXPECT_TRUE(equal(f + zero, f));
  EXPECT_TRUE(equal(rf("1/(1-x1)", vt) * rf("1-x1", vt), RationalFunction::constant(vt, 1)));
  EXPECT_TRUE((rf("b1*x1/(x2-x1)", vt) + rf("b1*x1/(x1-x2)", vt)).is_zero());
  expect_error(Errc::DivisionByZeroFunction, [&] { f / zero; });
}

TEST(RationalFunction, EqualityByCrossMultiplication) {
  auto vt = xy();
  EXPECT_TRUE(equal(rf("(x1^2-1)/(x1-1)", vt), rf("x1+1", vt)));
  EXPECT_FALSE(equal(rf("x1/(1-x1)", vt), rf("x1/(1+x1)", vt)));
  // An unreduced quotient assembled by hand compares equal too.
  RationalFunction unreduced = RationalFunction::reduced(P("x1^2 - 1", vt), {{P("x1 - 1", vt), 1}});
  EXPECT_TRUE(equal(unreduced, rf("x1 + 1", vt)));
}

TEST(RationalFunction, Substitution) {
  auto big = VarTable::make({"x1", "x2", "x3"}, {"b1"});
  auto small = VarTable::make({"x1"}, {"b1"});
  // x3 -> -1 in b1 x1/(x3 - x1)
  auto f = rf("b1*x1/(x3 - x1)", big);
  auto g = substitute(f, VarTable::make({"x1", "x2"}, {"b1"}), {{"x3", rf("-1", VarTable::make({"x1", "x2"}, {"b1"}))}});
  EXPECT_TRUE(equal(g, rf("-b1*x1/(1 + x1)", VarTable::make({"x1", "x2"}, {"b1"}))));
  auto h = substitute(rf("x1/(1-x1)", small), {{"x1", rf("1/x1", small)}});
  EXPECT_TRUE(equal(h, rf("1/(x1-1)", small)));
  auto id = substitute(f, {{"x1", rf("x1", big)}});
  EXPECT_TRUE(equal(id, f));
  expect_error(Errc::SubstitutionPole, [&] { substitute(rf("1/(x1-x2)", big), {{"x2", rf("x1", big)}}); });
}

TEST(RationalFunction, Evaluation) {
  auto vt = VarTable::make({"x1", "x2"});
  EXPECT_EQ(rf("(x1+x2)/(x1-x2)", vt).eval({3, 1}), 2);
  auto z = VarTable::make({"z1", "z2", "z3", "z4"});
  Rational d1 = evaluate(rf("z1*z4 - z2*z3", z), {{"z1", Rational(4, 5)}, {"z2", Rational(7, 10)}, {"z3", Rational(5, 8)}, {"z4", Rational(1, 2)}});
  EXPECT_EQ(d1, Rational(-3, 80));
  expect_error(Errc::PoleAtPoint, [&] { rf("1/(1-x1)", vt).eval({1, 0}); });
}

TEST(RationalFunction, Reduce) {
  auto vt = VarTable::make({"x1"});
  RationalFunction f = RationalFunction::reduced(P("x1^2 - 1", vt), {{P("x1 - 1", vt), 1}, {P("x1 + 1", vt), 2}});
  auto r = reduce(f);
  EXPECT_EQ(to_string(r), "1/(x1 + 1)");
  EXPECT_EQ(to_string(reduce(r)), to_string(r));
}

TEST(Expression, ParsesSharedCoefficient) {
  auto vt = VarTable::make({"x1", "x2"}, {"b1"});
  auto f = parse_expr("b1*x1/(x2 - x1)", vt);
  EXPECT_TRUE(equal(f, rf("-b1*x1", vt) / rf("x1 - x2", vt)));
  EXPECT_TRUE(parse_expr("0", vt).is_zero());
  expect_error(Errc::DivisionByZeroFunction, [&] { parse_expr("x1/(x1 - x1)", vt); });
  expect_error(Errc::UnknownVariable, [&] { parse_expr("x1 + y", vt); });
  try {
    parse_expr("x1 + * x2", vt);
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  expect_error(Errc::SyntaxError, [&] { parse_expr("(x1 + x2", vt); });
  EXPECT_TRUE(equal(parse_expr("-x1^2", vt), rf("0 - x1*x1", vt)));
  EXPECT_TRUE(equal(parse_expr("3/2*x1", vt), rf("x1*3/2", vt)));
  EXPECT_TRUE(equal(parse_expr("x1^-2", vt), rf("1/(x1*x1)", vt)));
}

TEST(Expression, PrintParseIsBitExact) {
  auto vt = VarTable::make({"x1", "x2"}, {"a", "b1"});
  for (const char* s : {"a*b1*x1/(1 - x1)", "(b1*x1 + 3/7*x2)/((x1 - x2)^2*(x1 + 1))", "-x1/(x1^2 - x2^2)", "5/3"}) {
    auto f = parse_expr(s, vt);
    auto text = print_expr(f);
    auto g = parse_expr(text, vt);
    EXPECT_TRUE(equal(f, g)) << s;
    EXPECT_EQ(print_expr(g), text) << s;
  }
}

TEST(Properties, RingAxiomsLeibnizAndEvaluation) {
  auto vt = VarTable::make({"x1", "x2", "x3"}, {"a"});
  lauricella::testing::PolyGen gen{std::mt19937_64(7), vt};
  for (int i = 0; i < 200; ++i) {
    auto p = gen.poly(), q = gen.poly(), r = gen.poly();
    EXPECT_EQ((p * q) * r, p * (q * r));
    EXPECT_EQ(p * (q + r), p * q + p * r);
    EXPECT_EQ(p * q, q * p);
    EXPECT_EQ(diff(p * q, 0), p * diff(q, 0) + q * diff(p, 0));
    auto pt = gen.point();
    EXPECT_EQ((p * q).eval(pt), p.eval(pt) * q.eval(pt));
  }
}

TEST(Properties, RationalFunctionsRoundTripAndReduce) {
  auto vt = VarTable::make({"x1", "x2"}, {"b1"});
  lauricella::testing::PolyGen gen{std::mt19937_64(11), vt};
  auto x1 = rf("x1", vt), x2 = rf("x2", vt), b = rf("b1", vt);
  for (int i = 0; i < 100; ++i) {
    // Sums and products of the pole terms that appear in the Lauricella table.
    RationalFunction f = RationalFunction(gen.poly()) / rf("1 - x1", vt) +
                         b * x2 / (x1 - x2) * RationalFunction(gen.poly()) +
                         RationalFunction(gen.poly()) / (x1 + x2).pow(2);
    EXPECT_TRUE(equal(reduce(f), f));
    auto text = print_expr(f);
    EXPECT_TRUE(equal(parse_expr(text, vt), f));
    EXPECT_EQ(print_expr(parse_expr(text, vt)), text);
    auto g = f * f + f;
    EXPECT_TRUE(equal(g - f, f * f));
    EXPECT_TRUE(equal(diff(f * g, 0), f * diff(g, 0) + g * diff(f, 0)));
  }
}
