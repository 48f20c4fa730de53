#pragma once

#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lauricella/transform.hpp"

namespace lauricella::cover {

using Point = std::array<Rational, 4>;

inline const VarTablePtr& x_table() {
  static const VarTablePtr vt = VarTable::make(indexed_names("x", 4));
  return vt;
}

inline const VarTablePtr& z_table() {
  static const VarTablePtr vt = VarTable::make(indexed_names("z", 4));
  return vt;
}

/// z1..z4 and x2 as coordinates, for the printed inversion formulas. The
/// extra coordinate "z" stands for the incomplete letter in the printed x3.
inline const VarTablePtr& inversion_table() {
  static const VarTablePtr vt = VarTable::make({"z1", "z2", "z3", "z4", "x2", "z"});
  return vt;
}

namespace printed {

inline const char* const components[4] = {
    "(x3+x1)*(x2-1)/((x3-1)*(x2+x1))",
    "(x4+x1)*(x2-1)/((x4-1)*(x2+x1))",
    "(x3+1)*(x2-x1)/((x3-x1)*(x2+1))",
    "(x4+1)*(x2-x1)/((x4-x1)*(x2+1))",
};

inline const char* const jacobian =
    "(x1-1)*(-x2+x1)*(x2-x4)*(x3-x4)*(x3-x2)*(x1+1)^3*(x2-1)"
    "/((x3-x1)^2*(x2+1)^3*(x4-1)^2*(x2+x1)^3*(x3-1)^2*(-x4+x1)^2)";

inline const char* const D1 = "z1*z4-z2*z3";
inline const char* const D2 = "z1*z4-z2*z3-z4+z2+z3-z1";
inline const char* const Q = "-z2*z3*z1-z2*z3*z4+z2*z3+z1*z4*z2+z1*z4*z3-z1*z4";

/// Signed factorization of the pulled-back divisor: constant, then
/// (factor, exponent) pairs.
inline const Rational pullback_constant{-1};
inline const std::vector<std::pair<const char*, int>> pullback_factors = {
    {"x3+x1", 1},  {"x2-1", 5},  {"x4+x1", 1},  {"x3+1", 1},  {"-x2+x1", 5},   {"x4+1", 1},  {"x1+1", 13},
    {"x3-x2", 5},  {"x2-x4", 5}, {"x3-x4", 5},  {"x1-1", 5},  {"x3+x2", 1},    {"x2+x4", 1}, {"x3+x4", 1},
    {"x3-1", -7},  {"x2+x1", -11}, {"x4-1", -7}, {"x3-x1", -7}, {"x2+1", -11}, {"-x4+x1", -7},
};

inline const char* const C0 =
    "-(-z2*z4+z3*z2*z4-z3+z1*z3+z4-z1*z3*z4)*(z3+z2-z4-z1-z1*z3*z4+z1*z3*z2-z2*z4*z1+z3*z2*z4-2*z2*z3+2*z1*z4)";
inline const char* const C1 =
    "-6*z1*z3*z4+4*z2^2*z4*z1-4*z2^2*z1*z3+4*z3^2*z2^2*z1+4*z4^2*z1^2*z2-4*z1^2*z2*z4+4*z1^2*z3*z2-2*z1*z3*z2"
    "-2*z2*z4*z1-6*z3*z2*z4-6*z2*z4^2*z1*z3+16*z2*z4*z1*z3-2*z1^2*z3*z4^2*z2-2*z3^2*z1*z2-2*z1^2*z3^2*z2"
    "-2*z4^2*z2*z1-2*z1^2*z3*z4+2*z1^2*z3^2*z4-2*z3^2*z2^2*z4^2-2*z3*z2^2*z4-2*z2^2*z4^2*z1+2*z2^2*z4^2*z3"
    "+4*z3^2*z2^2*z4-2*z1^2*z3^2*z4^2+4*z1^2*z3*z4^2-2*z3^2-2*z4^2-4*z3^2*z2^2+2*z1*z3-2*z2*z3+4*z4*z3"
    "+4*z4*z1^2-4*z4^2*z1^2+2*z2*z4+4*z1*z4^2-2*z1*z4+2*z1*z3^2-2*z1^2*z3+4*z3^2*z2-2*z2^2*z4+2*z2*z4^2"
    "+2*z1^2*z3^2*z4*z2+4*z3*z2^2+2*z3*z2^2*z4^2*z1-2*z3^2*z2^2*z4*z1-2*z2^2*z4*z1*z3+4*z1*z3^2*z4^2*z2"
    "-2*z1^2*z3*z2*z4-6*z1*z3^2*z2*z4";

inline const char* const discriminant = "16*(z1-1)*(z2-1)*(z3-1)*(z4-1)*(z1-z2)*(z3-z4)*D2*Q";

inline const char* const x1 =
    "-x2*(-z1*z3+z1*z3*z2+z2*z4-z2*z4*z1-z2+z1)/(-z3*x2+z3+z2+z4*x2-z4-z1-z1*z3*z4-z1*z3*z4*x2+z1*z3*z2"
    "-z2*z4*z1+z3*z2*z4*x2+z3*z2*z4+x2*z1*z3-2*z2*z3-x2*z2*z4+2*z1*z4)";
inline const char* const x3 =
    "-x2*(1-2*z1+z1*z3-x2+x2*z1*z3)*(z3+z2-z4-z1-z1*z3*z4+z1*z3*z2-z2*z4*z1+z3*z2*z4-2*z2*z3+2*z1*z4)"
    "/(2*x2*z3^2*z1*z4+z3+z2-z4-z1-6*z1*z3*z4+2*z1*z3*z2-z2*z4*z1+z3*z2*z4+2*z2*z4*z1*z3-4*z3^2*z1*z2"
    "+z1^2*z3^2*z2+2*z1^2*z3*z4-z1^2*z3^2*z4-2*z3^2+2*z1*z3-4*z2*z3+2*z4*z3+2*z1*z4+z1*z3^2-z1^2*z3"
    "+4*z3^2*z2-z1^2*z3*z2*z4+z1*z3^2*z2*z4-2*x2*z3^2*z2*z4-2*x2*z1^2-2*x2*z1^2*z3*z2+2*x2*z3^2"
    "+3*x2*z1^2*z3-x2*z2+x2*z1-3*x2*z2*z4*z1+x2*z1*z3^2*z2*z4-2*x2*z4*z3-2*z3^2*z2*z+2*z1*z3^2*z4"
    "-z3*x2+z4*x2+2*x2*z1*z2+2*x2*z1^2*z2*z4+3*z3*z2*z4*x2-x2*z1^2*z3*z2*z4-x2*z1^2*z3^2*z4"
    "-3*x2*z1*z3^2+x2*z1^2*z3^2*z2)";

}  // namespace printed

/// The four components of f over x_table().
inline const std::vector<RationalFunction>& components() {
  static const std::vector<RationalFunction> c = [] {
    std::vector<RationalFunction> out;
    for (auto s : printed::components) out.push_back(parse_expr(s, x_table()));
    return out;
  }();
  return c;
}

inline RationalMap as_map() {
  const auto& vt = x_table();
  return RationalMap{vt, vt->coordinates(), indexed_names("z", 4), components()};
}

inline std::vector<Rational> to_vector(const Point& p) { return {p.begin(), p.end()}; }

inline Point apply_f(const Point& x) {
  Point z;
  const auto pt = to_vector(x);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& f = components()[i];
    for (const auto& d : f.den_factors())
      if (d.poly.eval(pt) == 0) throw Error(Errc::DenominatorVanishes, "denominator factor " + to_string(d.poly) + " vanishes");
    z[i] = f.eval(pt);
  }
  return z;
}

/// x_i not in {0, 1, -1} and x_i != +-x_j.
inline bool valid_xpoint(const Point& x) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (x[i] == 0 || x[i] == 1 || x[i] == -1) return false;
    for (std::size_t j = i + 1; j < 4; ++j)
      if (x[i] == x[j] || x[i] == -x[j]) return false;
  }
  return true;
}

inline Point sharp(const Point& x) {
  Point y;
  for (std::size_t i = 0; i < 4; ++i) y[i] = 1 / x[i];
  return y;
}

/// Components p/q with p, q in [-9, 9] \ {0}, rejecting invalid points.
inline Point random_xpoint(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-9, 8);
  auto draw = [&] {
    int v = d(rng);
    return v >= 0 ? v + 1 : v;
  };
  for (;;) {
    Point x;
    for (auto& c : x) {
      c = Rational(draw(), draw());
      c.canonicalize();
    }
    if (valid_xpoint(x)) return x;
  }
}

/// Independent derivation of f from the plane configuration: columns
/// (0,1,0), (1,1,1), (1,x_i,x_i^2); bring the first three to the identity,
/// make the fourth all ones by row and column scaling, and read z off the
/// last two columns.
inline Point conic_normalization_oracle(const Point& x) {
  using Col = std::array<Rational, 3>;
  std::array<Col, 6> cols;
  cols[0] = {0, 1, 0};
  cols[1] = {1, 1, 1};
  for (std::size_t i = 0; i < 4; ++i) cols[2 + i] = {1, x[i], x[i] * x[i]};
  auto det3 = [](const Col& a, const Col& b, const Col& c) -> Rational {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1]) + c[0] * (a[1] * b[2] - a[2] * b[1]);
  };
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j)
      for (std::size_t k = j + 1; k < 6; ++k)
        if (det3(cols[i], cols[j], cols[k]) == 0) throw Error(Errc::DegenerateConfiguration, "a 3-minor vanishes");
  // inverse of the first three columns by Cramer's rule
  const Rational d = det3(cols[0], cols[1], cols[2]);
  auto solve = [&](const Col& v) {
    return Col{det3(v, cols[1], cols[2]) / d, det3(cols[0], v, cols[2]) / d, det3(cols[0], cols[1], v) / d};
  };
  const Col v = solve(cols[3]);
  const Col w5 = solve(cols[4]);
  const Col w6 = solve(cols[5]);
  // Row r is scaled by 1/v_r (column r of the identity block by v_r restores it).
  Col c5{w5[0] / v[0], w5[1] / v[1], w5[2] / v[2]};
  Col c6{w6[0] / v[0], w6[1] / v[1], w6[2] / v[2]};
  return {c5[1] / c5[0], c6[1] / c6[0], c5[2] / c5[0], c6[2] / c6[0]};
}

struct DivisorSet {
  Polynomial d1, d2, q;
  /// The linear factors z_j, 1 - z_j, z1 - z2, z1 - z3, z2 - z4, z3 - z4.
  std::vector<Polynomial> linear;
  Polynomial product() const {
    Polynomial p = d1 * d2 * q;
    for (const auto& l : linear) p = p * l;
    return p;
  }
};

inline DivisorSet divisor_polys() {
  const auto& vt = z_table();
  auto P = [&](const char* s) { return parse_expr(s, vt).num(); };
  DivisorSet out{P(printed::D1), P(printed::D2), P(printed::Q), {}};
  for (const char* s : {"z1", "1-z1", "z2", "1-z2", "z3", "1-z3", "z4", "1-z4", "z1-z2", "z1-z3", "z2-z4", "z3-z4"}) out.linear.push_back(P(s));
  return out;
}

/// Pull-back of a z-polynomial through f as a reduced rational function in x.
inline RationalFunction pull_back(const RationalFunction& g) {
  Assignment f;
  for (std::size_t i = 0; i < 4; ++i) f.emplace("z" + std::to_string(i + 1), components()[i]);
  return reduce(substitute(g, x_table(), f));
}

/// Factored rational function: constant times prod f^e over monic factors.
struct Factored {
  Rational constant = 1;
  std::map<std::string, int> exponents;  // printed monic factor -> exponent
  std::vector<Polynomial> residual;      // factors outside the candidate set

  void multiply(const RationalFunction& f, int power) {
    auto [unit, factors] = factorize(f.num());
    for (int i = 0; i < std::abs(power); ++i) constant = power > 0 ? Rational(constant * unit) : Rational(constant / unit);
    for (const auto& d : factors) {
      if (!is_candidate(d.poly)) residual.push_back(d.poly);
      exponents[to_string(d.poly)] += power * d.mult;
    }
    for (const auto& d : f.den_factors()) exponents[to_string(d.poly)] -= power * d.mult;
    for (auto it = exponents.begin(); it != exponents.end();) it = it->second == 0 ? exponents.erase(it) : std::next(it);
  }

  static bool is_candidate(const Polynomial& p) {
    for (const auto& c : candidate_factors(p.vars()))
      if (c.poly == p) return true;
    return false;
  }
};

struct PullbackDivisorResult {
  Factored computed;
  Factored printed;
  bool equal_exponents = false;
  Rational ratio;  // computed constant / printed constant
};

inline PullbackDivisorResult pullback_divisor_check() {
  const auto ds = divisor_polys();
  PullbackDivisorResult out;
  auto add = [&](const Polynomial& p) { out.computed.multiply(pull_back(RationalFunction(p)), 1); };
  for (const auto& l : ds.linear) add(l);
  add(ds.d1);
  add(ds.d2);
  add(ds.q);
  out.printed.constant = printed::pullback_constant;
  for (auto [s, e] : printed::pullback_factors) out.printed.multiply(parse_expr(s, x_table()), e);
  out.equal_exponents = out.computed.exponents == out.printed.exponents && out.computed.residual.empty();
  out.ratio = out.computed.constant / out.printed.constant;
  return out;
}

/// Exact inversion. Given x2, the z1 and z3 equations each give x3 as a
/// Moebius function of x1; equating them yields a quadratic in x1, and the
/// (z2, z4) pair gives another with the same root. Eliminating x1^2 leaves a
/// linear equation for x1.
struct InversionResult {
  std::vector<Point> preimages;
  Rational discriminant;
};

namespace detail {

/// Coefficients (A, B, C) of A x1^2 + B x1 + C from
/// zu zl (x2+x1)(x2+1)(1-x1) - 2 zu (x2+x1)(x2-x1) + 2 x1 zl (x2+1)(x2-1) + (1-x1)(x2-1)(x2-x1).
inline std::array<Rational, 3> x1_quadratic(const Rational& zu, const Rational& zl, const Rational& x2) {
  const Rational A = -zu * zl * (x2 + 1) + 2 * zu + (x2 - 1);
  const Rational B = zu * zl * (x2 + 1) * (1 - x2) + 2 * zl * (x2 + 1) * (x2 - 1) - (x2 - 1) * (x2 + 1);
  const Rational C = zu * zl * (x2 + 1) * x2 - 2 * zu * x2 * x2 + (x2 - 1) * x2;
  return {A, B, C};
}

inline std::optional<Rational> moebius_x3(const Rational& zu, const Rational& x1, const Rational& x2) {
  if (x2 == 1) return std::nullopt;
  Rational alpha = zu * (x2 + x1) / (x2 - 1);
  if (alpha == 1) return std::nullopt;
  return (alpha + x1) / (alpha - 1);
}

}  // namespace detail

inline std::array<Rational, 3> quadratic_coefficients(const Point& z) {
  std::vector<Rational> pt(z.begin(), z.end());
  const auto& vt = z_table();
  Rational c0 = parse_expr(printed::C0, vt).eval(pt);
  Rational c1 = parse_expr(printed::C1, vt).eval(pt);
  return {c0, c1, c0};
}

inline InversionResult invert_f(const Point& z) {
  auto [c0, c1, c2] = quadratic_coefficients(z);
  if (c2 == 0) throw Error(Errc::DegenerateZ, "leading coefficient of the quadratic vanishes");
  InversionResult out{{}, c1 * c1 - 4 * c0 * c2};
  auto s = rational_sqrt(out.discriminant);
  if (!s) throw Error(Errc::NonSquareDiscriminant, "discriminant " + to_string(out.discriminant) + " is not a rational square");
  std::vector<Rational> roots{(-c1 + *s) / (2 * c2)};
  if (*s != 0) roots.push_back((-c1 - *s) / (2 * c2));
  for (const auto& x2 : roots) {
    auto [a13, b13, k13] = detail::x1_quadratic(z[0], z[2], x2);
    auto [a24, b24, k24] = detail::x1_quadratic(z[1], z[3], x2);
    std::vector<Rational> x1s;
    Rational lin = a24 * b13 - a13 * b24;
    if (lin != 0) {
      x1s.push_back(-(a24 * k13 - a13 * k24) / lin);
    } else if (a13 != 0) {
      if (auto r = rational_sqrt(b13 * b13 - 4 * a13 * k13)) {
        x1s.push_back((-b13 + *r) / (2 * a13));
        x1s.push_back((-b13 - *r) / (2 * a13));
      }
    }
    for (const auto& x1 : x1s) {
      auto x3 = detail::moebius_x3(z[0], x1, x2);
      auto x4 = detail::moebius_x3(z[1], x1, x2);
      if (!x3 || !x4) continue;
      Point x{x1, x2, *x3, *x4};
      try {
        if (apply_f(x) == z && std::find(out.preimages.begin(), out.preimages.end(), x) == out.preimages.end()) out.preimages.push_back(x);
      } catch (const Error&) {
      }
    }
  }
  if (out.preimages.empty()) throw Error(Errc::DegenerateZ, "no preimage survives the forward check");
  return out;
}

struct DiscriminantResult {
  bool exact = false;
  std::optional<Polynomial> square_root_of_ratio;  // ratio = root^2 (constant allowed)
  Polynomial computed{z_table()};
  Polynomial printed{z_table()};
  std::optional<RationalFunction> ratio;  // computed / printed
};

inline DiscriminantResult discriminant_check() {
  const auto& vt = z_table();
  auto P = [&](const char* s) { return parse_expr(s, vt).num(); };
  auto ds = divisor_polys();
  Polynomial c0 = P(printed::C0), c1 = P(printed::C1);
  DiscriminantResult out;
  out.computed = c1 * c1 - c0 * c0 * Rational(4);
  out.printed = P("16*(z1-1)*(z2-1)*(z3-1)*(z4-1)*(z1-z2)*(z3-z4)") * ds.d2 * ds.q;
  out.exact = out.computed == out.printed;
  if (!out.exact && !out.printed.is_zero()) {
    out.ratio = reduce(RationalFunction(out.computed, out.printed));
  }
  return out;
}

struct JacobianResult {
  RationalFunction computed;
  RationalFunction printed;
  std::optional<Rational> constant_ratio;  // computed / printed, when constant
  bool exact() const { return constant_ratio && *constant_ratio == 1; }
};

inline JacobianResult jacobian_check() {
  JacobianResult out{as_map().jacobian_determinant(), parse_expr(printed::jacobian, x_table()), std::nullopt};
  auto r = reduce(out.computed / out.printed);
  if (r.is_constant()) out.constant_ratio = r.constant_value();
  return out;
}

/// The printed x3 contains one monomial whose last variable is a bare
/// "z"; it is evaluated with that slot bound to each candidate in turn.
inline const std::vector<std::string>& x3_slot_candidates() {
  static const std::vector<std::string> c{"z1", "z2", "z3", "z4", "x2", "1", "0"};
  return c;
}

namespace detail {

inline Rational slot_value(const std::string& choice, const Point& z, const Rational& x2) {
  if (choice == "x2") return x2;
  if (choice.size() == 2 && choice[0] == 'z') return z[choice[1] - '1'];
  return Rational(choice);
}

inline Point swap_pairs(const Point& z) { return {z[1], z[0], z[3], z[2]}; }

}  // namespace detail

struct PrintedRecovery {
  int points = 0;              // preimages tested (each x and #x)
  int x1_hits = 0;
  std::map<std::string, int> x3_hits;  // slot choice -> matches
  std::map<std::string, int> x4_hits;  // same, after the z1<->z2, z3<->z4 exchange

  std::vector<std::string> consistent_slots() const {
    std::vector<std::string> out;
    for (const auto& c : x3_slot_candidates()) {
      auto a = x3_hits.find(c), b = x4_hits.find(c);
      if (a != x3_hits.end() && b != x4_hits.end() && a->second == points && b->second == points) out.push_back(c);
    }
    return out;
  }
};

/// Evaluates the printed x1 and x3 (and x4 by exchange) at the preimages of
/// sampled z, comparing with the known x.
inline PrintedRecovery printed_recovery_check(int samples, std::uint64_t seed) {
  const auto& vt = inversion_table();
  const auto X1 = parse_expr(printed::x1, vt);
  const auto X3 = parse_expr(printed::x3, vt);
  std::mt19937_64 rng(seed);
  PrintedRecovery out;
  auto eval_or = [](const RationalFunction& f, const std::vector<Rational>& pt) -> std::optional<Rational> {
    try {
      return f.eval(pt);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  while (out.points < 2 * samples) {
    const Point x0 = random_xpoint(rng);
    Point z;
    try {
      z = apply_f(x0);
    } catch (const Error&) {
      continue;
    }
    for (const Point& x : {x0, sharp(x0)}) {
      ++out.points;
      std::vector<Rational> pt{z[0], z[1], z[2], z[3], x[1], 0};
      if (eval_or(X1, pt) == x[0]) ++out.x1_hits;
      const Point zs = detail::swap_pairs(z);
      for (const auto& c : x3_slot_candidates()) {
        pt = {z[0], z[1], z[2], z[3], x[1], detail::slot_value(c, z, x[1])};
        if (eval_or(X3, pt) == x[2]) ++out.x3_hits[c];
        // The exchange acts on the slot variable too.
        pt = {zs[0], zs[1], zs[2], zs[3], x[1], detail::slot_value(c, zs, x[1])};
        if (eval_or(X3, pt) == x[3]) ++out.x4_hits[c];
      }
    }
  }
  return out;
}

/// Each component invariant under x_i -> 1/x_i.
inline std::vector<bool> sharp_invariance(const std::vector<RationalFunction>& comps) {
  const auto& vt = comps.front().vars();
  Assignment inv;
  for (auto c : vt->coordinates()) inv.emplace(vt->name(c), RationalFunction::variable(vt, c).inverse());
  std::vector<bool> out;
  for (const auto& f : comps) out.push_back(equal(substitute(f, inv), f));
  return out;
}

}  // namespace lauricella::cover
