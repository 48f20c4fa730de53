#pragma once

#include <string>
#include <vector>

#include "lauricella/pde_system.hpp"
#include "lauricella/substitution.hpp"

namespace lauricella {

/// Parameter bindings (a, b_1..b_m, c) over a common variable table.
struct Bindings {
  RationalFunction a;
  std::vector<RationalFunction> b;
  RationalFunction c;
};

/// Coordinates x1..xn; parameters a, b, b1..bm, c.
inline VarTablePtr hypergeometric_table(std::size_t n, std::size_t m, const std::string& stem = "x") {
  std::vector<std::string> params{"a", "b"};
  for (auto& name : indexed_names("b", m)) params.push_back(name);
  params.push_back("c");
  return VarTable::make(indexed_names(stem, n), params);
}

inline Bindings symbolic_bindings(const VarTablePtr& vt, std::size_t m) {
  Bindings out{RationalFunction::variable(vt, "a"), {}, RationalFunction::variable(vt, "c")};
  for (std::size_t i = 1; i <= m; ++i) out.b.push_back(RationalFunction::variable(vt, "b" + std::to_string(i)));
  return out;
}

inline Bindings numeric_bindings(const VarTablePtr& vt, const Rational& a, const std::vector<Rational>& b, const Rational& c) {
  Bindings out{RationalFunction::constant(vt, a), {}, RationalFunction::constant(vt, c)};
  for (const auto& bi : b) out.b.push_back(RationalFunction::constant(vt, bi));
  return out;
}

/// All b_i equal to the single parameter "b".
inline Bindings shared_b_bindings(const VarTablePtr& vt, std::size_t m) {
  Bindings out{RationalFunction::variable(vt, "a"), {}, RationalFunction::variable(vt, "c")};
  for (std::size_t i = 0; i < m; ++i) out.b.push_back(RationalFunction::variable(vt, "b"));
  return out;
}

namespace detail {

inline std::vector<std::size_t> leading_coords(const VarTablePtr& vt, std::size_t n) {
  if (n == 0) throw Error(Errc::InvalidDimension, "n must be at least 1");
  auto coords = vt->coordinates();
  if (coords.size() < n) throw Error(Errc::InvalidDimension, "variable table has fewer than n coordinates");
  coords.resize(n);
  return coords;
}

inline void check_bindings(const Bindings& p, std::size_t n) {
  if (p.b.size() != n) throw Error(Errc::InvalidDimension, "expected " + std::to_string(n) + " b-parameters");
  for (const auto& b : p.b) require_same_table(b.vars(), p.a.vars());
  require_same_table(p.c.vars(), p.a.vars());
}

/// Shared builder for E_D and its even counterpart: with t_i = x_i^e the
/// coefficients are those of E_D in t, with b scaled by `bscale` and the
/// diagonal constant term given by `diag_const`.
template <typename Diag>
PdeSystem build_lauricella_like(const std::string& name, std::size_t n, const Bindings& p, unsigned e, const Rational& bscale, Diag diag) {
  check_bindings(p, n);
  const auto& vt = p.a.vars();
  PdeSystem sys(name, Form::D, vt, leading_coords(vt, n), true);
  std::vector<RationalFunction> t, one_minus_t;
  for (std::size_t i = 1; i <= n; ++i) {
    t.push_back(RationalFunction(Polynomial::variable(vt, sys.coord(i), e)));
    one_minus_t.push_back(Rational(1) - t.back());
  }
  auto B = [&](std::size_t i) { return p.b[i - 1] * bscale; };
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& ti = t[i - 1];
    const auto& ui = one_minus_t[i - 1];
    for (std::size_t j = i + 1; j <= n; ++j) {
      const auto& tj = t[j - 1];
      sys.set(i, i, j, B(j) * tj / (ti - tj));
      sys.set(j, i, j, B(i) * ti / (tj - ti));
    }
    sys.set(0, i, i, p.a * B(i) * ti / ui);
    RationalFunction diag_sum = diag(i, ti) / ui;
    for (std::size_t k = 1; k <= n; ++k) {
      if (k == i) continue;
      const auto& tk = t[k - 1];
      sys.set(k, i, i, B(i) * (ti / ui - ti / (tk - ti)));
      diag_sum -= B(k) * tk / (ti - tk);
    }
    sys.set(i, i, i, diag_sum);
  }
  return sys;
}

}  // namespace detail

/// E_D^n(a, b_1..b_n, c) in D-form on the first n coordinates of the
/// bindings' table.
inline PdeSystem build_ed(std::size_t n, const Bindings& p) {
  return detail::build_lauricella_like("E_D", n, p, 1, Rational(1), [&](std::size_t i, const RationalFunction& x) {
    return (p.a + p.b[i - 1]) * x - p.c + Rational(1);
  });
}

/// The rank n+1 system on the even chart: coefficients q^k_ij.
inline PdeSystem build_script_e(std::size_t n, const Bindings& p) {
  return detail::build_lauricella_like("script_E", n, p, 2, Rational(2), [&](std::size_t i, const RationalFunction& x) {
    return (p.a + p.b[i - 1] * Rational(2)) * x + p.a - p.c * Rational(2) + Rational(2);
  });
}

/// Coordinate inversion x_i -> 1/x_i; D_i -> -D_i flips first-order signs.
inline PdeSystem sharp_transform(const PdeSystem& sys) {
  if (sys.form() != Form::D) throw Error(Errc::WrongForm, "sharp_transform needs a D-form system");
  const auto& vt = sys.vars();
  Assignment inv;
  for (std::size_t i = 1; i <= sys.n(); ++i)
    inv.emplace(vt->name(sys.coord(i)), RationalFunction::variable(vt, sys.coord(i)).inverse());
  auto out = sys.map_coefficients([&](std::size_t k, std::size_t, std::size_t, const RationalFunction& f) {
    auto g = substitute(f, inv);
    return k == 0 ? g : -g;
  });
  out.set_name("sharp_" + sys.name());
  return out;
}

/// p_j = sum_k p^k_kj.
inline RationalFunction trace_coefficient(const PdeSystem& sys, std::size_t j) {
  RationalFunction s(Polynomial(sys.vars()));
  for (std::size_t k = 1; k <= sys.n(); ++k) s += sys.p(k, k, j);
  return s;
}

/// Trace-free gauge: P^k_ij = p^k_ij - d^k_j p_i/(n+1) - d^k_i p_j/(n+1).
/// Zeroth-order coefficients are dropped; recover_p0 can restore them.
inline PdeSystem normal_form(const PdeSystem& sys) {
  if (sys.form() != Form::D) throw Error(Errc::WrongForm, "normal_form needs a D-form system");
  const std::size_t n = sys.n();
  std::vector<RationalFunction> tr;
  for (std::size_t j = 1; j <= n; ++j) tr.push_back(trace_coefficient(sys, j) / Rational(n + 1));
  PdeSystem out("normal_" + sys.name(), Form::D, sys.vars(), sys.coords(), false);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j)
      for (std::size_t k = 1; k <= n; ++k) {
        RationalFunction v = sys.p(k, i, j);
        if (k == j) v -= tr[i - 1];
        if (k == i) v -= tr[j - 1];
        out.set(k, i, j, v);
      }
  return out;
}

/// Imposes parameter (or coordinate) constraints on every coefficient.
inline PdeSystem specialize_system(const PdeSystem& sys, const Assignment& assignment) {
  return sys.map_coefficients([&](std::size_t, std::size_t, std::size_t, const RationalFunction& f) { return specialize(f, assignment); });
}

enum class Scope { FirstOrder, Full };

struct CoefficientDiff {
  std::size_t k = 0, i = 0, j = 0;
  std::string lhs, rhs;
};

struct EqualityReport {
  bool equal = true;
  std::optional<CoefficientDiff> first_difference;
  explicit operator bool() const noexcept { return equal; }
};

inline EqualityReport systems_equal(const PdeSystem& s1, const PdeSystem& s2, Scope scope) {
  if (s1.n() != s2.n() || s1.form() != s2.form()) throw Error(Errc::ShapeMismatch, "systems differ in dimension or form");
  EqualityReport out;
  for (std::size_t k = scope == Scope::Full ? 0 : 1; k <= s1.n(); ++k)
    for (std::size_t i = 1; i <= s1.n(); ++i)
      for (std::size_t j = i; j <= s1.n(); ++j) {
        auto f = s1.p(k, i, j);
        auto g = s2.p(k, i, j);
        f.rebind(g.vars());
        if (!equal(f, g)) {
          out.equal = false;
          out.first_difference = CoefficientDiff{k, i, j, print_expr(s1.p(k, i, j)), print_expr(s2.p(k, i, j))};
          return out;
        }
      }
  return out;
}

}  // namespace lauricella
