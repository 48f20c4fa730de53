#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "lauricella/systems.hpp"

namespace lauricella {

inline Rational pochhammer(const Rational& a, unsigned m) {
  Rational p = 1;
  for (unsigned k = 0; k < m; ++k) p *= a + k;
  return p;
}

struct SeriesParams {
  Rational a;
  std::vector<Rational> b;
  Rational c;
  unsigned order = 20;
};

struct EvalResult {
  long double value = 0;
  long double tail_bound = 0;
  std::size_t terms = 0;
};

namespace detail {

/// Calls f(m) for every multi-index of length n and total degree d.
inline void for_each_composition(std::size_t n, unsigned d, const std::function<void(const std::vector<unsigned>&)>& f) {
  std::vector<unsigned> m(n, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == n) {
      m[i] = left;
      f(m);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      m[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, d);
}

/// hi + lo split keeps long double precision out of a double-only API.
inline long double to_long_double(const Rational& q) {
  double hi = q.get_d();
  Rational rest = q - Rational(hi);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

inline void check_c(const Rational& c, unsigned order) {
  if (c <= 0 && c.get_den() == 1 && -c < order) throw Error(Errc::InvalidC, "c = " + to_string(c) + " is a pole of the series");
}

}  // namespace detail

/// Sum over m1+...+mn <= M of (a)_|m| prod (b_i)_{m_i} / ((c)_|m| prod m_i!) x^m,
/// accumulated exactly.
inline EvalResult fd_eval(const SeriesParams& p, const std::vector<Rational>& x) {
  const std::size_t n = p.b.size();
  if (n == 0 || x.size() != n) throw Error(Errc::ShapeMismatch, "need one b per coordinate");
  Rational qmax = 0;
  for (const auto& xi : x) {
    if (abs(xi) > Rational(9, 10)) throw Error(Errc::ConvergenceGuard, "|x_i| must not exceed 0.9, got " + to_string(xi));
    qmax = std::max<Rational>(qmax, abs(xi));
  }
  detail::check_c(p.c, p.order);
  const unsigned M = p.order;
  // w[i][k] = (b_i)_k x_i^k / k!
  std::vector<std::vector<Rational>> w(n, std::vector<Rational>(M + 1));
  for (std::size_t i = 0; i < n; ++i) {
    w[i][0] = 1;
    for (unsigned k = 1; k <= M; ++k) w[i][k] = w[i][k - 1] * (p.b[i] + (k - 1)) * x[i] / k;
  }
  Rational sum = 0, ratio = 1, last = 0, before = 0;
  EvalResult out;
  for (unsigned d = 0; d <= M; ++d) {
    if (d > 0) ratio *= (p.a + (d - 1)) / (p.c + (d - 1));
    Rational layer = 0, layer_abs = 0;
    detail::for_each_composition(n, d, [&](const std::vector<unsigned>& m) {
      Rational t = ratio;
      for (std::size_t i = 0; i < n; ++i) t *= w[i][m[i]];
      layer += t;
      layer_abs += abs(t);
      ++out.terms;
    });
    sum += layer;
    before = last;
    last = layer_abs;
  }
  out.value = detail::to_long_double(sum);
  // Geometric continuation of the last layer, at the larger of |x|max and
  // the observed layer ratio, with a safety factor of two.
  long double r = detail::to_long_double(qmax);
  if (before != 0) r = std::max(r, detail::to_long_double(last / before));
  const long double l = detail::to_long_double(last);
  out.tail_bound = l == 0 ? 0 : r < 1 ? 2 * l * r / (1 - r) : std::numeric_limits<long double>::infinity();
  return out;
}

struct ResidualReport {
  std::optional<unsigned> lowest_degree;  // lowest surviving x-degree over all equations
  std::size_t equations = 0;
  std::size_t series_terms = 0;
};

namespace detail {

inline Polynomial rising(const Polynomial& a, unsigned m) {
  Polynomial p = Polynomial::constant(a.vars(), 1);
  for (unsigned k = 0; k < m; ++k) p = p * (a + Polynomial::constant(a.vars(), k));
  return p;
}

inline Polynomial euler_poly(const Polynomial& f, std::size_t v) {
  std::vector<Term> terms;
  for (const auto& t : f.terms())
    if (t.mono.exp[v]) terms.push_back({t.mono, t.coeff * t.mono.exp[v]});
  return Polynomial::from_terms(f.vars(), std::move(terms));
}

inline unsigned coordinate_degree(const Monomial& m, const std::vector<std::size_t>& coords) {
  unsigned d = 0;
  for (auto c : coords) d += m.exp[c];
  return d;
}

}  // namespace detail

/// Applies each equation of a D-form system to the truncated series (scaled
/// by (c)_M to stay polynomial in the parameters) and reports the lowest
/// surviving degree in x after clearing coefficient denominators.
inline ResidualReport series_residual_check(const Bindings& p, unsigned M, const PdeSystem& sys) {
  if (sys.form() != Form::D) throw Error(Errc::WrongForm, "series_residual_check needs a D-form system");
  if (!sys.has_zeroth()) throw Error(Errc::MissingZerothOrder, "the series check needs p^0");
  if (M < 4) throw Error(Errc::InvalidArgument, "order must be at least 4");
  const std::size_t n = sys.n();
  if (p.b.size() != n) throw Error(Errc::ShapeMismatch, "need one b per coordinate");
  const auto& vt = sys.vars();
  auto poly_of = [&](const RationalFunction& f) {
    if (!f.is_polynomial()) throw Error(Errc::InvalidArgument, "series parameters must be polynomial");
    auto q = f.num();
    q.rebind(vt);
    return q;
  };
  const Polynomial a = poly_of(p.a), c = poly_of(p.c);
  std::vector<Polynomial> b;
  for (const auto& bi : p.b) b.push_back(poly_of(bi));
  if (c.is_constant()) detail::check_c(c.constant_value(), M);

  ResidualReport out;
  // w[i][k] = (b_i)_k / k! x_i^k
  std::vector<std::vector<Polynomial>> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial xi = Polynomial::variable(vt, sys.coord(i + 1));
    w[i].push_back(Polynomial::constant(vt, 1));
    for (unsigned k = 1; k <= M; ++k) w[i].push_back(w[i][k - 1] * (b[i] + Polynomial::constant(vt, k - 1)) * xi * Rational(1, k));
  }
  Polynomial S(vt);
  for (unsigned d = 0; d <= M; ++d) {
    // (c)_M / (c)_d = (c+d)...(c+M-1)
    Polynomial scale = detail::rising(a, d);
    for (unsigned k = d; k < M; ++k) scale = scale * (c + Polynomial::constant(vt, k));
    detail::for_each_composition(n, d, [&](const std::vector<unsigned>& m) {
      Polynomial t = scale;
      for (std::size_t i = 0; i < n; ++i) t = t * w[i][m[i]];
      S += t;
      ++out.series_terms;
    });
  }
  std::vector<Polynomial> DS;
  for (std::size_t k = 1; k <= n; ++k) DS.push_back(detail::euler_poly(S, sys.coord(k)));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j) {
      RationalFunction r(detail::euler_poly(DS[i - 1], sys.coord(j)));
      r -= sys.p(0, i, j) * RationalFunction(S);
      for (std::size_t k = 1; k <= n; ++k)
        if (!sys.p(k, i, j).is_zero()) r -= sys.p(k, i, j) * RationalFunction(DS[k - 1]);
      ++out.equations;
      for (const auto& t : r.num().terms()) {
        unsigned d = detail::coordinate_degree(t.mono, sys.coords());
        if (!out.lowest_degree || d < *out.lowest_degree) out.lowest_degree = d;
      }
    }
  if (out.lowest_degree && *out.lowest_degree < M)
    throw Error(Errc::ResidualBelowOrder, "residual term of degree " + std::to_string(*out.lowest_degree) + " survives below order " + std::to_string(M));
  return out;
}

inline ResidualReport series_residual_check(const SeriesParams& p, const PdeSystem& sys) {
  return series_residual_check(numeric_bindings(sys.vars(), p.a, p.b, p.c), p.order, sys);
}

struct IntegralResult {
  long double value = 0;
  long double error = 0;
  long double beta = 0;  // B(a, c - a)
};

namespace detail {

/// Adaptive 61-point Gauss-Kronrod on one half, after t = s^k (or 1 - t =
/// s^k). For an endpoint power t^(p/q - 1), k = q leaves s^(p - 1).
template <typename F>
std::pair<long double, long double> kronrod_half(F&& f, const Rational& power, bool at_zero) {
  const int k = power.get_den() == 1 ? 1 : static_cast<int>(power.get_den().get_si());
  auto g = [&](long double s) {
    long double sk = std::pow(s, static_cast<long double>(k));
    long double jac = k * std::pow(s, static_cast<long double>(k - 1));
    return f(at_zero ? sk : 1 - sk) * jac;
  };
  const long double upper = std::pow(0.5L, 1.0L / k);
  long double err = 0;
  long double v = boost::math::quadrature::gauss_kronrod<long double, 61>::integrate(g, 0.0L, upper, 15, 1e-15L, &err);
  return {v, err};
}

}  // namespace detail

/// int_0^1 t^(a-1) (1-t)^(c-a-1) prod (1 - x_i t)^(-b_i) dt.
inline IntegralResult euler_integral_eval(const SeriesParams& p, const std::vector<Rational>& x) {
  if (!(p.a > 0 && p.c > p.a)) throw Error(Errc::InvalidArgument, "the integral needs 0 < a < c");
  if (x.size() != p.b.size()) throw Error(Errc::ShapeMismatch, "need one b per coordinate");
  for (const auto& xi : x)
    if (abs(xi) > 1 || xi == 1) throw Error(Errc::ConvergenceGuard, "x_i must lie in [-1, 1)");
  const long double a = detail::to_long_double(p.a), ca = detail::to_long_double(p.c - p.a);
  std::vector<long double> xs, bs;
  for (const auto& xi : x) xs.push_back(detail::to_long_double(xi));
  for (const auto& bi : p.b) bs.push_back(detail::to_long_double(bi));
  auto integrand = [&](long double t) {
    long double v = std::pow(t, a - 1) * std::pow(1 - t, ca - 1);
    for (std::size_t i = 0; i < xs.size(); ++i) v *= std::pow(1 - xs[i] * t, -bs[i]);
    return v;
  };
  auto [v0, e0] = detail::kronrod_half(integrand, p.a, true);
  auto [v1, e1] = detail::kronrod_half(integrand, p.c - p.a, false);
  IntegralResult out{v0 + v1, e0 + e1, boost::math::beta(a, ca)};
  if (!std::isfinite(out.value) || out.error > 1e-10L * std::fabs(out.value))
    throw Error(Errc::QuadratureNonConvergent, "error estimate " + std::to_string(static_cast<double>(out.error)));
  return out;
}

/// The Euler integral of E_D^(2n+1) with b_(n+i) = b_i and b_(2n+1) = a - c + 1,
/// restricted to x = (t, -t, -1).
inline IntegralResult restricted_integral(const Rational& a, const std::vector<Rational>& b, const Rational& c, const std::vector<Rational>& t) {
  SeriesParams p{a, b, c, 0};
  for (const auto& bi : b) p.b.push_back(bi);
  p.b.push_back(a - c + 1);
  std::vector<Rational> x = t;
  for (const auto& ti : t) x.push_back(-ti);
  x.push_back(-1);
  return euler_integral_eval(p, x);
}

/// Finite-difference residual of script_E(a, b, c) in D-form applied to
/// u(t) = restricted_integral(a, b, c, t), maximum over the equations.
inline long double script_e_fd_residual(const PdeSystem& sys, const Rational& a, const std::vector<Rational>& b, const Rational& c,
                                        const std::vector<Rational>& t, const Rational& h) {
  const std::size_t n = sys.n();
  if (sys.form() != Form::D || t.size() != n || b.size() != n) throw Error(Errc::ShapeMismatch, "system, b and t must agree");
  auto u = [&](int i, int si, int j, int sj) {
    std::vector<Rational> s = t;
    if (i >= 0) s[i] += si * h;
    if (j >= 0) s[j] += sj * h;
    return restricted_integral(a, b, c, s).value;
  };
  const long double H = detail::to_long_double(h);
  const long double u0 = u(-1, 0, -1, 0);
  std::vector<long double> du(n);
  for (std::size_t i = 0; i < n; ++i) du[i] = (u(i, 1, -1, 0) - u(i, -1, -1, 0)) / (2 * H);
  std::vector<Rational> point(sys.vars()->size(), Rational(0));
  for (std::size_t i = 0; i < n; ++i) point[sys.coord(i + 1)] = t[i];
  long double worst = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j <= n - 1; ++j) {
      long double d2 = i == j ? (u(i, 1, -1, 0) - 2 * u0 + u(i, -1, -1, 0)) / (H * H)
                              : (u(i, 1, j, 1) - u(i, 1, j, -1) - u(i, -1, j, 1) + u(i, -1, j, -1)) / (4 * H * H);
      const long double ti = detail::to_long_double(t[i]), tj = detail::to_long_double(t[j]);
      long double lhs = ti * tj * d2 + (i == j ? ti * du[i] : 0);
      long double rhs = detail::to_long_double(sys.p(0, i + 1, j + 1).eval(point)) * u0;
      for (std::size_t k = 0; k < n; ++k)
        rhs += detail::to_long_double(sys.p(k + 1, i + 1, j + 1).eval(point)) * detail::to_long_double(t[k]) * du[k];
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  return worst;
}

}  // namespace lauricella
