#pragma once

#include <vector>

#include "lauricella/systems.hpp"

namespace lauricella {

/// Derivation j of the system applied to a coefficient: D_j in D-form,
/// d/dx_j in partial form, or the frame combination when one is attached.
inline RationalFunction derive(const PdeSystem& sys, std::size_t j, const RationalFunction& f) {
  if (!sys.frame().empty()) {
    RationalFunction s(Polynomial(sys.vars()));
    for (std::size_t a = 1; a <= sys.n(); ++a) {
      const auto& m = sys.frame()[j - 1][a - 1];
      if (!m.is_zero()) s += m * diff(f, sys.coord(a));
    }
    return s;
  }
  return sys.form() == Form::D ? euler(f, sys.coord(j)) : diff(f, sys.coord(j));
}

/// Value and coordinate gradient of f at a point, from the factored
/// denominator without expanding anything symbolically.
struct Jet {
  Rational value;
  std::vector<Rational> grad;  // indexed by table variable
};

inline Jet jet_at(const RationalFunction& f, const std::vector<Rational>& point, const std::vector<std::size_t>& vars) {
  const std::size_t size = f.vars()->size();
  Jet out{0, std::vector<Rational>(size, Rational(0))};
  Rational n = f.num().eval(point);
  std::vector<Rational> dn(size, Rational(0));
  for (auto v : vars) dn[v] = f.num().partial(v).eval(point);
  Rational h = 1;
  std::vector<Rational> log_dh(size, Rational(0));  // sum m h'/h
  for (const auto& d : f.den_factors()) {
    Rational hv = d.poly.eval(point);
    if (hv == 0) throw Error(Errc::PoleAtPoint, "denominator vanishes at evaluation point");
    Rational p = 1;
    for (int i = 0; i < d.mult; ++i) p *= hv;
    h *= p;
    for (auto v : vars)
      if (d.poly.depends_on(v)) log_dh[v] += Rational(d.mult) * d.poly.partial(v).eval(point) / hv;
  }
  out.value = n / h;
  for (auto v : vars) out.grad[v] = (dn[v] - n * log_dh[v]) / h;
  return out;
}

/// One entry of a curvature matrix R_ij = D_j A_i - D_i A_j + A_i A_j - A_j A_i,
/// where A_i acts on the column (u, D_1 u, ..., D_n u).
template <typename T>
struct ResidualEntry {
  std::size_t i, j, row, col;
  T value;
};

namespace detail {

template <typename T>
using Matrix = std::vector<std::vector<T>>;

inline bool vanishes(const RationalFunction& f) { return f.is_zero(); }
inline bool vanishes(const Rational& r) { return r == 0; }

/// A_i[0][m] = d_{m,i}; A_i[k][0] = p^0_ik; A_i[k][l] = p^l_ik.
template <typename T, typename Coef, typename Zero, typename One>
Matrix<T> connection_matrix(std::size_t n, std::size_t i, Coef&& coef, Zero&& zero, One&& one) {
  Matrix<T> a(n + 1, std::vector<T>(n + 1, zero()));
  a[0][i] = one();
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t l = 0; l <= n; ++l) a[k][l] = coef(l, i, k);
  return a;
}

template <typename T>
std::vector<ResidualEntry<T>> curvature(std::size_t n, const std::vector<Matrix<T>>& A, const std::vector<std::vector<Matrix<T>>>& dA) {
  // dA[j][i] = D_j A_i
  std::vector<ResidualEntry<T>> out;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      for (std::size_t r = 1; r <= n; ++r)
        for (std::size_t c = 0; c <= n; ++c) {
          T v = dA[j][i][r][c] - dA[i][j][r][c];
          for (std::size_t l = 0; l <= n; ++l) {
            if (!vanishes(A[i][r][l]) && !vanishes(A[j][l][c])) v += A[i][r][l] * A[j][l][c];
            if (!vanishes(A[j][r][l]) && !vanishes(A[i][l][c])) v -= A[j][r][l] * A[i][l][c];
          }
          out.push_back({i, j, r, c, std::move(v)});
        }
  return out;
}

}  // namespace detail

/// All curvature entries (rows 1..n; row 0 vanishes identically). The system
/// is integrable iff every entry is zero.
inline std::vector<ResidualEntry<RationalFunction>> integrability_residual(const PdeSystem& sys) {
  if (!sys.has_zeroth()) throw Error(Errc::MissingZerothOrder, "integrability needs zeroth-order coefficients");
  const std::size_t n = sys.n();
  const auto& vt = sys.vars();
  auto zero = [&] { return RationalFunction(Polynomial(vt)); };
  auto one = [&] { return RationalFunction::constant(vt, 1); };
  std::vector<detail::Matrix<RationalFunction>> A(n + 1);
  for (std::size_t i = 1; i <= n; ++i)
    A[i] = detail::connection_matrix<RationalFunction>(n, i, [&](std::size_t l, std::size_t a, std::size_t b) { return sys.p(l, a, b); }, zero, one);
  std::vector<std::vector<detail::Matrix<RationalFunction>>> dA(n + 1, std::vector<detail::Matrix<RationalFunction>>(n + 1));
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t i = 1; i <= n; ++i) {
      if (i == j) continue;
      dA[j][i] = A[i];
      for (auto& row : dA[j][i])
        for (auto& e : row) e = e.is_zero() || e.is_constant() ? zero() : derive(sys, j, e);
    }
  return detail::curvature<RationalFunction>(n, A, dA);
}

inline bool is_integrable(const PdeSystem& sys) {
  for (const auto& e : integrability_residual(sys))
    if (!e.value.is_zero()) return false;
  return true;
}

/// Curvature entries at a rational point, using exact jets of every
/// coefficient (and of the frame, if present).
inline std::vector<ResidualEntry<Rational>> integrability_residual_at(const PdeSystem& sys, const std::vector<Rational>& point) {
  if (!sys.has_zeroth()) throw Error(Errc::MissingZerothOrder, "integrability needs zeroth-order coefficients");
  const std::size_t n = sys.n();
  const auto& coords = sys.coords();
  // frame values at the point: F[j][a] (identity-like otherwise)
  std::vector<std::vector<Rational>> F(n + 1, std::vector<Rational>(n + 1, Rational(0)));
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t a = 1; a <= n; ++a) {
      if (!sys.frame().empty())
        F[j][a] = sys.frame()[j - 1][a - 1].eval(point);
      else if (a == j)
        F[j][a] = sys.form() == Form::D ? point[sys.coord(j)] : Rational(1);
    }
  std::vector<detail::Matrix<Rational>> A(n + 1);
  std::vector<std::vector<detail::Matrix<Rational>>> dA(n + 1, std::vector<detail::Matrix<Rational>>(n + 1));
  for (std::size_t i = 1; i <= n; ++i) {
    A[i].assign(n + 1, std::vector<Rational>(n + 1, Rational(0)));
    for (std::size_t j = 1; j <= n; ++j) dA[j][i] = A[i];
    A[i][0][i] = 1;
    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t l = 0; l <= n; ++l) {
        const auto& f = sys.p(l, i, k);
        if (f.is_zero()) continue;
        auto jt = jet_at(f, point, coords);
        A[i][k][l] = jt.value;
        for (std::size_t j = 1; j <= n; ++j) {
          Rational d = 0;
          for (std::size_t a = 1; a <= n; ++a)
            if (F[j][a] != 0) d += F[j][a] * jt.grad[sys.coord(a)];
          dA[j][i][k][l] = d;
        }
      }
  }
  return detail::curvature<Rational>(n, A, dA);
}

/// Solves the flatness equations (columns 1..n of the curvature, which are
/// linear in p^0 with constant coefficients) for the zeroth-order table.
inline PdeSystem recover_p0(const PdeSystem& sys) {
  const std::size_t n = sys.n();
  if (n < 2) throw Error(Errc::Underdetermined, "a single equation places no constraint on p^0");
  PdeSystem probe = sys;
  probe.drop_zeroth();
  probe.enable_zeroth();
  // column m >= 1 of R_ij, row k: d_mj p0_ik - d_mi p0_jk + (terms without p0)
  auto residual = integrability_residual(probe);
  auto unknown = [n](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return (a - 1) * n - (a - 1) * (a - 2) / 2 + (b - a);
  };
  const std::size_t N = n * (n + 1) / 2;
  struct Row {
    std::vector<Rational> coef;
    RationalFunction rhs;
  };
  std::vector<Row> rows;
  for (const auto& e : residual) {
    if (e.col == 0) continue;
    Row r{std::vector<Rational>(N, Rational(0)), -e.value};
    if (e.col == e.j) r.coef[unknown(e.i, e.row)] += 1;
    if (e.col == e.i) r.coef[unknown(e.j, e.row)] -= 1;
    rows.push_back(std::move(r));
  }
  std::vector<std::size_t> pivot_row(N, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t u = 0; u < N; ++u) {
    std::size_t pr = SIZE_MAX;
    for (std::size_t r = next; r < rows.size(); ++r)
      if (rows[r].coef[u] != 0) {
        pr = r;
        break;
      }
    if (pr == SIZE_MAX) throw Error(Errc::Underdetermined, "p^0 is not determined by the flatness equations");
    std::swap(rows[pr], rows[next]);
    Rational inv = 1 / rows[next].coef[u];
    for (auto& c : rows[next].coef) c *= inv;
    rows[next].rhs = rows[next].rhs * inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == next || rows[r].coef[u] == 0) continue;
      Rational f = rows[r].coef[u];
      for (std::size_t c = 0; c < N; ++c) rows[r].coef[c] -= f * rows[next].coef[c];
      rows[r].rhs -= rows[next].rhs * f;
    }
    pivot_row[u] = next++;
  }
  PdeSystem out = sys;
  out.enable_zeroth();
  for (std::size_t a = 1; a <= n; ++a)
    for (std::size_t b = a; b <= n; ++b) out.set(0, a, b, reduce(rows[pivot_row[unknown(a, b)]].rhs));
  for (std::size_t r = next; r < rows.size(); ++r)
    if (!rows[r].rhs.is_zero()) throw Error(Errc::Inconsistent, "first-order data admit no flat completion");
  for (const auto& e : integrability_residual(out))
    if (e.col == 0 && !e.value.is_zero()) throw Error(Errc::Inconsistent, "first-order data admit no flat completion");
  return out;
}

/// Gauge u = g w with d_j log g = p_j/(n+1), in the system's own
/// derivations (frame included), keeping the zeroth order:
///   P^0_ij = p^0_ij + sum_k p^k_ij h_k - d_i h_j - h_i h_j.
inline PdeSystem gauge_normal_form(const PdeSystem& sys) {
  if (!sys.has_zeroth()) throw Error(Errc::MissingZerothOrder, "gauge_normal_form carries p^0 along");
  const std::size_t n = sys.n();
  std::vector<RationalFunction> h;
  for (std::size_t j = 1; j <= n; ++j) h.push_back(reduce(trace_coefficient(sys, j) / Rational(n + 1)));
  PdeSystem out = sys;
  out.set_name("normal_" + sys.name());
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j) {
      RationalFunction z = sys.p(0, i, j) - derive(sys, i, h[j - 1]) - h[i - 1] * h[j - 1];
      for (std::size_t k = 1; k <= n; ++k) {
        const auto& pk = sys.p(k, i, j);
        if (!pk.is_zero()) z += pk * h[k - 1];
        RationalFunction v = pk;
        if (k == j) v -= h[i - 1];
        if (k == i) v -= h[j - 1];
        out.set(k, i, j, reduce(v));
      }
      out.set(0, i, j, reduce(z));
    }
  return out;
}

}  // namespace lauricella
