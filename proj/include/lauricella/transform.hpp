#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lauricella/integrability.hpp"

namespace lauricella {

using RfMatrix = std::vector<std::vector<RationalFunction>>;

namespace detail {

inline RationalFunction rf_zero(const VarTablePtr& vt) { return RationalFunction(Polynomial(vt)); }

/// Gauss-Jordan with first-nonzero pivoting. Returns nullopt when singular.
inline std::optional<RfMatrix> invert(RfMatrix m) {
  const std::size_t n = m.size();
  const auto& vt = m[0][0].vars();
  RfMatrix inv(n, std::vector<RationalFunction>(n, rf_zero(vt)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = RationalFunction::constant(vt, 1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = n;
    for (std::size_t r = col; r < n; ++r)
      if (!m[r][col].is_zero() && (best == n || m[r][col].num().size() < m[best][col].num().size())) best = r;
    if (best == n) return std::nullopt;
    std::swap(m[best], m[col]);
    std::swap(inv[best], inv[col]);
    auto piv = m[col][col].inverse();
    for (std::size_t c = 0; c < n; ++c) {
      if (!m[col][c].is_zero()) m[col][c] = m[col][c] * piv;
      if (!inv[col][c].is_zero()) inv[col][c] = inv[col][c] * piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      auto f = m[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        if (!m[col][c].is_zero()) m[r][c] -= f * m[col][c];
        if (!inv[col][c].is_zero()) inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

inline RationalFunction determinant(RfMatrix m) {
  const std::size_t n = m.size();
  const auto& vt = m[0][0].vars();
  RationalFunction det = RationalFunction::constant(vt, 1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = n;
    for (std::size_t r = col; r < n; ++r)
      if (!m[r][col].is_zero() && (best == n || m[r][col].num().size() < m[best][col].num().size())) best = r;
    if (best == n) return rf_zero(vt);
    if (best != col) {
      std::swap(m[best], m[col]);
      det = -det;
    }
    det = det * m[col][col];
    auto piv = m[col][col].inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      auto f = m[r][col] * piv;
      for (std::size_t c = col + 1; c < n; ++c)
        if (!m[col][c].is_zero()) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

}  // namespace detail

/// z_i = components[i](x) for the source coordinates x (table indices).
struct RationalMap {
  VarTablePtr vars;
  std::vector<std::size_t> source;
  std::vector<std::string> target_names;
  std::vector<RationalFunction> components;

  static RationalMap identity(const VarTablePtr& vt, const std::vector<std::size_t>& coords) {
    RationalMap m{vt, coords, {}, {}};
    for (auto c : coords) {
      m.target_names.push_back(vt->name(c));
      m.components.push_back(RationalFunction::variable(vt, c));
    }
    return m;
  }

  /// J[i][a] = d z_i / d x_a.
  RfMatrix jacobian() const {
    RfMatrix j;
    for (const auto& z : components) {
      std::vector<RationalFunction> row;
      for (auto a : source) row.push_back(diff(z, a));
      j.push_back(std::move(row));
    }
    return j;
  }

  RationalFunction jacobian_determinant() const { return detail::determinant(jacobian()); }

  std::vector<Rational> apply(const std::vector<Rational>& point) const {
    std::vector<Rational> out;
    for (const auto& z : components) out.push_back(z.eval(point));
    return out;
  }
};

/// Restriction data for the embedding x_{n+i} = -x_i, x_{2n+1} = -1: the
/// combined coefficients C^k_ij (k = 0..2n+1) and the closure residuals
/// C^k_ij - C^{k+n}_ij, C^{2n+1}_ij, which must vanish for the restricted
/// function to satisfy a rank n+1 system.
struct ClosureResidual {
  std::size_t k;  // 1..n for the pairing residual, 2n+1 for the last coordinate
  std::size_t i, j;
  RationalFunction value;
};

struct IotaPullback {
  std::size_t n;
  PdeSystem restricted;  // candidate rank n+1 system from the combined coefficients
  std::vector<ClosureResidual> residuals;
  bool closes() const {
    for (const auto& r : residuals)
      if (!r.value.is_zero()) return false;
    return true;
  }
};

/// `p` binds a, b_1..b_{2n+1}, c over a table whose first 2n+1 coordinates
/// are the big system's variables.
inline IotaPullback iota_pullback_data(std::size_t n, const Bindings& p) {
  if (n == 0) throw Error(Errc::InvalidDimension, "n must be at least 1");
  const std::size_t N = 2 * n + 1;
  auto big = build_ed(N, p);
  const auto& vt = big.vars();
  Assignment restrict_to;
  for (std::size_t i = 1; i <= n; ++i) restrict_to.emplace(vt->name(big.coord(n + i)), -RationalFunction::variable(vt, big.coord(i)));
  restrict_to.emplace(vt->name(big.coord(N)), RationalFunction::constant(vt, -1));
  auto combined = [&](std::size_t k, std::size_t i, std::size_t j) {
    RationalFunction s = big.p(k, i, j) + big.p(k, i, j + n) + big.p(k, i + n, j) + big.p(k, i + n, j + n);
    return reduce(substitute(s, restrict_to));
  };
  std::vector<std::size_t> coords(big.coords().begin(), big.coords().begin() + n);
  IotaPullback out{n, PdeSystem("iota_pullback", Form::D, vt, coords, true), {}};
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j) {
      out.restricted.set(0, i, j, combined(0, i, j));
      for (std::size_t k = 1; k <= n; ++k) {
        auto ck = combined(k, i, j);
        out.restricted.set(k, i, j, ck);
        out.residuals.push_back({k, i, j, ck - combined(k + n, i, j)});
      }
      out.residuals.push_back({N, i, j, combined(N, i, j)});
    }
  return out;
}

/// Throws ConditionFailure (with the first nonzero residual) when the
/// restriction does not close.
inline PdeSystem pullback_iota(std::size_t n, const Bindings& p) {
  auto data = iota_pullback_data(n, p);
  for (const auto& r : data.residuals)
    if (!r.value.is_zero())
      throw Error(Errc::ConditionFailure, "closure residual [" + std::to_string(r.k) + "][" + std::to_string(r.i) + "][" + std::to_string(r.j) +
                                              "] = " + print_expr(r.value));
  data.restricted.set_name("script_E");
  return data.restricted;
}

/// Parameter conditions: the coefficients (with respect to the coordinates)
/// of every residual numerator, made monic and deduplicated.
inline std::vector<Polynomial> closure_conditions(const std::vector<ClosureResidual>& residuals) {
  std::vector<Polynomial> out;
  for (const auto& r : residuals) {
    if (r.value.is_zero()) continue;
    const auto& vt = r.value.vars();
    for (auto& [mono, coef] : r.value.num().coefficients_in(vt->coordinates())) {
      (void)mono;
      Polynomial c = coef;
      c.make_monic();
      if (std::none_of(out.begin(), out.end(), [&](const Polynomial& q) { return q == c; })) out.push_back(std::move(c));
    }
  }
  std::sort(out.begin(), out.end(), [](const Polynomial& a, const Polynomial& b) { return compare_polys(a, b) < 0; });
  return out;
}

/// Rank of a list of polynomials of total degree <= 1 viewed as affine
/// vectors; nullopt if any is nonlinear.
inline std::optional<std::size_t> affine_rank(const std::vector<Polynomial>& polys) {
  if (polys.empty()) return 0;
  const auto& vt = polys[0].vars();
  const std::size_t w = vt->size() + 1;
  std::vector<std::vector<Rational>> rows;
  for (const auto& p : polys) {
    if (p.total_degree() > 1) return std::nullopt;
    std::vector<Rational> row(w, Rational(0));
    for (const auto& t : p.terms()) {
      if (t.mono.deg == 0) {
        row[w - 1] = t.coeff;
        continue;
      }
      for (std::size_t v = 0; v < vt->size(); ++v)
        if (t.mono.exp[v]) row[v] = t.coeff;
    }
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < w && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t cc = 0; cc < w; ++cc) rows[r][cc] -= f * rows[rank][cc];
    }
    ++rank;
  }
  return rank;
}

/// y_j = x_j^m. Coefficients move to `target` (the system's coordinates are
/// replaced positionally by the first n coordinates of `target`, parameters
/// by name); D^x = m D^y scales first-order terms by m and p^0 by m^2.
inline PdeSystem dform_power_subst(const PdeSystem& sys, unsigned m, const VarTablePtr& target) {
  if (sys.form() != Form::D) throw Error(Errc::WrongForm, "dform_power_subst needs a D-form system");
  if (m == 0) throw Error(Errc::InvalidArgument, "power must be positive");
  auto coords = detail::leading_coords(target, sys.n());
  Assignment y;
  for (std::size_t i = 1; i <= sys.n(); ++i)
    y.emplace(sys.vars()->name(sys.coord(i)), RationalFunction(Polynomial::variable(target, coords[i - 1], m)));
  PdeSystem out(sys.name(), Form::D, target, coords, sys.has_zeroth());
  for (std::size_t k = sys.has_zeroth() ? 0 : 1; k <= sys.n(); ++k)
    for (std::size_t i = 1; i <= sys.n(); ++i)
      for (std::size_t j = i; j <= sys.n(); ++j) {
        auto v = substitute(sys.p(k, i, j), target, y);
        out.set(k, i, j, v * Rational(k == 0 ? m * m : m));
      }
  return out;
}

/// D_iD_j = x_ix_j d_id_j (i != j), D_i^2 = x_i^2 d_i^2 + x_i d_i.
inline PdeSystem dform_to_pform(const PdeSystem& sys) {
  if (sys.form() != Form::D) throw Error(Errc::WrongForm, "dform_to_pform needs a D-form system");
  const auto& vt = sys.vars();
  PdeSystem out(sys.name(), Form::Partial, vt, sys.coords(), sys.has_zeroth());
  auto x = [&](std::size_t i) { return RationalFunction::variable(vt, sys.coord(i)); };
  for (std::size_t i = 1; i <= sys.n(); ++i)
    for (std::size_t j = i; j <= sys.n(); ++j) {
      auto inv = (x(i) * x(j)).inverse();
      if (sys.has_zeroth()) out.set(0, i, j, sys.p(0, i, j) * inv);
      for (std::size_t k = 1; k <= sys.n(); ++k) {
        auto v = sys.p(k, i, j) * x(k);
        if (i == j && k == i) v -= x(i);
        out.set(k, i, j, v * inv);
      }
    }
  return out;
}

inline PdeSystem pform_to_dform(const PdeSystem& sys) {
  if (sys.form() != Form::Partial) throw Error(Errc::WrongForm, "pform_to_dform needs a partial-form system");
  if (!sys.frame().empty()) throw Error(Errc::WrongForm, "system lives on a derived frame");
  const auto& vt = sys.vars();
  PdeSystem out(sys.name(), Form::D, vt, sys.coords(), sys.has_zeroth());
  auto x = [&](std::size_t i) { return RationalFunction::variable(vt, sys.coord(i)); };
  for (std::size_t i = 1; i <= sys.n(); ++i)
    for (std::size_t j = i; j <= sys.n(); ++j) {
      auto xx = x(i) * x(j);
      if (sys.has_zeroth()) out.set(0, i, j, sys.p(0, i, j) * xx);
      for (std::size_t k = 1; k <= sys.n(); ++k) {
        auto v = sys.p(k, i, j) * xx / x(k);
        if (i == j && k == i) v = v + Rational(1);
        out.set(k, i, j, v);
      }
    }
  return out;
}

/// Second-order chain rule for z = f(x). With J = dz/dx, H^i_ab the second
/// partials of z_i and M = J^{-1}:
///   d_{z_k} d_{z_l} v = sum_i B^i_kl d_{z_i} v + B^0_kl v,
///   B^i_kl = sum_ab M_ak M_bl (sum_c A^c_ab J_ic - H^i_ab),
///   B^0_kl = sum_ab M_ak M_bl A^0_ab.
/// Coefficients stay functions of x; the frame d_{z_j} = sum_a M_aj d_a is
/// attached for later differentiation.
inline PdeSystem change_coordinates_pform(const PdeSystem& sys, const RationalMap& map, std::uint64_t seed = 1) {
  if (sys.form() != Form::Partial || !sys.frame().empty()) throw Error(Errc::WrongForm, "change_coordinates_pform needs a plain partial-form system");
  const std::size_t n = sys.n();
  if (map.components.size() != n || map.source.size() != n || map.source != sys.coords())
    throw Error(Errc::ShapeMismatch, "map must be square over the system's coordinates");
  if (!sys.has_zeroth()) throw Error(Errc::MissingZerothOrder, "coordinate change needs zeroth-order coefficients");
  const auto& vt = sys.vars();
  require_same_table(map.vars, vt);
  auto J = map.jacobian();
  auto Minv = detail::invert(J);
  if (!Minv) throw Error(Errc::SingularJacobian, "Jacobian of the coordinate change is singular");
  const auto& M = *Minv;  // M[a][k]
  auto zero = detail::rf_zero(vt);

  // R^i_ab and A^0_ab, symmetric in (a, b)
  std::vector<RfMatrix> R(n + 1, RfMatrix(n + 1, std::vector<RationalFunction>(n + 1, zero)));
  for (std::size_t a = 1; a <= n; ++a)
    for (std::size_t b = a; b <= n; ++b) {
      R[0][a][b] = R[0][b][a] = sys.p(0, a, b);
      for (std::size_t i = 1; i <= n; ++i) {
        RationalFunction s = -diff(J[i - 1][a - 1], sys.coord(b));
        for (std::size_t c = 1; c <= n; ++c) {
          const auto& ac = sys.p(c, a, b);
          if (!ac.is_zero() && !J[i - 1][c - 1].is_zero()) s += ac * J[i - 1][c - 1];
        }
        R[i][a][b] = R[i][b][a] = s;
      }
    }
  PdeSystem out(sys.name() + "_pushforward", Form::Partial, vt, sys.coords(), true);
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t l = k; l <= n; ++l) {
      // W_ab = M_ak M_bl + M_al M_bk over a <= b halves the work
      std::vector<std::vector<std::optional<RationalFunction>>> W(n + 1, std::vector<std::optional<RationalFunction>>(n + 1));
      for (std::size_t a = 1; a <= n; ++a)
        for (std::size_t b = a; b <= n; ++b) {
          RationalFunction w = M[a - 1][k - 1] * M[b - 1][l - 1];
          if (a != b) w += M[a - 1][l - 1] * M[b - 1][k - 1];
          if (!w.is_zero()) W[a][b] = std::move(w);
        }
      for (std::size_t i = 0; i <= n; ++i) {
        RationalFunction s = zero;
        for (std::size_t a = 1; a <= n; ++a)
          for (std::size_t b = a; b <= n; ++b)
            if (W[a][b] && !R[i][a][b].is_zero()) s += *W[a][b] * R[i][a][b];
        out.set(i, k, l, reduce(s));
      }
    }
  RfMatrix frame(n, std::vector<RationalFunction>(n, zero));
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t a = 1; a <= n; ++a) frame[j - 1][a - 1] = M[a - 1][j - 1];
  out.set_frame(std::move(frame));

  // Closure: the transformed connection must stay flat wherever the source
  // is flat (checked at one random point).
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-60, 60), den(7, 61);
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::vector<Rational> pt;
    for (std::size_t v = 0; v < vt->size(); ++v) {
      Rational r(num(rng), den(rng));
      r.canonicalize();
      pt.push_back(r);
    }
    try {
      auto src = integrability_residual_at(sys, pt);
      bool flat = std::all_of(src.begin(), src.end(), [](const auto& e) { return e.value == 0; });
      if (!flat) break;
      for (const auto& e : integrability_residual_at(out, pt))
        if (e.value != 0) throw Error(Errc::ClosureFailure, "transformed system is not flat at a sample point where the source is");
      break;
    } catch (const Error& e) {
      if (e.code() != Errc::PoleAtPoint) throw;
    }
  }
  return out;
}

struct RegularityReport {
  bool regular = true;
  std::optional<CoefficientDiff> witness;  // the offending coefficient
  explicit operator bool() const noexcept { return regular; }
};

/// True iff no reduced coefficient of the partial-form system has the
/// hypersurface among its denominator factors.
inline RegularityReport regularity_check(const PdeSystem& sys, Polynomial hypersurface) {
  if (sys.form() != Form::Partial) throw Error(Errc::WrongForm, "regularity_check needs a partial-form system");
  hypersurface.make_monic();
  RegularityReport out;
  for (std::size_t k = sys.has_zeroth() ? 0 : 1; k <= sys.n(); ++k)
    for (std::size_t i = 1; i <= sys.n(); ++i)
      for (std::size_t j = i; j <= sys.n(); ++j) {
        auto r = reduce(sys.p(k, i, j));
        for (const auto& d : r.den_factors())
          if (d.poly == hypersurface) {
            out.regular = false;
            out.witness = CoefficientDiff{k, i, j, print_expr(r), to_string(hypersurface)};
            return out;
          }
      }
  return out;
}

}  // namespace lauricella
