#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "lauricella/factor_candidates.hpp"
#include "lauricella/polynomial.hpp"

namespace lauricella {

/// Ordering on polynomials used to sort denominator factors deterministically.
inline int compare_polys(const Polynomial& a, const Polynomial& b) {
  if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree() ? -1 : 1;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int c = compare(a.terms()[i].mono, b.terms()[i].mono);
    if (c) return -c;
    int d = cmp(a.terms()[i].coeff, b.terms()[i].coeff);
    if (d) return d < 0 ? -1 : 1;
  }
  return 0;
}

struct DenFactor {
  Polynomial poly;  // monic, non-constant
  int mult;
};

/// Splits p into unit * prod(factors^mult) using the candidate set of its
/// table; whatever does not split is kept as one residual monic factor.
inline std::pair<Rational, std::vector<DenFactor>> factorize(Polynomial p) {
  if (p.is_zero()) throw Error(Errc::DivisionByZeroFunction, "factorization of the zero polynomial");
  std::vector<DenFactor> out;
  const auto& vt = p.vars();
  if (!p.is_constant()) {
    for (const auto& cand : candidate_factors(vt)) {
      if (cand.poly.total_degree() > p.total_degree()) continue;
      int mult = 0;
      while (!p.is_constant() && may_divide(cand.poly, cand.split, p)) {
        auto q = p.divide_exact(cand.poly);
        if (!q) break;
        p = std::move(*q);
        ++mult;
      }
      if (mult) {
        Polynomial f = cand.poly;
        f.rebind(vt);
        out.push_back({std::move(f), mult});
      }
      if (p.is_constant()) break;
    }
  }
  Rational unit = p.make_monic();
  if (!p.is_constant()) out.push_back({std::move(p), 1});
  std::sort(out.begin(), out.end(), [](const DenFactor& a, const DenFactor& b) { return compare_polys(a.poly, b.poly) < 0; });
  return {unit, std::move(out)};
}

/// Quotient num/den of polynomials with the denominator kept as a product of
/// monic factors. Operations return values reduced against their own
/// denominator factors; equality is still decided by cross-multiplication.
class RationalFunction {
 public:
  explicit RationalFunction(Polynomial num) : num_(std::move(num)) {}

  RationalFunction(const Polynomial& num, const Polynomial& den) : num_(num.vars()) {
    require_same_table(num.vars(), den.vars());
    if (den.is_zero()) throw Error(Errc::DivisionByZeroFunction, "zero denominator");
    auto [unit, factors] = factorize(den);
    *this = reduced(num * Rational(1 / unit), std::move(factors));
  }

  static RationalFunction constant(const VarTablePtr& vt, const Rational& c) {
    return RationalFunction(Polynomial::constant(vt, c));
  }
  static RationalFunction variable(const VarTablePtr& vt, std::size_t i) {
    return RationalFunction(Polynomial::variable(vt, i));
  }
  static RationalFunction variable(const VarTablePtr& vt, std::string_view name) {
    return RationalFunction(Polynomial::variable(vt, name));
  }

  /// Builds from a numerator and already-factored denominator and cancels.
  static RationalFunction reduced(Polynomial num, std::vector<DenFactor> den) {
    RationalFunction r(std::move(num));
    if (r.num_.is_zero()) return r;
    for (auto& f : den) {
      auto split = f.poly.size() == 1 ? std::nullopt : linear_split(f.poly);
      while (f.mult > 0 && may_divide(f.poly, split, r.num_)) {
        auto q = r.num_.divide_exact(f.poly);
        if (!q) break;
        r.num_ = std::move(*q);
        --f.mult;
      }
      if (f.mult > 0) r.den_.push_back(std::move(f));
    }
    std::sort(r.den_.begin(), r.den_.end(),
              [](const DenFactor& a, const DenFactor& b) { return compare_polys(a.poly, b.poly) < 0; });
    return r;
  }

  const VarTablePtr& vars() const noexcept { return num_.vars(); }
  const Polynomial& num() const noexcept { return num_; }
  const std::vector<DenFactor>& den_factors() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.empty(); }
  bool is_constant() const noexcept { return den_.empty() && num_.is_constant(); }
  Rational constant_value() const { return num_.constant_value(); }

  Polynomial den() const {
    Polynomial d = Polynomial::constant(vars(), 1);
    for (const auto& f : den_) d = d * f.poly.pow(static_cast<unsigned>(f.mult));
    return d;
  }

  RationalFunction operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RationalFunction operator+(const RationalFunction& f, const RationalFunction& g) { return combine(f, g, false); }
  friend RationalFunction operator-(const RationalFunction& f, const RationalFunction& g) { return combine(f, g, true); }
  RationalFunction& operator+=(const RationalFunction& g) { return *this = combine(*this, g, false); }
  RationalFunction& operator-=(const RationalFunction& g) { return *this = combine(*this, g, true); }

  friend RationalFunction operator*(const RationalFunction& f, const RationalFunction& g) {
    require_same_table(f.vars(), g.vars());
    if (f.is_zero() || g.is_zero()) return RationalFunction(Polynomial(f.vars()));
    if (f.is_constant()) return g * f.constant_value();
    if (g.is_constant()) return f * g.constant_value();
    // Cancel each side's numerator against the other side's denominator first.
    auto fd = f.den_;
    auto gd = g.den_;
    Polynomial fn = cancel_into(f.num_, gd);
    Polynomial gn = cancel_into(g.num_, fd);
    RationalFunction r(fn * gn);
    r.den_ = merge_factors(fd, gd, [](int a, int b) { return a + b; });
    return r;
  }
  RationalFunction& operator*=(const RationalFunction& g) { return *this = *this * g; }

  friend RationalFunction operator*(const RationalFunction& f, const Rational& c) {
    if (c == 0) return RationalFunction(Polynomial(f.vars()));
    RationalFunction r = f;
    r.num_ = r.num_ * c;
    return r;
  }
  friend RationalFunction operator*(const Rational& c, const RationalFunction& f) { return f * c; }
  friend RationalFunction operator/(const RationalFunction& f, const Rational& c) {
    if (c == 0) throw Error(Errc::DivisionByZeroFunction, "division by the zero constant");
    return f * Rational(1 / c);
  }

  RationalFunction inverse() const {
    if (is_zero()) throw Error(Errc::DivisionByZeroFunction, "inverse of the zero function");
    auto [unit, factors] = factorize(num_);
    RationalFunction r(den() * Rational(1 / unit));
    r.den_ = std::move(factors);
    return r;
  }

  friend RationalFunction operator/(const RationalFunction& f, const RationalFunction& g) {
    require_same_table(f.vars(), g.vars());
    if (g.is_zero()) throw Error(Errc::DivisionByZeroFunction, "division by the zero function");
    if (g.is_constant()) return f / g.constant_value();
    return f * g.inverse();
  }
  RationalFunction& operator/=(const RationalFunction& g) { return *this = *this / g; }

  RationalFunction pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    RationalFunction r = constant(vars(), 1);
    RationalFunction base = *this;
    unsigned u = static_cast<unsigned>(e);
    while (u) {
      if (u & 1) r = r * base;
      u >>= 1;
      if (u) base = base * base;
    }
    return r;
  }

  /// f == g iff f.num*g.den - g.num*f.den vanishes. Common denominator
  /// factors are divided out of both products first.
  friend bool equal(const RationalFunction& f, const RationalFunction& g) {
    require_same_table(f.vars(), g.vars());
    if (same_factors(f.den_, g.den_)) return f.num_ == g.num_;
    if (f.is_zero() || g.is_zero()) return f.is_zero() && g.is_zero();
    auto lcm = merge_factors(f.den_, g.den_, [](int a, int b) { return std::max(a, b); });
    return f.num_ * cofactor(lcm, f.den_, f.vars()) == g.num_ * cofactor(lcm, g.den_, g.vars());
  }

  Rational eval(const std::vector<Rational>& point) const {
    Rational d = 1;
    for (const auto& f : den_) {
      Rational v = f.poly.eval(point);
      if (v == 0) throw Error(Errc::PoleAtPoint, "denominator vanishes at evaluation point");
      Rational p = 1;
      for (int i = 0; i < f.mult; ++i) p *= v;
      d *= p;
    }
    return num_.eval(point) / d;
  }

  /// Exact partial derivative with respect to a coordinate.
  friend RationalFunction diff(const RationalFunction& f, std::size_t var) {
    Polynomial dn = diff(f.num_, var);
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < f.den_.size(); ++k)
      if (f.den_[k].poly.depends_on(var)) active.push_back(k);
    if (active.empty()) {
      RationalFunction r(dn);
      r.den_ = f.den_;
      return reduced(std::move(r.num_), std::move(r.den_));
    }
    // d(N/prod h^m) = (N' G - N sum m_k h_k' G/h_k) / (prod h^m * G), G = prod of active h_k.
    const auto& vt = f.vars();
    Polynomial g = Polynomial::constant(vt, 1);
    for (auto k : active) g = g * f.den_[k].poly;
    Polynomial sum(vt);
    for (auto k : active) {
      Polynomial rest = Polynomial::constant(vt, 1);
      for (auto l : active)
        if (l != k) rest = rest * f.den_[l].poly;
      sum += diff(f.den_[k].poly, var) * rest * Rational(f.den_[k].mult);
    }
    Polynomial num = dn * g - f.num_ * sum;
    auto den = f.den_;
    for (auto k : active) den[k].mult += 1;
    return reduced(std::move(num), std::move(den));
  }

  /// Rebinds to an equal table.
  void rebind(const VarTablePtr& vt) {
    num_.rebind(vt);
    for (auto& f : den_) f.poly.rebind(vt);
  }

 private:
  template <typename Op>
  static std::vector<DenFactor> merge_factors(const std::vector<DenFactor>& a, const std::vector<DenFactor>& b, Op op) {
    std::vector<DenFactor> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      int c = i == a.size() ? 1 : j == b.size() ? -1 : compare_polys(a[i].poly, b[j].poly);
      if (c < 0) {
        out.push_back({a[i].poly, op(a[i].mult, 0)});
        ++i;
      } else if (c > 0) {
        out.push_back({b[j].poly, op(0, b[j].mult)});
        ++j;
      } else {
        out.push_back({a[i].poly, op(a[i].mult, b[j].mult)});
        ++i;
        ++j;
      }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const DenFactor& f) { return f.mult <= 0; }), out.end());
    return out;
  }

  static bool same_factors(const std::vector<DenFactor>& a, const std::vector<DenFactor>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].mult != b[i].mult || compare_polys(a[i].poly, b[i].poly) != 0) return false;
    return true;
  }

  /// prod over lcm of h^(lcm_mult - own_mult).
  static Polynomial cofactor(const std::vector<DenFactor>& lcm, const std::vector<DenFactor>& own, const VarTablePtr& vt) {
    Polynomial c = Polynomial::constant(vt, 1);
    std::size_t j = 0;
    for (const auto& f : lcm) {
      int have = 0;
      while (j < own.size() && compare_polys(own[j].poly, f.poly) < 0) ++j;
      if (j < own.size() && compare_polys(own[j].poly, f.poly) == 0) have = own[j].mult;
      for (int e = have; e < f.mult; ++e) c = c * f.poly;
    }
    return c;
  }

  /// Divides num by den factors as far as possible, lowering their multiplicity.
  static Polynomial cancel_into(Polynomial num, std::vector<DenFactor>& den) {
    for (auto& f : den) {
      bool monomial = f.poly.size() == 1;
      auto split = monomial ? std::nullopt : linear_split(f.poly);
      while (f.mult > 0 && may_divide(f.poly, split, num)) {
        auto q = num.divide_exact(f.poly);
        if (!q) break;
        num = std::move(*q);
        --f.mult;
      }
    }
    den.erase(std::remove_if(den.begin(), den.end(), [](const DenFactor& f) { return f.mult <= 0; }), den.end());
    return num;
  }

  static RationalFunction combine(const RationalFunction& f, const RationalFunction& g, bool subtract) {
    require_same_table(f.vars(), g.vars());
    if (g.is_zero()) return f;
    if (f.is_zero()) return subtract ? -g : g;
    if (same_factors(f.den_, g.den_)) {
      Polynomial n = subtract ? f.num_ - g.num_ : f.num_ + g.num_;
      return reduced(std::move(n), f.den_);
    }
    auto lcm = merge_factors(f.den_, g.den_, [](int a, int b) { return std::max(a, b); });
    Polynomial a = f.num_ * cofactor(lcm, f.den_, f.vars());
    Polynomial b = g.num_ * cofactor(lcm, g.den_, g.vars());
    return reduced(subtract ? a - b : a + b, std::move(lcm));
  }

  Polynomial num_;
  std::vector<DenFactor> den_;
};

inline RationalFunction operator+(const RationalFunction& f, const Rational& c) {
  return f + RationalFunction::constant(f.vars(), c);
}
inline RationalFunction operator-(const RationalFunction& f, const Rational& c) {
  return f - RationalFunction::constant(f.vars(), c);
}
inline RationalFunction operator-(const Rational& c, const RationalFunction& f) {
  return RationalFunction::constant(f.vars(), c) - f;
}
inline RationalFunction operator+(const Rational& c, const RationalFunction& f) { return f + c; }

inline RationalFunction euler(const RationalFunction& f, std::size_t var) {
  return diff(f, var) * RationalFunction::variable(f.vars(), var);
}

/// Re-runs cancellation of the numerator against the candidate factors of the
/// denominator, stripping monomial content first. Idempotent.
inline RationalFunction reduce(const RationalFunction& f) {
  if (f.is_zero()) return f;
  // Refactor the denominator so non-candidate residues split where possible.
  std::vector<DenFactor> den;
  Rational unit = 1;
  for (const auto& d : f.den_factors()) {
    auto [u, parts] = factorize(d.poly);
    for (int i = 0; i < d.mult; ++i) unit *= u;
    for (auto& p : parts) den.push_back({std::move(p.poly), p.mult * d.mult});
  }
  std::sort(den.begin(), den.end(), [](const DenFactor& a, const DenFactor& b) { return compare_polys(a.poly, b.poly) < 0; });
  std::vector<DenFactor> merged;
  for (auto& d : den) {
    if (!merged.empty() && compare_polys(merged.back().poly, d.poly) == 0)
      merged.back().mult += d.mult;
    else
      merged.push_back(std::move(d));
  }
  return RationalFunction::reduced(f.num() * Rational(1 / unit), std::move(merged));
}

}  // namespace lauricella
