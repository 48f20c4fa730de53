#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lauricella/error.hpp"
#include "lauricella/rational.hpp"
#include "lauricella/var_table.hpp"

namespace lauricella {

/// Dense exponent vector plus cached total degree.
struct Monomial {
  std::array<std::uint16_t, VarTable::kMaxVars> exp{};
  std::uint32_t deg = 0;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded lexicographic comparison; earlier variables weigh more.
inline int compare(const Monomial& a, const Monomial& b) {
  if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
  for (std::size_t i = 0; i < VarTable::kMaxVars; ++i)
    if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? -1 : 1;
  return 0;
}

struct MonomialGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto e : m.exp) {
      h ^= e;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

inline Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t i = 0; i < VarTable::kMaxVars; ++i) {
    std::uint32_t e = std::uint32_t{a.exp[i]} + b.exp[i];
    if (e > 0xFFFF) throw Error(Errc::InvalidArgument, "exponent overflow");
    r.exp[i] = static_cast<std::uint16_t>(e);
  }
  r.deg = a.deg + b.deg;
  return r;
}

inline bool divides(const Monomial& d, const Monomial& m) {
  if (d.deg > m.deg) return false;
  for (std::size_t i = 0; i < VarTable::kMaxVars; ++i)
    if (d.exp[i] > m.exp[i]) return false;
  return true;
}

inline Monomial operator/(const Monomial& m, const Monomial& d) {
  Monomial r;
  for (std::size_t i = 0; i < VarTable::kMaxVars; ++i) r.exp[i] = static_cast<std::uint16_t>(m.exp[i] - d.exp[i]);
  r.deg = m.deg - d.deg;
  return r;
}

struct Term {
  Monomial mono;
  Rational coeff;
};

/// Sparse polynomial over Q. Terms are kept sorted by descending graded-lex
/// order with no zero coefficients, so the zero polynomial is the empty list.
class Polynomial {
 public:
  explicit Polynomial(VarTablePtr vars) : vars_(std::move(vars)) {}

  static Polynomial constant(VarTablePtr vars, const Rational& c) {
    Polynomial p(std::move(vars));
    if (c != 0) p.terms_.push_back({Monomial{}, c});
    return p;
  }

  static Polynomial variable(VarTablePtr vars, std::size_t index, std::uint16_t power = 1) {
    if (index >= vars->size()) throw Error(Errc::InvalidArgument, "variable index out of range");
    Polynomial p(std::move(vars));
    Monomial m;
    m.exp[index] = power;
    m.deg = power;
    p.terms_.push_back({m, Rational(1)});
    return p;
  }

  static Polynomial variable(const VarTablePtr& vars, std::string_view name) {
    return variable(vars, vars->index_of(name));
  }

  static Polynomial monomial(VarTablePtr vars, const Monomial& m, const Rational& c) {
    Polynomial p(std::move(vars));
    if (c != 0) p.terms_.push_back({m, c});
    return p;
  }

  /// Builds from arbitrary (unsorted, possibly repeated) terms.
  static Polynomial from_terms(VarTablePtr vars, std::vector<Term> terms) {
    Polynomial p(std::move(vars));
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coeff += t.coeff;
        if (p.terms_.back().coeff == 0) p.terms_.pop_back();
      } else if (t.coeff != 0) {
        p.terms_.push_back(std::move(t));
      }
    }
    return p;
  }

  const VarTablePtr& vars() const noexcept { return vars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.deg == 0); }
  Rational constant_value() const {
    if (terms_.empty()) return 0;
    const auto& last = terms_.back();
    return last.mono.deg == 0 ? last.coeff : Rational(0);
  }
  const Term& leading() const { return terms_.front(); }
  const Rational& leading_coefficient() const { return terms_.front().coeff; }
  std::uint32_t total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.deg; }
  std::uint32_t low_degree() const {
    std::uint32_t d = UINT32_MAX;
    for (const auto& t : terms_) d = std::min(d, t.mono.deg);
    return terms_.empty() ? 0 : d;
  }

  std::uint32_t degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max<std::uint32_t>(d, t.mono.exp[var]);
    return d;
  }
  std::uint32_t min_degree_in(std::size_t var) const {
    std::uint32_t d = UINT32_MAX;
    for (const auto& t : terms_) d = std::min<std::uint32_t>(d, t.mono.exp[var]);
    return terms_.empty() ? 0 : d;
  }
  bool depends_on(std::size_t var) const {
    return std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mono.exp[var] != 0; });
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    require_same_table(a.vars_, b.vars_);
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    return true;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }
  Polynomial& operator+=(const Polynomial& b) { return *this = merge(*this, b, false); }
  Polynomial& operator-=(const Polynomial& b) { return *this = merge(*this, b, true); }

  friend Polynomial operator*(const Polynomial& a, const Rational& c) {
    Polynomial r(a.vars_);
    if (c == 0) return r;
    r.terms_.reserve(a.terms_.size());
    for (const auto& t : a.terms_) r.terms_.push_back({t.mono, t.coeff * c});
    return r;
  }
  friend Polynomial operator*(const Rational& c, const Polynomial& a) { return a * c; }

  /// Multiplication by a single term keeps the order.
  Polynomial times_term(const Monomial& m, const Rational& c) const {
    Polynomial r(vars_);
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    require_same_table(a.vars_, b.vars_);
    if (a.is_zero() || b.is_zero()) return Polynomial(a.vars_);
    const Polynomial& small = a.size() <= b.size() ? a : b;
    const Polynomial& big = a.size() <= b.size() ? b : a;
    if (small.size() <= 12) {
      Polynomial r = big.times_term(small.terms_[0].mono, small.terms_[0].coeff);
      for (std::size_t i = 1; i < small.size(); ++i)
        r = merge(r, big.times_term(small.terms_[i].mono, small.terms_[i].coeff), false);
      r.vars_ = a.vars_;
      return r;
    }
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(std::min<std::size_t>(a.size() * b.size(), 1u << 22));
    Rational prod;
    for (const auto& s : small.terms_) {
      for (const auto& t : big.terms_) {
        mpq_mul(prod.get_mpq_t(), s.coeff.get_mpq_t(), t.coeff.get_mpq_t());
        auto [it, inserted] = acc.try_emplace(s.mono * t.mono);
        if (inserted)
          it->second = prod;
        else
          it->second += prod;
      }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (c != 0) terms.push_back({m, std::move(c)});
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return compare(x.mono, y.mono) > 0; });
    Polynomial r(a.vars_);
    r.terms_ = std::move(terms);
    return r;
  }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(vars_, 1);
    Polynomial base = *this;
    while (e) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Exact quotient when d divides *this, nullopt otherwise.
  std::optional<Polynomial> divide_exact(const Polynomial& d) const {
    require_same_table(vars_, d.vars_);
    if (d.is_zero()) throw Error(Errc::DivisionByZeroFunction, "polynomial division by zero");
    if (is_zero()) return Polynomial(vars_);
    if (d.total_degree() > total_degree()) return std::nullopt;
    const Term& lead = d.leading();
    if (d.size() == 1) {
      Polynomial q(vars_);
      q.terms_.reserve(terms_.size());
      for (const auto& t : terms_) {
        if (!divides(lead.mono, t.mono)) return std::nullopt;
        q.terms_.push_back({t.mono / lead.mono, t.coeff / lead.coeff});
      }
      return q;
    }
    for (std::size_t v = 0; v < vars_->size(); ++v)
      if (d.degree_in(v) > degree_in(v)) return std::nullopt;
    std::map<Monomial, Rational, MonomialGreater> rem;
    for (const auto& t : terms_) rem.emplace_hint(rem.end(), t.mono, t.coeff);
    std::vector<Term> quotient;
    Rational qc, delta;
    while (!rem.empty()) {
      auto top = rem.begin();
      if (!divides(lead.mono, top->first)) return std::nullopt;
      Monomial qm = top->first / lead.mono;
      qc = top->second / lead.coeff;
      rem.erase(top);
      for (std::size_t i = 1; i < d.terms_.size(); ++i) {
        const auto& dt = d.terms_[i];
        mpq_mul(delta.get_mpq_t(), qc.get_mpq_t(), dt.coeff.get_mpq_t());
        auto [it, inserted] = rem.try_emplace(qm * dt.mono);
        if (inserted) {
          it->second = -delta;
        } else {
          it->second -= delta;
          if (it->second == 0) rem.erase(it);
        }
      }
      quotient.push_back({qm, qc});
    }
    Polynomial q(vars_);
    q.terms_ = std::move(quotient);
    return q;
  }

  Rational eval(const std::vector<Rational>& point) const {
    if (point.size() != vars_->size()) throw Error(Errc::InvalidArgument, "evaluation point has wrong arity");
    if (terms_.empty()) return Rational(0);
    // Integer arithmetic over a common denominator: with x_v = n_v/d_v and
    // E_v the top exponent of v, each monomial becomes prod n_v^e d_v^(E_v-e).
    std::vector<unsigned> top(point.size(), 0);
    Integer lcm = 1;
    for (const auto& t : terms_) {
      for (std::size_t v = 0; v < point.size(); ++v) top[v] = std::max<unsigned>(top[v], t.mono.exp[v]);
      const auto& d = t.coeff.get_den();
      if (d != 1 && !mpz_divisible_p(lcm.get_mpz_t(), d.get_mpz_t())) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
    }
    std::vector<std::vector<Integer>> npow(point.size()), dpow(point.size());
    Integer den = lcm;
    for (std::size_t v = 0; v < point.size(); ++v) {
      if (!top[v]) continue;
      npow[v].assign(top[v] + 1, Integer(1));
      dpow[v].assign(top[v] + 1, Integer(1));
      for (unsigned e = 1; e <= top[v]; ++e) {
        npow[v][e] = npow[v][e - 1] * point[v].get_num();
        dpow[v][e] = dpow[v][e - 1] * point[v].get_den();
      }
      den *= dpow[v][top[v]];
    }
    Integer sum = 0, term;
    for (const auto& t : terms_) {
      mpz_divexact(term.get_mpz_t(), lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
      term *= t.coeff.get_num();
      for (std::size_t v = 0; v < point.size(); ++v) {
        if (!top[v]) continue;
        const unsigned e = t.mono.exp[v];
        if (e) term *= npow[v][e];
        if (e != top[v]) term *= dpow[v][top[v] - e];
      }
      sum += term;
    }
    Rational out(sum, den);
    out.canonicalize();
    return out;
  }

  /// Evaluation in Z/p; nullopt when some coefficient has a denominator divisible by p.
  std::optional<std::uint64_t> eval_mod(const std::vector<std::uint64_t>& point) const {
    std::vector<std::vector<std::uint64_t>> powers(point.size());
    // Sum of n_t m_t / d_t: numerators and denominators are reduced first so
    // that a single modular inverse serves every term (batch inversion).
    std::vector<std::uint64_t> num(terms_.size()), den(terms_.size()), prefix(terms_.size() + 1, 1);
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      const auto& q = terms_[t].coeff;
      den[t] = mpz_fdiv_ui(q.get_den_mpz_t(), modp::kPrime);
      if (den[t] == 0) return std::nullopt;
      std::uint64_t term = mpz_fdiv_ui(q.get_num_mpz_t(), modp::kPrime);
      for (std::size_t v = 0; v < point.size(); ++v) {
        auto e = terms_[t].mono.exp[v];
        if (!e) continue;
        auto& pw = powers[v];
        if (pw.empty()) pw.push_back(1);
        while (pw.size() <= e) pw.push_back(modp::mul(pw.back(), point[v]));
        term = modp::mul(term, pw[e]);
      }
      num[t] = term;
      prefix[t + 1] = modp::mul(prefix[t], den[t]);
    }
    std::uint64_t inv = modp::inv(prefix.back()), sum = 0;
    for (std::size_t t = terms_.size(); t-- > 0;) {
      sum = modp::add(sum, modp::mul(num[t], modp::mul(inv, prefix[t])));
      inv = modp::mul(inv, den[t]);
    }
    return sum;
  }

  /// Formal partial derivative with respect to a coordinate variable.
  friend Polynomial diff(const Polynomial& p, std::size_t var) {
    if (var >= p.vars_->size() || !p.vars_->is_coordinate(var))
      throw Error(Errc::NotACoordinate,
                  var < p.vars_->size() ? p.vars_->name(var) : std::string("index out of range"));
    return p.partial(var);
  }

  /// Partial derivative without the coordinate check (internal use, e.g. on parameters).
  Polynomial partial(std::size_t var) const {
    Polynomial r(vars_);
    for (const auto& t : terms_) {
      auto e = t.mono.exp[var];
      if (!e) continue;
      Monomial m = t.mono;
      m.exp[var] = static_cast<std::uint16_t>(e - 1);
      m.deg -= 1;
      r.terms_.push_back({m, t.coeff * e});
    }
    // Lowering one exponent preserves graded-lex order among survivors.
    return r;
  }

  /// Re-expresses the polynomial over another table; map[v] is the index in
  /// the target table of source variable v (must exist for used variables).
  Polynomial rebase(const VarTablePtr& target, const std::vector<std::optional<std::size_t>>& map) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      Monomial m;
      for (std::size_t v = 0; v < vars_->size(); ++v) {
        if (!t.mono.exp[v]) continue;
        if (!map[v]) throw Error(Errc::UnknownVariable, vars_->name(v) + " has no image in target table");
        m.exp[*map[v]] = static_cast<std::uint16_t>(m.exp[*map[v]] + t.mono.exp[v]);
      }
      m.deg = t.mono.deg;
      out.push_back({m, t.coeff});
    }
    return from_terms(target, std::move(out));
  }

  /// Splits p = sum_m c_m(other vars) * m(selected vars): key is the monomial in
  /// the selected variables.
  std::vector<std::pair<Monomial, Polynomial>> coefficients_in(const std::vector<std::size_t>& selected) const {
    std::map<Monomial, std::vector<Term>, MonomialGreater> groups;
    for (const auto& t : terms_) {
      Monomial key, rest = t.mono;
      for (auto v : selected) {
        key.exp[v] = t.mono.exp[v];
        key.deg += t.mono.exp[v];
        rest.exp[v] = 0;
      }
      rest.deg -= key.deg;
      groups[key].push_back({rest, t.coeff});
    }
    std::vector<std::pair<Monomial, Polynomial>> out;
    for (auto& [k, ts] : groups) out.emplace_back(k, from_terms(vars_, std::move(ts)));
    return out;
  }

  /// Points the polynomial at an equal table (e.g. an owning handle).
  void rebind(const VarTablePtr& vars) {
    require_same_table(vars_, vars);
    vars_ = vars;
  }

  /// Scales so that the leading coefficient is 1; returns the removed factor.
  Rational make_monic() {
    if (is_zero()) return 1;
    Rational lc = terms_.front().coeff;
    for (auto& t : terms_) t.coeff /= lc;
    return lc;
  }

 private:
  static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
    require_same_table(a.vars_, b.vars_);
    Polynomial r(a.vars_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      int c;
      if (i == a.terms_.size())
        c = -1;
      else if (j == b.terms_.size())
        c = 1;
      else
        c = compare(a.terms_[i].mono, b.terms_[j].mono);
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        const auto& t = b.terms_[j++];
        r.terms_.push_back({t.mono, subtract ? Rational(-t.coeff) : t.coeff});
      } else {
        Rational s = subtract ? Rational(a.terms_[i].coeff - b.terms_[j].coeff)
                              : Rational(a.terms_[i].coeff + b.terms_[j].coeff);
        if (s != 0) r.terms_.push_back({a.terms_[i].mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    return r;
  }

  VarTablePtr vars_;
  std::vector<Term> terms_;
};

inline Polynomial exact_div(const Polynomial& p, const Polynomial& d) {
  auto q = p.divide_exact(d);
  if (!q) throw Error(Errc::InexactDivision, "divisor does not divide dividend");
  return *q;
}

/// Euler operator v * d/dv.
inline Polynomial euler(const Polynomial& p, std::size_t var) {
  return diff(p, var) * Polynomial::variable(p.vars(), var);
}

}  // namespace lauricella
