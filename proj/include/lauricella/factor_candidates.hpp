#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lauricella/polynomial.hpp"

namespace lauricella {

/// A variable in which the polynomial is linear, p = alpha*v + beta. Points on
/// {p = 0} are produced by solving for v.
struct LinearSplit {
  std::size_t var;
  Polynomial alpha;
  Polynomial beta;
};

inline std::optional<LinearSplit> linear_split(const Polynomial& p) {
  const auto& vt = p.vars();
  std::optional<std::size_t> best;
  std::size_t best_alpha_size = 0;
  for (std::size_t v = 0; v < vt->size(); ++v) {
    if (p.degree_in(v) != 1) continue;
    std::size_t alpha_size = 0;
    for (const auto& t : p.terms())
      if (t.mono.exp[v]) ++alpha_size;
    if (!best || alpha_size < best_alpha_size) {
      best = v;
      best_alpha_size = alpha_size;
    }
  }
  if (!best) return std::nullopt;
  std::vector<Term> alpha, beta;
  for (const auto& t : p.terms()) {
    if (t.mono.exp[*best]) {
      Monomial m = t.mono;
      m.exp[*best] = 0;
      m.deg -= 1;
      alpha.push_back({m, t.coeff});
    } else {
      beta.push_back(t);
    }
  }
  return LinearSplit{*best, Polynomial::from_terms(vt, std::move(alpha)), Polynomial::from_terms(vt, std::move(beta))};
}

/// Probabilistic test: false means "certainly not divisible"; true means the
/// dividend vanishes at a random point of {divisor = 0} and exact division is
/// worth attempting.
inline bool may_divide(const Polynomial& divisor, const std::optional<LinearSplit>& split, const Polynomial& p,
                       std::uint64_t seed = 0x5eed) {
  if (p.is_zero()) return true;
  if (divisor.size() == 1) {
    const auto& m = divisor.leading().mono;
    for (std::size_t v = 0; v < p.vars()->size(); ++v)
      if (m.exp[v] && p.min_degree_in(v) < m.exp[v]) return false;
    return true;
  }
  if (!split) return true;
  modp::Rng rng{seed ^ (divisor.size() * 0x9E37u) ^ p.size()};
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<std::uint64_t> point(p.vars()->size());
    for (auto& x : point) x = rng.element();
    auto a = split->alpha.eval_mod(point);
    auto b = split->beta.eval_mod(point);
    if (!a || !b || *a == 0) continue;
    point[split->var] = modp::mul(modp::sub(0, *b), modp::inv(*a));
    auto val = p.eval_mod(point);
    if (!val) return true;
    return *val == 0;
  }
  return true;
}

struct FactorCandidate {
  Polynomial poly;  // monic
  std::optional<LinearSplit> split;
};

namespace detail {

inline Polynomial monic(Polynomial p) {
  p.make_monic();
  return p;
}

// The cache lives inside the table, so candidates hold a non-owning handle;
// copies that escape are rebound to an owning one.
inline std::vector<FactorCandidate> build_candidates(const VarTablePtr& owner) {
  VarTablePtr vt(owner.get(), [](const VarTable*) {});
  std::vector<Polynomial> polys;
  auto coords = vt->coordinates();
  auto one = Polynomial::constant(vt, 1);
  for (auto v : coords) {
    auto x = Polynomial::variable(vt, v);
    polys.push_back(x);
    polys.push_back(x - one);
    polys.push_back(x + one);
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = i + 1; j < coords.size(); ++j) {
      auto a = Polynomial::variable(vt, coords[i]);
      auto b = Polynomial::variable(vt, coords[j]);
      polys.push_back(a - b);
      polys.push_back(a + b);
    }
  }
  // The divisor polynomials of the six-point chart, when its coordinates exist.
  auto z1 = vt->find("z1"), z2 = vt->find("z2"), z3 = vt->find("z3"), z4 = vt->find("z4");
  if (z1 && z2 && z3 && z4 && vt->is_coordinate(*z1)) {
    auto Z1 = Polynomial::variable(vt, *z1), Z2 = Polynomial::variable(vt, *z2);
    auto Z3 = Polynomial::variable(vt, *z3), Z4 = Polynomial::variable(vt, *z4);
    auto d1 = Z1 * Z4 - Z2 * Z3;
    auto d2 = d1 - Z4 + Z2 + Z3 - Z1;
    auto q = -(Z2 * Z3 * Z1) - Z2 * Z3 * Z4 + Z2 * Z3 + Z1 * Z4 * Z2 + Z1 * Z4 * Z3 - Z1 * Z4;
    polys.push_back(d1);
    polys.push_back(d2);
    polys.push_back(q);
  }
  std::vector<FactorCandidate> out;
  for (auto& p : polys) {
    auto m = monic(std::move(p));
    auto s = linear_split(m);
    out.push_back({std::move(m), std::move(s)});
  }
  return out;
}

}  // namespace detail

/// Known irreducible factors for a table: v, v-1, v+1, v-w, v+w over the
/// coordinates, plus D1, D2 and Q when z1..z4 are coordinates.
inline const std::vector<FactorCandidate>& candidate_factors(const VarTablePtr& vt) {
  return vt->cached<std::vector<FactorCandidate>>([&] { return detail::build_candidates(vt); });
}

}  // namespace lauricella
