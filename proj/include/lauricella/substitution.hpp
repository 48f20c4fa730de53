#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lauricella/expression.hpp"
#include "lauricella/rational_function.hpp"

namespace lauricella {

/// Images of source variables; variables without an image are carried over by
/// name into the target table.
using Assignment = std::map<std::string, RationalFunction>;

namespace detail {

struct ImageData {
  Polynomial num;
  Polynomial den;
  std::vector<DenFactor> den_factors;
  std::vector<Polynomial> num_pows;
  std::vector<Polynomial> den_pows;

  const Polynomial& num_pow(unsigned e) {
    while (num_pows.size() <= e) num_pows.push_back(num_pows.back() * num);
    return num_pows[e];
  }
  const Polynomial& den_pow(unsigned e) {
    while (den_pows.size() <= e) den_pows.push_back(den_pows.back() * den);
    return den_pows[e];
  }
};

/// p(images) as a reduced rational function over `target`.
inline RationalFunction substitute_poly(const Polynomial& p, const VarTablePtr& target,
                                        std::vector<std::optional<ImageData>>& images,
                                        const std::vector<std::optional<std::size_t>>& rename) {
  const auto& src = p.vars();
  std::vector<std::size_t> subst_vars;
  std::vector<unsigned> top;
  for (std::size_t v = 0; v < src->size(); ++v) {
    if (!p.depends_on(v)) continue;
    if (images[v]) {
      subst_vars.push_back(v);
      top.push_back(p.degree_in(v));
    } else if (!rename[v]) {
      throw Error(Errc::UnknownVariable, src->name(v) + " has no image in the target table");
    }
  }
  // Group terms by their exponents in the substituted variables.
  std::map<std::vector<unsigned>, std::vector<Term>> groups;
  for (const auto& t : p.terms()) {
    std::vector<unsigned> key(subst_vars.size());
    Monomial rest;
    for (std::size_t v = 0; v < src->size(); ++v) {
      auto e = t.mono.exp[v];
      if (!e) continue;
      if (images[v]) {
        auto pos = std::find(subst_vars.begin(), subst_vars.end(), v) - subst_vars.begin();
        key[static_cast<std::size_t>(pos)] = e;
      } else {
        rest.exp[*rename[v]] = static_cast<std::uint16_t>(rest.exp[*rename[v]] + e);
        rest.deg += e;
      }
    }
    groups[key].push_back({rest, t.coeff});
  }
  Polynomial total(target);
  for (auto& [key, terms] : groups) {
    Polynomial part = Polynomial::from_terms(target, std::move(terms));
    for (std::size_t s = 0; s < subst_vars.size(); ++s) {
      auto& img = *images[subst_vars[s]];
      if (key[s]) part = part * img.num_pow(key[s]);
      if (top[s] > key[s] && !img.den.is_constant()) part = part * img.den_pow(top[s] - key[s]);
    }
    total += part;
  }
  std::vector<DenFactor> den;
  for (std::size_t s = 0; s < subst_vars.size(); ++s) {
    for (const auto& f : images[subst_vars[s]]->den_factors) den.push_back({f.poly, f.mult * static_cast<int>(top[s])});
  }
  std::sort(den.begin(), den.end(), [](const DenFactor& a, const DenFactor& b) { return compare_polys(a.poly, b.poly) < 0; });
  std::vector<DenFactor> merged;
  for (auto& d : den) {
    if (!merged.empty() && compare_polys(merged.back().poly, d.poly) == 0)
      merged.back().mult += d.mult;
    else
      merged.push_back(std::move(d));
  }
  return RationalFunction::reduced(std::move(total), std::move(merged));
}

}  // namespace detail

namespace detail {

inline RationalFunction substitute_any(const RationalFunction& f, const VarTablePtr& target, const Assignment& assignment, bool coordinates_only) {
  const auto& src = f.vars();
  std::vector<std::optional<detail::ImageData>> images(src->size());
  std::vector<std::optional<std::size_t>> rename(src->size());
  for (std::size_t v = 0; v < src->size(); ++v) rename[v] = target->find(src->name(v));
  for (const auto& [name, image] : assignment) {
    auto v = src->find(name);
    if (!v) throw Error(Errc::UnknownVariable, name);
    if (coordinates_only && !src->is_coordinate(*v)) throw Error(Errc::NotACoordinate, name);
    require_same_table(image.vars(), target);
    detail::ImageData d{image.num(), image.den(), image.den_factors(), {}, {}};
    d.num_pows.push_back(Polynomial::constant(target, 1));
    d.den_pows.push_back(Polynomial::constant(target, 1));
    images[*v] = std::move(d);
  }
  RationalFunction result = detail::substitute_poly(f.num(), target, images, rename);
  for (const auto& h : f.den_factors()) {
    RationalFunction hv = detail::substitute_poly(h.poly, target, images, rename);
    if (hv.is_zero())
      throw Error(Errc::SubstitutionPole, "denominator factor " + to_string(h.poly) + " vanishes identically");
    result = result / hv.pow(h.mult);
  }
  return result;
}

}  // namespace detail

/// Simultaneous substitution of coordinate variables. The result lives over
/// `target`; unassigned variables must exist there under the same name.
inline RationalFunction substitute(const RationalFunction& f, const VarTablePtr& target, const Assignment& assignment) {
  return detail::substitute_any(f, target, assignment, true);
}

inline RationalFunction substitute(const RationalFunction& f, const Assignment& assignment) {
  return substitute(f, f.vars(), assignment);
}

/// Like substitute, but parameters may be assigned too (imposing
/// constraints such as b2 = b1).
inline RationalFunction specialize(const RationalFunction& f, const Assignment& assignment) {
  return detail::substitute_any(f, f.vars(), assignment, false);
}

/// Moves f to an equal-or-larger table by variable name.
inline RationalFunction rebase(const RationalFunction& f, const VarTablePtr& target) {
  if (same_table(f.vars(), target)) {
    RationalFunction r = f;
    r.rebind(target);
    return r;
  }
  return substitute(f, target, {});
}

inline Rational evaluate(const RationalFunction& f, const std::map<std::string, Rational>& point) {
  const auto& vt = *f.vars();
  std::vector<Rational> values(vt.size());
  for (std::size_t v = 0; v < vt.size(); ++v) {
    auto it = point.find(vt.name(v));
    if (it == point.end()) throw Error(Errc::InvalidArgument, "no value for variable " + vt.name(v));
    values[v] = it->second;
  }
  return f.eval(values);
}

}  // namespace lauricella
