#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lauricella/covering.hpp"
#include "lauricella/integrability.hpp"

namespace lauricella::cover {

/// script_E(5b, b, 4b+1) on x1..x4 with b = 1/3: the #-compatible case.
inline PdeSystem invariant_script_e() {
  const Rational b(1, 3);
  return build_script_e(4, numeric_bindings(x_table(), 5 * b, {b, b, b, b}, 4 * b + 1));
}

/// f_* of a 4-variable D-form system on x_table(): coefficients in the
/// z-frame, brought to the trace-free gauge with respect to d/dz. The
/// result does not depend on the gauge of the input.
inline PdeSystem pushforward(const PdeSystem& dsys, std::uint64_t seed = 1) {
  auto sys = dsys.has_zeroth() ? dsys : recover_p0(dsys);
  auto out = gauge_normal_form(change_coordinates_pform(dform_to_pform(sys), as_map(), seed));
  out.set_name("pushforward_" + dsys.name());
  return out;
}

/// Monic linear forms allowed in pushed-forward denominators: the factors of
/// f*(D) together with those of the Jacobian.
inline std::set<std::string> allowed_denominators() {
  std::set<std::string> out;
  for (const auto& [f, e] : pullback_divisor_check().computed.exponents) out.insert(f);
  auto J = jacobian_check().computed;
  for (const auto& d : J.den_factors()) out.insert(to_string(d.poly));
  for (const auto& d : factorize(J.num()).second) out.insert(to_string(d.poly));
  return out;
}

struct StructuralReport {
  std::vector<CoefficientDiff> not_invariant;  // lhs: coefficient, rhs: its # image
  std::vector<std::string> stray_denominators;
  int flat_points = 0;
  int sampled_points = 0;
  bool passes() const { return not_invariant.empty() && stray_denominators.empty() && flat_points == sampled_points && sampled_points > 0; }
};

inline std::vector<std::vector<Rational>> sample_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Rational>> out;
  while (static_cast<int>(out.size()) < count) {
    Point x = random_xpoint(rng);
    try {
      apply_f(x);
    } catch (const Error&) {
      continue;
    }
    out.push_back(to_vector(x));
  }
  return out;
}

/// #-invariance of every coefficient, denominators inside the allowed set,
/// and vanishing curvature at sampled points. Without `symbolic` the
/// invariance is tested by comparing values at the sample points and at
/// their # images.
inline StructuralReport structural_suite(const PdeSystem& sys, int points, std::uint64_t seed, bool symbolic = true) {
  StructuralReport out;
  const auto& vt = sys.vars();
  Assignment inv;
  for (std::size_t i = 1; i <= sys.n(); ++i) inv.emplace(vt->name(sys.coord(i)), RationalFunction::variable(vt, sys.coord(i)).inverse());
  const auto allowed = allowed_denominators();
  const auto pts = sample_points(points, seed);
  std::set<std::string> stray;
  for (std::size_t k = 0; k <= sys.n(); ++k)
    for (std::size_t i = 1; i <= sys.n(); ++i)
      for (std::size_t j = i; j <= sys.n(); ++j) {
        const auto& f = sys.p(k, i, j);
        if (symbolic) {
          auto g = substitute(f, inv);
          if (!equal(f, g) && out.not_invariant.size() < 5) out.not_invariant.push_back({k, i, j, print_expr(f), print_expr(reduce(g))});
        } else {
          for (const auto& pt : pts) {
            Point x{pt[0], pt[1], pt[2], pt[3]};
            auto at = f.eval(pt), at_sharp = f.eval(to_vector(sharp(x)));
            if (at != at_sharp) {
              if (out.not_invariant.size() < 5) out.not_invariant.push_back({k, i, j, to_string(at), to_string(at_sharp)});
              break;
            }
          }
        }
        const auto r = reduce(f);
        for (const auto& d : r.den_factors())
          if (!allowed.count(to_string(d.poly))) stray.insert(to_string(d.poly));
      }
  out.stray_denominators.assign(stray.begin(), stray.end());
  for (const auto& pt : pts) {
    ++out.sampled_points;
    auto res = integrability_residual_at(sys, pt);
    if (std::all_of(res.begin(), res.end(), [](const auto& e) { return e.value == 0; })) ++out.flat_points;
  }
  return out;
}

/// Coordinates x1..x4 with z1..z4 as parameters: external coefficient files
/// may be written in z, in x, or in both.
inline const VarTablePtr& external_table() {
  static const VarTablePtr vt = VarTable::make(indexed_names("x", 4), indexed_names("z", 4));
  return vt;
}

struct CoefficientAgreement {
  std::size_t k, i, j;
  bool pointwise = true;
  int points = 0;
  std::optional<bool> symbolic;
};

struct ExternalComparison {
  std::vector<CoefficientAgreement> coefficients;
  bool agrees() const {
    return std::all_of(coefficients.begin(), coefficients.end(), [](const auto& c) { return c.pointwise && c.symbolic.value_or(true); });
  }
  std::vector<CoefficientAgreement> disagreements() const {
    std::vector<CoefficientAgreement> out;
    for (const auto& c : coefficients)
      if (!c.pointwise || !c.symbolic.value_or(true)) out.push_back(c);
    return out;
  }
};

/// Pulls the external system's coefficients back through f and compares
/// them with `reference` (a system over x_table()).
inline ExternalComparison compare_external(const std::string& text, const PdeSystem& reference, int samples, std::uint64_t seed, bool symbolic = true) {
  const auto& vt = external_table();
  auto ext = deserialize(text, vt);
  if (ext.n() != 4) throw Error(Errc::ShapeMismatch, "external system must have n = 4");
  if (ext.form() != Form::Partial) throw Error(Errc::ShapeMismatch, "external system must be in partial form");
  if (!ext.has_zeroth()) throw Error(Errc::ShapeMismatch, "external system has no zeroth-order coefficients");
  Assignment f;
  for (std::size_t i = 0; i < 4; ++i) f.emplace("z" + std::to_string(i + 1), rebase(components()[i], vt));
  const auto pts = sample_points(samples, seed);
  ExternalComparison out;
  for (std::size_t k = 0; k <= 4; ++k)
    for (std::size_t i = 1; i <= 4; ++i)
      for (std::size_t j = i; j <= 4; ++j) {
        auto mine = rebase(reference.p(k, i, j), vt);
        auto theirs = specialize(ext.p(k, i, j), f);
        CoefficientAgreement c{k, i, j, true, 0, std::nullopt};
        for (auto pt : pts) {
          pt.resize(vt->size(), Rational(0));
          try {
            if (mine.eval(pt) != theirs.eval(pt)) c.pointwise = false;
            ++c.points;
          } catch (const Error& e) {
            if (e.code() != Errc::PoleAtPoint) throw;
          }
        }
        if (symbolic) c.symbolic = equal(mine, theirs);
        out.coefficients.push_back(c);
      }
  return out;
}

}  // namespace lauricella::cover
