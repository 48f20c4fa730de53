#pragma once

#include <random>
#include <vector>

#include "lauricella/lauricella.hpp"

namespace lauricella::testing {

/// Small random polynomials for property tests.
struct PolyGen {
  std::mt19937_64 rng;
  VarTablePtr vt;

  Rational coeff() {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
    int n = 0;
    while (n == 0) n = num(rng);
    Rational q(n, den(rng));
    q.canonicalize();
    return q;
  }

  Polynomial poly(int max_terms = 4, int max_deg = 3) {
    std::uniform_int_distribution<int> nterms(0, max_terms), deg(0, max_deg);
    std::uniform_int_distribution<std::size_t> var(0, vt->size() - 1);
    std::vector<Term> terms;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
      Monomial m;
      int d = deg(rng);
      for (int k = 0; k < d; ++k) {
        auto v = var(rng);
        ++m.exp[v];
        ++m.deg;
      }
      terms.push_back({m, coeff()});
    }
    return Polynomial::from_terms(vt, std::move(terms));
  }

  Polynomial nonzero_poly(int max_terms = 4, int max_deg = 3) {
    for (;;) {
      auto p = poly(max_terms, max_deg);
      if (!p.is_zero()) return p;
    }
  }

  std::vector<Rational> point() {
    std::vector<Rational> pt;
    for (std::size_t i = 0; i < vt->size(); ++i) pt.push_back(coeff());
    return pt;
  }
};

}  // namespace lauricella::testing
