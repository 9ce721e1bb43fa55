// Hand-rolled generators shared by the unit and acceptance tests.
#ifndef HILOK_TEST_SUPPORT_HPP
#define HILOK_TEST_SUPPORT_HPP

#include <random>
#include <vector>

#include "hilok/hilok.hpp"

namespace hilok::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline gcode rand_scalar(Rng& rng, const GFField& F, bool nonzero = false) {
  return static_cast<gcode>(uniform(rng, nonzero ? 1 : 0, F.q() - 1));
}

/// Exact polynomial with `terms` random monomials, exponents in [lo, hi].
inline TowerElement rand_poly(Rng& rng, const Spec& sp, int terms, int lo, int hi) {
  TowerElement x = TowerElement::zero(sp);
  std::vector<int> E(sp->n());
  for (int k = 0; k < terms; ++k) {
    for (auto& e : E) e = uniform(rng, lo, hi);
    x += TowerElement::monomial(sp, E, rand_scalar(rng, sp->F(), true));
  }
  return x;
}

/// A nonzero element whose leading term is known: a monomial times 1 plus a
/// random polynomial in the maximal ideal, optionally inverted.
inline TowerElement rand_nonzero(Rng& rng, const Spec& sp, int vmin, int vmax, int terms = 3, bool allow_inverse = true) {
  int n = sp->n();
  std::vector<int> E(n);
  for (auto& e : E) e = uniform(rng, vmin, vmax);
  TowerElement lead = TowerElement::monomial(sp, E, rand_scalar(rng, sp->F(), true));
  TowerElement tail = TowerElement::one(sp);
  for (int k = 0; k < terms; ++k) {
    std::vector<int> D(n);
    // lexicographically positive exponent vectors
    int level = uniform(rng, 0, n - 1);
    for (int i = 0; i < n; ++i) D[i] = i < level ? uniform(rng, -2, 3) : 0;
    D[level] = uniform(rng, 1, 3);
    tail += TowerElement::monomial(sp, D, rand_scalar(rng, sp->F(), true));
  }
  TowerElement x = lead * tail;
  if (allow_inverse && uniform(rng, 0, 2) == 0) x = lead * tail.inv();
  return x;
}

inline TowerElement rand_unit_residue(Rng& rng, const Spec& sp) {
  return rand_nonzero(rng, sp, 0, 0, 2, true);
}

}  // namespace hilok::testing

#endif
