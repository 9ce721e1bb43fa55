#ifndef HILOK_WITT_HPP
#define HILOK_WITT_HPP

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <mutex>
#include <vector>

#include "hilok/tower.hpp"

namespace hilok {

using bigint = boost::multiprecision::cpp_int;

namespace witt {

/// Integer polynomial in x_0..x_2, y_0..y_2 (slots 0..2 and 3..5).
using Mono = std::array<std::uint8_t, 6>;
using UPoly = std::map<Mono, bigint>;

inline UPoly var(int slot) {
  Mono m{};
  m[slot] = 1;
  return {{m, bigint(1)}};
}
inline UPoly constant(const bigint& c) { return c == 0 ? UPoly{} : UPoly{{Mono{}, c}}; }

inline UPoly add(const UPoly& a, const UPoly& b, int sign = 1) {
  UPoly r = a;
  for (const auto& [m, c] : b) {
    bigint& v = r[m];
    v += sign * c;
    if (v == 0) r.erase(m);
  }
  return r;
}
inline UPoly mul(const UPoly& a, const UPoly& b) {
  UPoly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mono m;
      for (int i = 0; i < 6; ++i) m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
      bigint& v = r[m];
      v += ca * cb;
      if (v == 0) r.erase(m);
    }
  return r;
}
inline UPoly pow(const UPoly& a, long e) {
  UPoly r = constant(1), b = a;
  while (e > 0) {
    if (e & 1) r = mul(r, b);
    e >>= 1;
    if (e) b = mul(b, b);
  }
  return r;
}
inline UPoly scale(const UPoly& a, const bigint& c) {
  UPoly r;
  if (c == 0) return r;
  for (const auto& [m, v] : a) r[m] = v * c;
  return r;
}
inline UPoly exact_div(const UPoly& a, const bigint& c) {
  UPoly r;
  for (const auto& [m, v] : a) {
    if (v % c != 0) fail(ErrorKind::InternalInconsistency, "witt", "universal polynomial not integral");
    r[m] = v / c;
  }
  return r;
}

inline bigint ipow(long b, long e) {
  bigint r = 1;
  for (long i = 0; i < e; ++i) r *= b;
  return r;
}

/// Ghost polynomial w_k in the given variables.
inline UPoly ghost_poly(int p, const std::vector<UPoly>& v, int k) {
  UPoly r;
  for (int i = 0; i <= k; ++i) {
    long e = 1;
    for (int j = 0; j < k - i; ++j) e *= p;
    r = add(r, scale(pow(v[i], e), ipow(p, i)));
  }
  return r;
}

struct Universal {
  std::vector<UPoly> S, P;  // length 3 each
};

/// Sum and product polynomials S_k, P_k (k < 3) from the ghost recursion.
/// Computed once per prime and cached.
inline const Universal& universal(int p) {
  static std::mutex mu;
  static std::map<int, Universal> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  std::vector<UPoly> X = {var(0), var(1), var(2)}, Y = {var(3), var(4), var(5)};
  Universal u;
  for (int k = 0; k < 3; ++k) {
    UPoly target_s = add(ghost_poly(p, X, k), ghost_poly(p, Y, k));
    UPoly target_p = mul(ghost_poly(p, X, k), ghost_poly(p, Y, k));
    for (int i = 0; i < k; ++i) {
      long e = 1;
      for (int j = 0; j < k - i; ++j) e *= p;
      target_s = add(target_s, scale(pow(u.S[i], e), ipow(p, i)), -1);
      target_p = add(target_p, scale(pow(u.P[i], e), ipow(p, i)), -1);
    }
    u.S.push_back(exact_div(target_s, ipow(p, k)));
    u.P.push_back(exact_div(target_p, ipow(p, k)));
  }
  return cache.emplace(p, std::move(u)).first->second;
}

}  // namespace witt

/// Ring adaptors. Each supplies value, zero(), one(), add, mul, from_int and
/// whether the ring is p-torsion-free.
struct IntRing {
  using value = bigint;
  bool torsion_free = true;
  value zero() const { return 0; }
  value one() const { return 1; }
  value add(const value& a, const value& b) const { return a + b; }
  value mul(const value& a, const value& b) const { return a * b; }
  value from_int(const bigint& c) const { return c; }
};

struct GFRing {
  using value = gcode;
  Field field;
  bool torsion_free = false;
  value zero() const { return 0; }
  value one() const { return 1; }
  value add(value a, value b) const { return field->add(a, b); }
  value mul(value a, value b) const { return field->mul(a, b); }
  value from_int(const bigint& c) const {
    bigint r = c % field->p();
    if (r < 0) r += field->p();
    return field->from_int(static_cast<long>(r));
  }
};

struct TowerRing {
  using value = TowerElement;
  Spec spec;
  bool torsion_free = false;
  value zero() const { return TowerElement::zero(spec); }
  value one() const { return TowerElement::one(spec); }
  value add(const value& a, const value& b) const { return a + b; }
  value mul(const value& a, const value& b) const { return a * b; }
  value from_int(const bigint& c) const {
    bigint r = c % spec->p();
    if (r < 0) r += spec->p();
    return TowerElement::from_int(spec, static_cast<long>(r));
  }
};

template <class Ring>
typename Ring::value ring_pow(const Ring& R, typename Ring::value b, long e) {
  typename Ring::value r = R.one();
  while (e > 0) {
    if (e & 1) r = R.mul(r, b);
    e >>= 1;
    if (e) b = R.mul(b, b);
  }
  return r;
}

template <class Ring>
typename Ring::value eval(const Ring& R, const witt::UPoly& poly, const std::vector<typename Ring::value>& x,
                          const std::vector<typename Ring::value>& y) {
  typename Ring::value acc = R.zero();
  for (const auto& [m, c] : poly) {
    typename Ring::value term = R.from_int(c);
    for (int i = 0; i < 6; ++i) {
      if (m[i] == 0) continue;
      const auto& base = i < 3 ? x[i] : y[i - 3];
      term = R.mul(term, ring_pow(R, base, m[i]));
    }
    acc = R.add(acc, term);
  }
  return acc;
}

template <class Ring>
struct WittVector {
  int p = 2;
  std::vector<typename Ring::value> x;
  int length() const { return static_cast<int>(x.size()); }
};

namespace witt {
inline void check_len(int a, int b, const char* op) {
  if (a < 1 || a > 3) fail(ErrorKind::Unsupported, op, "Witt length must be 1..3");
  if (a != b) fail(ErrorKind::LengthMismatch, op, "lengths differ");
}
}  // namespace witt

template <class Ring>
WittVector<Ring> witt_add(const Ring& R, const WittVector<Ring>& a, const WittVector<Ring>& b) {
  witt::check_len(a.length(), b.length(), "witt_add");
  const auto& U = witt::universal(a.p);
  std::vector<typename Ring::value> xa = a.x, xb = b.x;
  while (xa.size() < 3) xa.push_back(R.zero()), xb.push_back(R.zero());
  WittVector<Ring> r{a.p, {}};
  for (int k = 0; k < a.length(); ++k) r.x.push_back(eval(R, U.S[k], xa, xb));
  return r;
}

template <class Ring>
WittVector<Ring> witt_mul(const Ring& R, const WittVector<Ring>& a, const WittVector<Ring>& b) {
  witt::check_len(a.length(), b.length(), "witt_mul");
  const auto& U = witt::universal(a.p);
  std::vector<typename Ring::value> xa = a.x, xb = b.x;
  while (xa.size() < 3) xa.push_back(R.zero()), xb.push_back(R.zero());
  WittVector<Ring> r{a.p, {}};
  for (int k = 0; k < a.length(); ++k) r.x.push_back(eval(R, U.P[k], xa, xb));
  return r;
}

/// Ghost components sum_{i<=j} p^i x_i^(p^(j-i)); torsion-free rings only.
template <class Ring>
std::vector<typename Ring::value> ghost(const Ring& R, const WittVector<Ring>& w) {
  if (!R.torsion_free) fail(ErrorKind::TorsionRing, "ghost", "coefficient ring has p-torsion");
  std::vector<typename Ring::value> out;
  for (int j = 0; j < w.length(); ++j) {
    typename Ring::value acc = R.zero();
    for (int i = 0; i <= j; ++i) {
      long e = 1;
      for (int k = 0; k < j - i; ++k) e *= w.p;
      acc = R.add(acc, R.mul(R.from_int(witt::ipow(w.p, i)), ring_pow(R, w.x[i], e)));
    }
    out.push_back(acc);
  }
  return out;
}

/// sum_{i<=r} p^i lift(x_i)^(p^(r-i)) in the target ring A.
template <class Target>
typename Target::value phi_lift_with(const Target& A, int p, const std::vector<typename Target::value>& lifted, int r) {
  if (r < 0 || r >= static_cast<int>(lifted.size())) fail(ErrorKind::LengthMismatch, "phi_lift", "r out of range");
  typename Target::value acc = A.zero();
  for (int i = 0; i <= r; ++i) {
    long e = 1;
    for (int k = 0; k < r - i; ++k) e *= p;
    acc = A.add(acc, A.mul(A.from_int(witt::ipow(p, i)), ring_pow(A, lifted[i], e)));
  }
  return acc;
}

/// phi_lift for a Witt vector over the residue tower of `target`, using
/// constant-term lifts.
inline TowerElement phi_lift(const WittVector<TowerRing>& w, const Spec& target, int r) {
  if (target->n() == 0 || w.x.empty() || !w.x[0].spec()->compatible(*target->residue()))
    fail(ErrorKind::ResidueMismatch, "phi_lift", "vector does not live over the residue ring of the target");
  TowerRing A{target};
  std::vector<TowerElement> lifted;
  for (const auto& xi : w.x) {
    if (!xi.spec()->compatible(*target->residue()))
      fail(ErrorKind::ResidueMismatch, "phi_lift", "entry over the wrong ring");
    lifted.push_back(TowerElement::lift(target, xi));
  }
  return phi_lift_with(A, w.p, lifted, r);
}

}  // namespace hilok

#endif  // HILOK_WITT_HPP
