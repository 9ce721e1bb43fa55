#ifndef HILOK_SERIES_HPP
#define HILOK_SERIES_HPP

// Truncated iterated Laurent series. A depth-d series is a Laurent series in
// t_d whose entries are depth-(d-1) series; depth 1 stores scalars. Every
// level carries its own absolute precision, so 1/(t+u) is representable with
// entries t^-1, -t^-2, ... that each stay exact.

#include <algorithm>
#include <climits>
#include <functional>
#include <vector>

#include "hilok/gf.hpp"

namespace hilok {

constexpr int kExact = INT_MAX / 4;

inline int sat_add(int a, int b) {
  if (a >= kExact || b >= kExact) return kExact;
  long r = static_cast<long>(a) + b;
  if (r >= kExact) return kExact;
  return static_cast<int>(r);
}

inline int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline int ceil_div(int a, int b) { return -floor_div(-a, b); }
inline int pos_mod(long a, int m) {
  long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

/// Stored entries have indices lo .. lo+size-1. Indices in [lo+size, hi) and
/// below lo are exact zeros; indices >= hi are unknown. After normalize() the
/// first and last stored entries are not exact zeros.
struct Series {
  int lo = 0;
  int hi = kExact;
  std::vector<gcode> sc;
  std::vector<Series> ch;
};

namespace ser {

inline int size(const Series& s, int d) { return d == 1 ? static_cast<int>(s.sc.size()) : static_cast<int>(s.ch.size()); }
inline bool empty(const Series& s, int d) { return size(s, d) == 0; }
inline int end(const Series& s, int d) { return s.lo + size(s, d); }
inline bool exact_zero(const Series& s, int d) {
  if (d == 0) return s.sc.empty() || s.sc[0] == 0;
  return empty(s, d) && s.hi >= kExact;
}
/// Lower bound for the valuation in t_d.
inline int vlb(const Series& s, int d) { return empty(s, d) ? s.hi : s.lo; }

inline Series zero_exact() { return Series{}; }
inline Series scalar0(gcode c) {
  Series s;
  if (c != 0) s.sc.push_back(c);
  return s;
}
inline gcode scalar_of(const Series& s) { return s.sc.empty() ? 0 : s.sc[0]; }

inline void normalize(Series& s, int d) {
  if (d == 0) {
    if (!s.sc.empty() && s.sc[0] == 0) s.sc.clear();
    s.lo = 0;
    s.hi = kExact;
    return;
  }
  int n = size(s, d);
  int keep = n;
  if (s.hi < kExact) keep = std::max(0, std::min(n, s.hi - s.lo));
  int last = keep;
  auto is_z = [&](int k) { return d == 1 ? s.sc[k] == 0 : exact_zero(s.ch[k], d - 1); };
  while (last > 0 && is_z(last - 1)) --last;
  int first = 0;
  while (first < last && is_z(first)) ++first;
  if (d == 1) {
    s.sc.erase(s.sc.begin() + last, s.sc.end());
    s.sc.erase(s.sc.begin(), s.sc.begin() + first);
  } else {
    s.ch.erase(s.ch.begin() + last, s.ch.end());
    s.ch.erase(s.ch.begin(), s.ch.begin() + first);
  }
  s.lo += first;
  if (empty(s, d)) s.lo = 0;
}

inline bool known_zero(const Series& s, int d) {
  if (d == 0) return scalar_of(s) == 0;
  if (d == 1) {
    for (gcode c : s.sc)
      if (c != 0) return false;
    return true;
  }
  for (const auto& c : s.ch)
    if (!known_zero(c, d - 1)) return false;
  return true;
}

inline bool is_exact(const Series& s, int d) {
  if (d == 0) return true;
  if (s.hi < kExact) return false;
  if (d >= 2)
    for (const auto& c : s.ch)
      if (!is_exact(c, d - 1)) return false;
  return true;
}

/// Entry at index k as a depth-(d-1) series; requires d >= 2 and k < hi.
inline Series entry(const Series& s, int d, int k) {
  if (k < s.lo || k >= end(s, d)) return zero_exact();
  if (d == 1) return scalar0(s.sc[k - s.lo]);
  return s.ch[k - s.lo];
}

inline Series neg(const GFField& F, const Series& a, int d) {
  Series r = a;
  if (d <= 1) {
    for (auto& c : r.sc) c = F.neg(c);
  } else {
    for (auto& c : r.ch) c = neg(F, c, d - 1);
  }
  return r;
}

inline Series add(const GFField& F, const Series& a, const Series& b, int d, bool subtract = false) {
  if (d == 0) {
    gcode x = scalar_of(a), y = scalar_of(b);
    return scalar0(subtract ? F.sub(x, y) : F.add(x, y));
  }
  Series r;
  r.hi = std::min(a.hi, b.hi);
  bool ea = empty(a, d), eb = empty(b, d);
  if (ea && eb) {
    r.lo = 0;
    return r;
  }
  int lo = ea ? b.lo : (eb ? a.lo : std::min(a.lo, b.lo));
  int hi_end = std::max(ea ? INT_MIN : end(a, d), eb ? INT_MIN : end(b, d));
  hi_end = std::min(hi_end, r.hi);
  if (hi_end <= lo) {
    r.lo = 0;
    return r;
  }
  r.lo = lo;
  int n = hi_end - lo;
  if (d == 1) {
    r.sc.assign(n, 0);
    for (int k = 0; k < n; ++k) {
      int idx = lo + k;
      gcode x = (idx >= a.lo && idx < end(a, 1)) ? a.sc[idx - a.lo] : 0;
      gcode y = (idx >= b.lo && idx < end(b, 1)) ? b.sc[idx - b.lo] : 0;
      r.sc[k] = subtract ? F.sub(x, y) : F.add(x, y);
    }
  } else {
    r.ch.resize(n);
    for (int k = 0; k < n; ++k) {
      int idx = lo + k;
      bool ina = idx >= a.lo && idx < end(a, d);
      bool inb = idx >= b.lo && idx < end(b, d);
      if (ina && inb)
        r.ch[k] = add(F, a.ch[idx - a.lo], b.ch[idx - b.lo], d - 1, subtract);
      else if (ina)
        r.ch[k] = a.ch[idx - a.lo];
      else if (inb)
        r.ch[k] = subtract ? neg(F, b.ch[idx - b.lo], d - 1) : b.ch[idx - b.lo];
    }
  }
  normalize(r, d);
  return r;
}

inline Series scale(const GFField& F, const Series& a, int d, gcode c) {
  if (c == 0) return zero_exact();
  Series r = a;
  if (d <= 1) {
    for (auto& x : r.sc) x = F.mul(x, c);
  } else {
    for (auto& x : r.ch) x = scale(F, x, d - 1, c);
  }
  return r;
}

inline Series mul(const GFField& F, const Series& a, const Series& b, int d) {
  if (d == 0) return scalar0(F.mul(scalar_of(a), scalar_of(b)));
  if (exact_zero(a, d) || exact_zero(b, d)) return zero_exact();
  Series r;
  int va = vlb(a, d), vb = vlb(b, d);
  r.hi = std::min(sat_add(a.hi, vb), sat_add(b.hi, va));
  if (empty(a, d) || empty(b, d)) {
    r.lo = 0;
    return r;
  }
  int lo = a.lo + b.lo;
  int top = std::min(end(a, d) + end(b, d) - 1, r.hi);
  if (top <= lo) {
    normalize(r, d);
    return r;
  }
  r.lo = lo;
  int n = top - lo;
  int na = size(a, d), nb = size(b, d);
  if (d == 1) {
    r.sc.assign(n, 0);
    for (int i = 0; i < na; ++i) {
      gcode x = a.sc[i];
      if (x == 0) continue;
      int jmax = std::min(nb, n - i);
      for (int j = 0; j < jmax; ++j)
        if (b.sc[j] != 0) r.sc[i + j] = F.add(r.sc[i + j], F.mul(x, b.sc[j]));
    }
  } else {
    r.ch.resize(n);
    std::vector<char> set(n, 0);
    for (int i = 0; i < na; ++i) {
      if (exact_zero(a.ch[i], d - 1)) continue;
      int jmax = std::min(nb, n - i);
      for (int j = 0; j < jmax; ++j) {
        if (exact_zero(b.ch[j], d - 1)) continue;
        Series prod = mul(F, a.ch[i], b.ch[j], d - 1);
        if (!set[i + j]) {
          r.ch[i + j] = std::move(prod);
          set[i + j] = 1;
        } else {
          r.ch[i + j] = add(F, r.ch[i + j], prod, d - 1);
        }
      }
    }
  }
  normalize(r, d);
  return r;
}

/// Returns false if the leading entry is unknown (inexact zero) or the
/// series is zero.
inline bool leading_known(const Series& s, int d) {
  if (d == 0) return scalar_of(s) != 0;
  if (empty(s, d)) return false;
  if (d == 1) return true;
  return leading_known(s.ch[0], d - 1);
}

/// Rank-d valuation, outermost first. Caller ensures leading_known.
inline void valuation(const Series& s, int d, std::vector<int>& out) {
  if (d == 0) return;
  out.push_back(s.lo);
  if (d >= 2) valuation(s.ch[0], d - 1, out);
}

inline bool is_monomial_exact(const Series& s, int d) {
  if (d == 0) return true;
  if (s.hi < kExact || size(s, d) != 1) return false;
  return d == 1 || is_monomial_exact(s.ch[0], d - 1);
}

/// caps[d-1] is the relative precision budget for t_d.
inline Series inv(const GFField& F, const Series& a, int d, const std::vector<int>& caps) {
  if (d == 0) return scalar0(F.inv(scalar_of(a)));
  int v = a.lo;
  Series c0 = entry(a, d, v);
  Series i0 = inv(F, c0, d - 1, caps);
  Series r;
  r.lo = -v;
  bool exact_mono = a.hi >= kExact && size(a, d) == 1;
  if (exact_mono) {
    r.hi = kExact;
    if (d == 1)
      r.sc = {scalar_of(i0)};
    else
      r.ch = {i0};
    return r;
  }
  int cap = caps[d - 1];
  int rel = a.hi >= kExact ? cap : std::min(a.hi - v, cap);
  if (rel <= 0) fail(ErrorKind::PrecisionExhausted, "inverse", "no relative precision left");
  r.hi = -v + rel;
  if (d == 1) {
    gcode ic = scalar_of(i0);
    r.sc.assign(rel, 0);
    r.sc[0] = ic;
    gcode mic = F.neg(ic);
    int na = size(a, 1);
    for (int k = 1; k < rel; ++k) {
      gcode s = 0;
      int jmax = std::min(k, na - 1);
      for (int j = 1; j <= jmax; ++j) {
        gcode x = a.sc[j];
        if (x != 0 && r.sc[k - j] != 0) s = F.add(s, F.mul(x, r.sc[k - j]));
      }
      r.sc[k] = F.mul(mic, s);
    }
  } else {
    r.ch.assign(rel, Series{});
    r.ch[0] = i0;
    Series mi0 = neg(F, i0, d - 1);
    int na = size(a, d);
    for (int k = 1; k < rel; ++k) {
      Series s;
      bool any = false;
      int jmax = std::min(k, na - 1);
      for (int j = 1; j <= jmax; ++j) {
        if (exact_zero(a.ch[j], d - 1) || exact_zero(r.ch[k - j], d - 1)) continue;
        Series prod = mul(F, a.ch[j], r.ch[k - j], d - 1);
        s = any ? add(F, s, prod, d - 1) : prod;
        any = true;
      }
      r.ch[k] = any ? mul(F, mi0, s, d - 1) : Series{};
    }
  }
  normalize(r, d);
  return r;
}

inline Series frobenius(const GFField& F, const Series& a, int d) {
  if (d == 0) return scalar0(F.frobenius(scalar_of(a)));
  int p = F.p();
  Series r;
  r.hi = a.hi >= kExact ? kExact : a.hi * p;
  if (empty(a, d)) return r;
  r.lo = a.lo * p;
  int n = (size(a, d) - 1) * p + 1;
  if (d == 1) {
    r.sc.assign(n, 0);
    for (int k = 0; k < size(a, 1); ++k) r.sc[k * p] = F.frobenius(a.sc[k]);
  } else {
    r.ch.assign(n, Series{});
    for (int k = 0; k < size(a, d); ++k) r.ch[k * p] = frobenius(F, a.ch[k], d - 1);
  }
  normalize(r, d);
  return r;
}

/// Keeps monomials whose exponents are all divisible by p, divides the
/// exponents by p and takes p-th roots of the coefficients.
inline Series cartier(const GFField& F, const Series& a, int d) {
  if (d == 0) return scalar0(F.pth_root(scalar_of(a)));
  int p = F.p();
  Series r;
  r.hi = a.hi >= kExact ? kExact : ceil_div(a.hi, p);
  if (empty(a, d)) return r;
  int first = ceil_div(a.lo, p), last = floor_div(end(a, d) - 1, p);
  if (last < first) {
    normalize(r, d);
    return r;
  }
  r.lo = first;
  int n = last - first + 1;
  if (d == 1) {
    r.sc.assign(n, 0);
    for (int j = first; j <= last; ++j) r.sc[j - first] = F.pth_root(a.sc[j * p - a.lo]);
  } else {
    r.ch.assign(n, Series{});
    for (int j = first; j <= last; ++j) r.ch[j - first] = cartier(F, a.ch[j * p - a.lo], d - 1);
  }
  normalize(r, d);
  return r;
}

/// Applies fn(E, c) to every stored scalar; E is indexed 0 = t_1.
inline void map_monomials(const GFField& F, Series& a, int d, std::vector<int>& E,
                          const std::function<gcode(const std::vector<int>&, gcode)>& fn) {
  if (d == 0) {
    if (!a.sc.empty()) a.sc[0] = fn(E, a.sc[0]);
    normalize(a, 0);
    return;
  }
  for (int k = 0; k < size(a, d); ++k) {
    E[d - 1] = a.lo + k;
    if (d == 1) {
      if (a.sc[k] != 0) a.sc[k] = fn(E, a.sc[k]);
    } else {
      map_monomials(F, a.ch[k], d - 1, E, fn);
    }
  }
  normalize(a, d);
}

inline void for_each_monomial(const Series& a, int d, std::vector<int>& E,
                              const std::function<void(const std::vector<int>&, gcode)>& fn) {
  if (d == 0) {
    if (scalar_of(a) != 0) fn(E, scalar_of(a));
    return;
  }
  for (int k = 0; k < size(a, d); ++k) {
    E[d - 1] = a.lo + k;
    if (d == 1) {
      if (a.sc[k] != 0) fn(E, a.sc[k]);
    } else {
      for_each_monomial(a.ch[k], d - 1, E, fn);
    }
  }
}

/// Visits every finite precision bound: fn(outer exponents above level d, d, hi).
inline void for_each_bound(const Series& a, int d, std::vector<int>& E,
                           const std::function<void(const std::vector<int>&, int, int)>& fn) {
  if (d == 0) return;
  if (a.hi < kExact) fn(E, d, a.hi);
  if (d >= 2)
    for (int k = 0; k < size(a, d); ++k) {
      E[d - 1] = a.lo + k;
      for_each_bound(a.ch[k], d - 1, E, fn);
    }
}

inline Series monomial(int d, const std::vector<int>& E, gcode c) {
  if (d == 0) return scalar0(c);
  if (c == 0) return zero_exact();
  Series s;
  s.lo = E[d - 1];
  if (d == 1)
    s.sc = {c};
  else
    s.ch = {monomial(d - 1, E, c)};
  return s;
}

/// Multiplies by t_var^k (var is 1-based, var <= d).
inline Series shift(const Series& a, int d, int var, int k) {
  if (d == 0) return a;
  Series r = a;
  if (var == d) {
    if (!empty(r, d)) r.lo += k;
    if (r.hi < kExact) r.hi += k;
    return r;
  }
  for (auto& c : r.ch) c = shift(c, d - 1, var, k);
  return r;
}

/// Truncates modulo t_d^N (outer level only).
inline Series truncate(const Series& a, int d, int N) {
  Series r = a;
  r.hi = std::min(r.hi, N);
  normalize(r, d);
  return r;
}

/// Lowers the precision of every level to the given absolute bounds
/// (bounds[d-1] for t_d); used to emulate a smaller window.
inline Series restrict_all(const Series& a, int d, int bound) {
  if (d == 0) return a;
  Series r = a;
  r.hi = std::min(r.hi, bound);
  normalize(r, d);
  if (d >= 2)
    for (auto& c : r.ch) c = restrict_all(c, d - 1, bound);
  normalize(r, d);
  return r;
}

inline Series lift(const Series& c, int d) {
  if (exact_zero(c, d - 1)) return zero_exact();
  Series s;
  s.lo = 0;
  if (d == 1)
    s.sc = {scalar_of(c)};
  else
    s.ch = {c};
  normalize(s, d);
  return s;
}

}  // namespace ser
}  // namespace hilok

#endif  // HILOK_SERIES_HPP
