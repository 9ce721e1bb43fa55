#ifndef HILOK_GF_HPP
#define HILOK_GF_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hilok/error.hpp"

namespace hilok {

/// Element codes: the element sum c_i w^i is stored as sum c_i p^i.
using gcode = std::uint16_t;

/// A finite field F_{p^f} with p <= 7, f <= 4. Instances are immutable and
/// shared by pointer; see make_field().
class GFField {
 public:
  int p() const { return p_; }
  int f() const { return f_; }
  int q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  gcode zero() const { return 0; }
  gcode one() const { return 1; }
  gcode from_int(long v) const {
    long r = v % p_;
    if (r < 0) r += p_;
    return static_cast<gcode>(r);
  }
  /// The class of the generator w (equals from_int only when f == 1).
  gcode gen() const { return f_ == 1 ? gen_prime_ : static_cast<gcode>(p_); }

  int digit(gcode a, int i) const {
    for (int k = 0; k < i; ++k) a = static_cast<gcode>(a / p_);
    return a % p_;
  }

  gcode add(gcode a, gcode b) const {
    if (!add_.empty()) return add_[a * q_ + b];
    return add_digits(a, b, 1);
  }
  gcode neg(gcode a) const { return neg_[a]; }
  gcode sub(gcode a, gcode b) const { return add(a, neg_[b]); }
  gcode mul(gcode a, gcode b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  gcode inv(gcode a) const {
    if (a == 0) fail(ErrorKind::DivisionByZero, "gf.inv", "zero has no inverse");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }
  gcode div(gcode a, gcode b) const { return mul(a, inv(b)); }
  gcode pow(gcode a, long e) const {
    if (a == 0) {
      if (e < 0) fail(ErrorKind::DivisionByZero, "gf.pow", "negative power of zero");
      return e == 0 ? 1 : 0;
    }
    long m = q_ - 1;
    long k = (static_cast<long>(log_[a]) * (((e % m) + m) % m)) % m;
    return exp_[k];
  }
  gcode scale_int(gcode a, long k) const { return mul(a, from_int(k)); }

  gcode frobenius(gcode a) const { return frob_[a]; }
  gcode pth_root(gcode a) const { return root_[a]; }
  int trace(gcode a) const { return trace_[a]; }
  /// Norm to the subfield of index 2 (f even): a^(1 + p^(f/2)).
  gcode norm_to_half(gcode a) const {
    if (f_ % 2 != 0) fail(ErrorKind::Unsupported, "gf.norm_to_half", "odd degree");
    long e = 1;
    for (int i = 0; i < f_ / 2; ++i) e *= p_;
    return pow(a, e + 1);
  }

  std::optional<gcode> artin_schreier_solve(gcode a) const {
    if (trace(a) != 0) return std::nullopt;
    for (int x = 0; x < q_; ++x) {
      gcode c = static_cast<gcode>(x);
      if (sub(frobenius(c), c) == a) return c;
    }
    fail(ErrorKind::InternalInconsistency, "gf.artin_schreier_solve", "trace zero but no root");
  }

  /// Smallest-code element of trace 1, used as a canonical unramified class.
  gcode trace_one() const { return trace_one_; }

  std::string format(gcode a) const;
  std::string spec_string() const {
    return f_ == 1 ? "F(" + std::to_string(p_) + ")"
                   : "F(" + std::to_string(p_) + "^" + std::to_string(f_) + ")";
  }

  bool same_as(const GFField& o) const {
    return this == &o || (p_ == o.p_ && f_ == o.f_ && modulus_ == o.modulus_);
  }

  // Construction goes through make_field().
  GFField(int p, int f, std::vector<int> modulus);

 private:
  gcode add_digits(gcode a, gcode b, int sign) const {
    int r = 0, pw = 1;
    for (int i = 0; i < f_; ++i) {
      int d = (a % p_ + sign * (b % p_) + p_) % p_;
      r += d * pw;
      pw *= p_;
      a = static_cast<gcode>(a / p_);
      b = static_cast<gcode>(b / p_);
    }
    return static_cast<gcode>(r);
  }
  gcode mul_slow(gcode a, gcode b) const;

  int p_, f_, q_;
  gcode gen_prime_ = 1;
  gcode trace_one_ = 1;
  std::vector<int> modulus_;
  std::vector<gcode> add_, neg_, exp_, log_, frob_, root_;
  std::vector<std::int8_t> trace_;
};

using Field = std::shared_ptr<const GFField>;

inline bool is_prime_small(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

namespace gfdetail {

// Polynomials over Z/p as coefficient vectors, lowest degree first.
using Poly = std::vector<int>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mod(Poly a, const Poly& m, int p) {
  trim(a);
  int dm = static_cast<int>(m.size()) - 1;
  int inv_lead = 1;
  while ((inv_lead * m.back()) % p != 1) ++inv_lead;
  while (static_cast<int>(a.size()) - 1 >= dm) {
    int shift = static_cast<int>(a.size()) - 1 - dm;
    int c = (a.back() * inv_lead) % p;
    for (int i = 0; i <= dm; ++i) a[shift + i] = ((a[shift + i] - c * m[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

inline bool irreducible(const Poly& m, int p) {
  int deg = static_cast<int>(m.size()) - 1;
  if (deg <= 1) return deg == 1;
  // trial division by every monic polynomial of degree 1..deg/2
  for (int d = 1; 2 * d <= deg; ++d) {
    int count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int code = 0; code < count; ++code) {
      Poly g(d + 1);
      int c = code;
      for (int i = 0; i < d; ++i) {
        g[i] = c % p;
        c /= p;
      }
      g[d] = 1;
      if (poly_mod(m, g, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace gfdetail

inline GFField::GFField(int p, int f, std::vector<int> modulus)
    : p_(p), f_(f), q_(1), modulus_(std::move(modulus)) {
  for (int i = 0; i < f; ++i) q_ *= p;
  neg_.resize(q_);
  for (int a = 0; a < q_; ++a) neg_[a] = add_digits(0, static_cast<gcode>(a), -1);
  if (q_ <= 256) {
    add_.resize(static_cast<std::size_t>(q_) * q_);
    for (int a = 0; a < q_; ++a)
      for (int b = 0; b < q_; ++b)
        add_[a * q_ + b] = add_digits(static_cast<gcode>(a), static_cast<gcode>(b), 1);
  }
  // find a primitive element by brute force
  exp_.assign(2 * q_, 0);
  log_.assign(q_, 0);
  for (int g = 1; g < q_; ++g) {
    std::vector<char> seen(q_, 0);
    gcode x = 1;
    int order = 0;
    do {
      seen[x] = 1;
      x = mul_slow(x, static_cast<gcode>(g));
      ++order;
    } while (x != 1 && order < q_);
    if (order == q_ - 1) {
      gcode y = 1;
      for (int k = 0; k < q_ - 1; ++k) {
        exp_[k] = y;
        exp_[k + q_ - 1] = y;
        log_[y] = k;
        y = mul_slow(y, static_cast<gcode>(g));
      }
      break;
    }
  }
  frob_.resize(q_);
  root_.resize(q_);
  trace_.resize(q_);
  for (int a = 0; a < q_; ++a) frob_[a] = pow(static_cast<gcode>(a), p_);
  for (int a = 0; a < q_; ++a) root_[frob_[a]] = static_cast<gcode>(a);
  for (int a = 0; a < q_; ++a) {
    gcode s = 0, x = static_cast<gcode>(a);
    for (int j = 0; j < f_; ++j) {
      s = add(s, x);
      x = frob_[x];
    }
    trace_[a] = static_cast<std::int8_t>(s);  // lies in the prime field
  }
  for (int a = 1; a < q_; ++a)
    if (trace_[a] == 1) {
      trace_one_ = static_cast<gcode>(a);
      break;
    }
}

inline gcode GFField::mul_slow(gcode a, gcode b) const {
  std::vector<int> x(f_), y(f_), prod(2 * f_, 0);
  for (int i = 0; i < f_; ++i) {
    x[i] = a % p_;
    a = static_cast<gcode>(a / p_);
    y[i] = b % p_;
    b = static_cast<gcode>(b / p_);
  }
  for (int i = 0; i < f_; ++i)
    for (int j = 0; j < f_; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p_;
  prod = gfdetail::poly_mod(prod, modulus_, p_);
  int r = 0, pw = 1;
  for (int i = 0; i < f_; ++i) {
    r += (i < static_cast<int>(prod.size()) ? prod[i] : 0) * pw;
    pw *= p_;
  }
  return static_cast<gcode>(r);
}

inline std::string GFField::format(gcode a) const {
  if (a == 0) return "0";
  std::string out;
  for (int i = f_ - 1; i >= 0; --i) {
    int c = digit(a, i);
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c);
    } else {
      if (c != 1) out += std::to_string(c) + "*";
      out += "w";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

/// Builds F_{p^f}. Without a modulus the monic irreducible with the smallest
/// code sum c_i p^i (i < f) is used, e.g. x^2+x+1 for F_4 and x^2+1 for F_9.
inline Field make_field(int p, int f, std::optional<std::vector<int>> modulus = std::nullopt) {
  if (!is_prime_small(p)) fail(ErrorKind::NotPrime, "gf_make", std::to_string(p) + " is not prime");
  if (p > 7) fail(ErrorKind::Unsupported, "gf_make", "p > 7");
  if (f < 1 || f > 4) fail(ErrorKind::Unsupported, "gf_make", "degree must be in 1..4");
  std::vector<int> mod;
  if (modulus) {
    mod = *modulus;
    if (static_cast<int>(mod.size()) != f + 1 || mod.back() != 1)
      fail(ErrorKind::ReducibleModulus, "gf_make", "modulus must be monic of degree f");
    for (int& c : mod) c = ((c % p) + p) % p;
    if (!gfdetail::irreducible(mod, p)) fail(ErrorKind::ReducibleModulus, "gf_make", "modulus is reducible");
  } else {
    int count = 1;
    for (int i = 0; i < f; ++i) count *= p;
    for (int code = 0; code < count; ++code) {
      std::vector<int> m(f + 1);
      int c = code;
      for (int i = 0; i < f; ++i) {
        m[i] = c % p;
        c /= p;
      }
      m[f] = 1;
      if (gfdetail::irreducible(m, p)) {
        mod = m;
        break;
      }
    }
  }
  return std::make_shared<const GFField>(p, f, mod);
}

/// Value-semantics wrapper used at API boundaries.
struct GFElement {
  Field field;
  gcode code = 0;

  GFElement() = default;
  GFElement(Field fl, gcode c) : field(std::move(fl)), code(c) {}

  friend GFElement operator+(const GFElement& a, const GFElement& b) { return {a.field, a.field->add(a.code, b.code)}; }
  friend GFElement operator-(const GFElement& a, const GFElement& b) { return {a.field, a.field->sub(a.code, b.code)}; }
  friend GFElement operator*(const GFElement& a, const GFElement& b) { return {a.field, a.field->mul(a.code, b.code)}; }
  friend bool operator==(const GFElement& a, const GFElement& b) { return a.code == b.code; }
  std::vector<int> coeffs() const {
    std::vector<int> v(field->f());
    for (int i = 0; i < field->f(); ++i) v[i] = field->digit(code, i);
    return v;
  }
  std::string str() const { return field->format(code); }
};

inline GFElement frobenius(const GFElement& a) { return {a.field, a.field->frobenius(a.code)}; }
inline int trace(const GFElement& a) { return a.field->trace(a.code); }
inline std::optional<GFElement> artin_schreier_solve(const GFElement& a) {
  auto r = a.field->artin_schreier_solve(a.code);
  if (!r) return std::nullopt;
  return GFElement(a.field, *r);
}

}  // namespace hilok

#endif  // HILOK_GF_HPP
