#ifndef HILOK_TOWER_HPP
#define HILOK_TOWER_HPP

#include <cstdlib>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hilok/gf.hpp"
#include "hilok/series.hpp"

namespace hilok {

inline int default_precision() {
  if (const char* env = std::getenv("HILOK_DEFAULT_PREC")) {
    int v = std::atoi(env);
    if (v >= 1 && v <= 4096) return v;
  }
  return 16;
}

class TowerSpec;
using Spec = std::shared_ptr<const TowerSpec>;

/// K = k_0((t_1))...((t_n)); index 0 of names/prec is the innermost variable.
/// n = 0 is allowed and denotes the finite field itself (used for residues).
class TowerSpec {
 public:
  TowerSpec(Field base, int n, std::vector<std::string> names, std::vector<int> prec)
      : base_(std::move(base)), n_(n), names_(std::move(names)), prec_(std::move(prec)) {}

  const Field& base() const { return base_; }
  const GFField& F() const { return *base_; }
  int n() const { return n_; }
  int p() const { return base_->p(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& prec() const { return prec_; }
  const Spec& residue() const { return residue_; }

  bool compatible(const TowerSpec& o) const {
    return this == &o || (base_->same_as(*o.base_) && n_ == o.n_ && names_ == o.names_);
  }

  int var_index(const std::string& name) const {
    for (int i = 0; i < n_; ++i)
      if (names_[i] == name) return i + 1;
    return 0;
  }

  std::string str(bool with_prec = true) const {
    std::string s = base_->spec_string();
    for (const auto& v : names_) s += "((" + v + "))";
    if (with_prec && n_ > 0) {
      s += "@prec=";
      for (int i = 0; i < n_; ++i) s += (i ? "," : "") + std::to_string(prec_[i]);
    }
    return s;
  }

 private:
  friend Spec make_spec(Field, int, std::vector<std::string>, std::vector<int>);
  Field base_;
  int n_;
  std::vector<std::string> names_;
  std::vector<int> prec_;
  Spec residue_;
};

inline Spec make_spec(Field base, int n, std::vector<std::string> names = {}, std::vector<int> prec = {}) {
  if (n < 0 || n > 3) fail(ErrorKind::Unsupported, "tower_spec", "dimension must be in 0..3");
  static const char* defaults[] = {"t", "u", "v"};
  if (names.empty())
    for (int i = 0; i < n; ++i) names.emplace_back(defaults[i]);
  if (static_cast<int>(names.size()) != n) fail(ErrorKind::SyntaxError, "tower_spec", "variable count mismatch");
  for (int i = 0; i < n; ++i) {
    if (names[i] == "w" || names[i] == "O" || names[i] == "dlog" || names[i] == "d")
      fail(ErrorKind::SyntaxError, "tower_spec", "reserved variable name '" + names[i] + "'");
    for (int j = 0; j < i; ++j)
      if (names[i] == names[j]) fail(ErrorKind::SyntaxError, "tower_spec", "duplicate variable " + names[i]);
  }
  if (prec.empty()) prec.assign(n, default_precision());
  if (static_cast<int>(prec.size()) != n) fail(ErrorKind::SyntaxError, "tower_spec", "precision list length mismatch");
  for (int v : prec)
    if (v < 1) fail(ErrorKind::SyntaxError, "tower_spec", "precision caps must be positive");
  auto s = std::make_shared<TowerSpec>(base, n, names, prec);
  if (n > 0) {
    std::vector<std::string> rn(names.begin(), names.end() - 1);
    std::vector<int> rp(prec.begin(), prec.end() - 1);
    s->residue_ = make_spec(base, n - 1, rn, rp);
  }
  return s;
}

inline Spec with_precision(const Spec& s, std::vector<int> prec) { return make_spec(s->base(), s->n(), s->names(), std::move(prec)); }

/// An element of the tower with its precision window.
class TowerElement {
 public:
  TowerElement() = default;
  TowerElement(Spec spec, Series s) : spec_(std::move(spec)), s_(std::move(s)) { ser::normalize(s_, spec_->n()); }

  static TowerElement zero(const Spec& sp) { return {sp, ser::zero_exact()}; }
  static TowerElement scalar(const Spec& sp, gcode c) {
    std::vector<int> E(sp->n(), 0);
    return {sp, ser::monomial(sp->n(), E, c)};
  }
  static TowerElement one(const Spec& sp) { return scalar(sp, 1); }
  static TowerElement from_int(const Spec& sp, long v) { return scalar(sp, sp->F().from_int(v)); }
  /// t_i^k for 1 <= i <= n.
  static TowerElement var(const Spec& sp, int i, int k = 1) {
    std::vector<int> E(sp->n(), 0);
    E[i - 1] = k;
    return {sp, ser::monomial(sp->n(), E, 1)};
  }
  static TowerElement monomial(const Spec& sp, const std::vector<int>& E, gcode c) {
    return {sp, ser::monomial(sp->n(), E, c)};
  }
  /// O(t_1^E_1 ... t_n^E_n): zero with the innermost level unknown from E_1 on.
  static TowerElement big_o(const Spec& sp, const std::vector<int>& E, int level) {
    int n = sp->n();
    Series s;
    s.hi = E[level - 1];
    for (int d = level + 1; d <= n; ++d) {
      Series outer;
      outer.lo = 0;
      outer.ch = {s};
      s = outer;
    }
    TowerElement r(sp, s);
    for (int d = level + 1; d <= n; ++d) r.s_ = ser::shift(r.s_, n, d, E[d - 1]);
    return r;
  }

  const Spec& spec() const { return spec_; }
  const Series& series() const { return s_; }
  int n() const { return spec_->n(); }
  const GFField& F() const { return spec_->F(); }

  bool is_known_zero() const { return ser::known_zero(s_, n()); }
  bool is_exact_zero() const { return ser::exact_zero(s_, n()); }
  bool is_exact() const { return ser::is_exact(s_, n()); }
  bool leading_known() const { return ser::leading_known(s_, n()); }
  bool equals_within(const TowerElement& o) const { return (*this - o).is_known_zero(); }

  TowerElement operator-() const { return {spec_, ser::neg(F(), s_, n())}; }
  friend TowerElement operator+(const TowerElement& a, const TowerElement& b) {
    check(a, b, "add");
    return {a.spec_, ser::add(a.F(), a.s_, b.s_, a.n())};
  }
  friend TowerElement operator-(const TowerElement& a, const TowerElement& b) {
    check(a, b, "sub");
    return {a.spec_, ser::add(a.F(), a.s_, b.s_, a.n(), true)};
  }
  friend TowerElement operator*(const TowerElement& a, const TowerElement& b) {
    check(a, b, "mul");
    return {a.spec_, ser::mul(a.F(), a.s_, b.s_, a.n())};
  }
  friend TowerElement operator/(const TowerElement& a, const TowerElement& b) {
    check(a, b, "div");
    return a * b.inv();
  }
  TowerElement& operator+=(const TowerElement& b) { return *this = *this + b; }
  TowerElement& operator-=(const TowerElement& b) { return *this = *this - b; }
  TowerElement& operator*=(const TowerElement& b) { return *this = *this * b; }

  TowerElement scale(gcode c) const { return {spec_, ser::scale(F(), s_, n(), c)}; }
  TowerElement scale_int(long k) const { return scale(F().from_int(k)); }

  TowerElement inv() const {
    if (is_exact_zero()) fail(ErrorKind::DivisionByZero, "div", "division by zero");
    if (!leading_known()) fail(ErrorKind::ZeroOrUnknownLeadingTerm, "div", "leading term of divisor unknown");
    return {spec_, ser::inv(F(), s_, n(), spec_->prec())};
  }

  TowerElement pow(long e) const {
    if (e < 0) return inv().pow(-e);
    TowerElement r = one(spec_), b = *this;
    while (e > 0) {
      if (e & 1) r = r * b;
      e >>= 1;
      if (e) b = b * b;
    }
    return r;
  }

  /// (v_n, ..., v_1), outermost first.
  std::vector<int> valuation() const {
    if (!leading_known()) fail(ErrorKind::ZeroOrUnknownLeadingTerm, "valuation", "zero or unknown leading term");
    std::vector<int> v;
    ser::valuation(s_, n(), v);
    return v;
  }
  int outer_valuation() const {
    if (n() == 0) fail(ErrorKind::Unsupported, "valuation", "finite field has no valuation");
    if (ser::empty(s_, n())) fail(ErrorKind::ZeroOrUnknownLeadingTerm, "valuation", "zero or unknown leading term");
    if (n() >= 2 && ser::known_zero(s_.ch[0], n() - 1))
      fail(ErrorKind::ZeroOrUnknownLeadingTerm, "valuation", "leading coefficient unknown");
    return s_.lo;
  }
  /// Lower bound for v_n that never fails.
  int outer_vlb() const { return ser::vlb(s_, n()); }
  int outer_hi() const { return s_.hi; }

  /// Coefficient of t_n^k as an element of the residue tower.
  TowerElement coeff(int k) const {
    if (k >= s_.hi) fail(ErrorKind::PrecisionExhausted, "coefficient", "index beyond window");
    return {spec_->residue(), ser::entry(s_, n(), k)};
  }
  /// The scalar coefficient of T^E (must lie in the window).
  gcode coeff_at(const std::vector<int>& E) const {
    Series cur = s_;
    for (int d = n(); d >= 1; --d) {
      if (E[d - 1] >= cur.hi) fail(ErrorKind::PrecisionExhausted, "coefficient", "monomial outside window");
      cur = ser::entry(cur, d, E[d - 1]);
    }
    return ser::scalar_of(cur);
  }
  /// Embeds an element of the residue tower as a t_n-constant.
  static TowerElement lift(const Spec& sp, const TowerElement& c) { return {sp, ser::lift(c.s_, sp->n())}; }
  /// Embeds a base-field scalar or lower tower by repeated lifting.
  static TowerElement lift_from(const Spec& sp, const TowerElement& c) {
    if (c.n() == sp->n()) return c;
    return lift(sp, lift_from(sp->residue(), c));
  }

  std::pair<int, TowerElement> unit_decompose() const {
    int m = outer_valuation();
    return {m, shift(n(), -m)};
  }
  /// Reduction O_K -> k_{n-1}.
  TowerElement residue_reduce() const {
    if (!ser::empty(s_, n()) && s_.lo < 0 && !ser::known_zero(ser::entry(s_, n(), s_.lo), n() - 1))
      fail(ErrorKind::NegativeValuation, "residue_reduce", "element has a pole in " + spec_->names().back());
    if (!ser::empty(s_, n()) && s_.lo < 0)
      fail(ErrorKind::NegativeValuation, "residue_reduce", "element may have a pole");
    return coeff(0);
  }

  TowerElement shift(int var, int k) const { return {spec_, ser::shift(s_, n(), var, k)}; }
  TowerElement frobenius() const { return {spec_, ser::frobenius(F(), s_, n())}; }
  TowerElement cartier() const { return {spec_, ser::cartier(F(), s_, n())}; }
  /// Euler derivation t_i d/dt_i.
  TowerElement theta(int var) const {
    const GFField& Fl = F();
    return map([&](const std::vector<int>& E, gcode c) { return Fl.mul(c, Fl.from_int(E[var - 1])); });
  }
  TowerElement truncate_outer(int N) const { return {spec_, ser::truncate(s_, n(), N)}; }
  TowerElement restrict_all(int bound) const { return {spec_, ser::restrict_all(s_, n(), bound)}; }
  TowerElement map(const std::function<gcode(const std::vector<int>&, gcode)>& fn) const {
    Series r = s_;
    std::vector<int> E(n(), 0);
    ser::map_monomials(F(), r, n(), E, fn);
    return {spec_, r};
  }
  /// Keeps monomials satisfying pred (window unchanged).
  TowerElement filter(const std::function<bool(const std::vector<int>&)>& pred) const {
    return map([&](const std::vector<int>& E, gcode c) { return pred(E) ? c : gcode(0); });
  }
  void for_each(const std::function<void(const std::vector<int>&, gcode)>& fn) const {
    std::vector<int> E(n(), 0);
    ser::for_each_monomial(s_, n(), E, fn);
  }
  std::vector<std::pair<std::vector<int>, gcode>> monomials() const {
    std::vector<std::pair<std::vector<int>, gcode>> out;
    for_each([&](const std::vector<int>& E, gcode c) { out.emplace_back(E, c); });
    return out;
  }
  /// Finite precision bounds: (exponents of the outer variables, level, hi).
  struct Bound {
    std::vector<int> at;
    int level;
    int hi;
  };
  std::vector<Bound> bounds() const {
    std::vector<Bound> out;
    std::vector<int> E(n(), 0);
    ser::for_each_bound(s_, n(), E, [&](const std::vector<int>& e, int d, int hi) {
      out.push_back({std::vector<int>(e.begin() + d, e.end()), d, hi});
    });
    return out;
  }

  std::string str() const;

 private:
  static void check(const TowerElement& a, const TowerElement& b, const char* op) {
    if (!a.spec_ || !b.spec_ || !a.spec_->compatible(*b.spec_))
      fail(ErrorKind::SpecMismatch, op, "operands live in different fields");
  }
  Spec spec_;
  Series s_;
};

inline std::string monomial_string(const TowerSpec& sp, const std::vector<int>& E) {
  std::string s;
  for (int i = 0; i < sp.n(); ++i) {
    if (E[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += sp.names()[i];
    if (E[i] != 1) s += "^" + (E[i] < 0 ? "(" + std::to_string(E[i]) + ")" : std::to_string(E[i]));
  }
  return s;
}

/// Sorts exponent vectors by the rank-n order (outermost first).
inline bool rank_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

inline std::string TowerElement::str() const {
  const TowerSpec& sp = *spec_;
  if (sp.n() == 0) return F().format(ser::scalar_of(s_));
  auto mons = monomials();
  std::sort(mons.begin(), mons.end(), [](const auto& a, const auto& b) { return rank_less(a.first, b.first); });
  std::string out;
  for (const auto& [E, c] : mons) {
    std::string m = monomial_string(sp, E);
    std::string cs = F().format(c);
    bool compound = cs.find('+') != std::string::npos;
    std::string term;
    if (m.empty())
      term = compound ? "(" + cs + ")" : cs;
    else if (cs == "1")
      term = m;
    else
      term = (compound ? "(" + cs + ")" : cs) + "*" + m;
    out += out.empty() ? term : " + " + term;
  }
  for (const auto& b : bounds()) {
    std::vector<int> E(sp.n(), 0);
    for (std::size_t j = 0; j < b.at.size(); ++j) E[b.level + j] = b.at[j];
    std::string o = "O(" + sp.names()[b.level - 1] + "^" +
                    (b.hi < 0 ? "(" + std::to_string(b.hi) + ")" : std::to_string(b.hi)) + ")";
    E[b.level - 1] = 0;
    std::string rest = monomial_string(sp, E);
    std::string term = rest.empty() ? o : o + "*" + rest;
    out += out.empty() ? term : " + " + term;
  }
  return out.empty() ? "0" : out;
}

struct ResidueClass {
  std::vector<int> s;  // exponents mod p, index 0 = t_1
  TowerElement one_unit;
  gcode scalar = 1;
};

/// x = T^v * c * one_unit modulo p-th powers, with one_unit - 1 free of
/// monomials whose exponents are all divisible by p.
inline ResidueClass p_residue_class(const TowerElement& x) {
  const Spec& sp = x.spec();
  int n = sp->n(), p = sp->p();
  const GFField& F = sp->F();
  std::vector<int> v = x.valuation();  // outermost first
  std::vector<int> E(n);
  for (int i = 0; i < n; ++i) E[i] = v[n - 1 - i];
  gcode c = x.coeff_at(E);
  TowerElement u = (x * TowerElement::monomial(sp, E, 1).inv()).scale(F.inv(c));
  ResidueClass rc;
  rc.scalar = c;
  for (int i = 0; i < n; ++i) rc.s.push_back(pos_mod(E[i], p));
  long budget = 1;
  for (int i = 0; i < n; ++i) budget *= 4L * sp->prec()[i] + 8;
  for (long it = 0;; ++it) {
    if (it > budget) fail(ErrorKind::PrecisionExhausted, "p_residue_class", "reduction did not terminate");
    std::vector<int> best;
    gcode bc = 0;
    TowerElement w = u - TowerElement::one(sp);
    w.for_each([&](const std::vector<int>& e, gcode cc) {
      bool div = true, zero = true;
      for (int ei : e) {
        if (ei % p != 0) div = false;
        if (ei != 0) zero = false;
      }
      if (!div || zero) return;
      if (best.empty() || rank_less(e, best)) {
        best = e;
        bc = cc;
      }
    });
    if (best.empty()) break;
    TowerElement factor = TowerElement::one(sp) + TowerElement::monomial(sp, best, bc);
    u = u * factor.inv();
  }
  rc.one_unit = u;
  return rc;
}

}  // namespace hilok

#endif  // HILOK_TOWER_HPP
