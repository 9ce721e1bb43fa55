#ifndef HILOK_FORMS_HPP
#define HILOK_FORMS_HPP

#include <bit>
#include <map>
#include <string>
#include <vector>

#include "hilok/parse.hpp"
#include "hilok/tower.hpp"

namespace hilok {

/// Index sets are bit masks: bit i-1 stands for dlog t_i.
using IndexMask = unsigned;

inline int popcount(IndexMask m) { return std::popcount(m); }

/// Sign of dlog_S ^ dlog_T -> dlog_{S u T} (0 if they overlap).
inline int wedge_sign(IndexMask S, IndexMask T) {
  if (S & T) return 0;
  int inv = 0;
  for (IndexMask s = S; s; s &= s - 1) {
    int i = std::countr_zero(s);
    inv += popcount(T & ((1u << i) - 1));
  }
  return (inv % 2) ? -1 : 1;
}

inline std::vector<int> mask_indices(IndexMask m) {
  std::vector<int> out;
  for (int i = 0; m >> i; ++i)
    if ((m >> i) & 1) out.push_back(i + 1);
  return out;
}

/// A q-form sum_S f_S dlog t_S over a tower field.
class QForm {
 public:
  QForm() = default;
  QForm(Spec spec, int q) : spec_(std::move(spec)), q_(q) {
    if (q < 0) fail(ErrorKind::DegreeMismatch, "form", "negative degree");
  }

  static QForm zero(const Spec& sp, int q) { return {sp, q}; }
  static QForm function(const TowerElement& f) {
    QForm w(f.spec(), 0);
    w.add_term(0, f);
    return w;
  }
  static QForm basis(const Spec& sp, IndexMask S, const TowerElement& f) {
    QForm w(sp, popcount(S));
    w.add_term(S, f);
    return w;
  }
  /// dlog t_1 ^ ... ^ dlog t_n.
  static QForm top_log(const Spec& sp) {
    return basis(sp, (1u << sp->n()) - 1, TowerElement::one(sp));
  }

  const Spec& spec() const { return spec_; }
  int q() const { return q_; }
  int n() const { return spec_->n(); }
  const std::map<IndexMask, TowerElement>& terms() const { return terms_; }

  TowerElement coeff(IndexMask S) const {
    auto it = terms_.find(S);
    return it == terms_.end() ? TowerElement::zero(spec_) : it->second;
  }

  void add_term(IndexMask S, const TowerElement& f) {
    if (popcount(S) != q_) fail(ErrorKind::DegreeMismatch, "form", "term of wrong degree");
    if (S >> n()) return;  // index beyond n: the basis form is zero
    auto it = terms_.find(S);
    if (it == terms_.end()) {
      if (!f.is_exact_zero()) terms_.emplace(S, f);
    } else {
      it->second = it->second + f;
      if (it->second.is_exact_zero()) terms_.erase(it);
    }
  }

  bool is_known_zero() const {
    for (const auto& [S, f] : terms_)
      if (!f.is_known_zero()) return false;
    return true;
  }
  bool is_exact() const {
    for (const auto& [S, f] : terms_)
      if (!f.is_exact()) return false;
    return true;
  }
  bool equals_within(const QForm& o) const { return (*this - o).is_known_zero(); }

  friend QForm operator+(const QForm& a, const QForm& b) {
    check(a, b, "form_add");
    QForm r = a;
    for (const auto& [S, f] : b.terms_) r.add_term(S, f);
    return r;
  }
  friend QForm operator-(const QForm& a, const QForm& b) {
    check(a, b, "form_sub");
    QForm r = a;
    for (const auto& [S, f] : b.terms_) r.add_term(S, -f);
    return r;
  }
  QForm operator-() const { return map_coeffs([](const TowerElement& f) { return -f; }); }
  QForm& operator+=(const QForm& b) { return *this = *this + b; }
  QForm& operator-=(const QForm& b) { return *this = *this - b; }

  QForm scale(const TowerElement& g) const {
    return map_coeffs([&](const TowerElement& f) { return f * g; });
  }
  QForm scale_scalar(gcode c) const {
    return map_coeffs([&](const TowerElement& f) { return f.scale(c); });
  }
  QForm scale_int(long k) const { return scale_scalar(spec_->F().from_int(k)); }

  template <class Fn>
  QForm map_coeffs(Fn fn) const {
    QForm r(spec_, q_);
    for (const auto& [S, f] : terms_) r.add_term(S, fn(f));
    return r;
  }

  std::string str() const;

 private:
  static void check(const QForm& a, const QForm& b, const char* op) {
    if (!a.spec_->compatible(*b.spec_)) fail(ErrorKind::SpecMismatch, op, "forms over different fields");
    if (a.q_ != b.q_) fail(ErrorKind::DegreeMismatch, op, "degrees differ");
  }
  Spec spec_;
  int q_ = 0;
  std::map<IndexMask, TowerElement> terms_;
};

inline QForm wedge(const QForm& a, const QForm& b) {
  if (!a.spec()->compatible(*b.spec())) fail(ErrorKind::SpecMismatch, "wedge", "forms over different fields");
  QForm r(a.spec(), a.q() + b.q());
  for (const auto& [S, f] : a.terms())
    for (const auto& [T, g] : b.terms()) {
      int s = wedge_sign(S, T);
      if (s == 0) continue;
      TowerElement c = f * g;
      r.add_term(S | T, s > 0 ? c : -c);
    }
  return r;
}

/// Exterior derivative: d(f dlog_S) = sum_i theta_i(f) dlog t_i ^ dlog_S.
inline QForm ext_d(const QForm& w) {
  QForm r(w.spec(), w.q() + 1);
  int n = w.n();
  for (const auto& [S, f] : w.terms())
    for (int i = 1; i <= n; ++i) {
      IndexMask bit = 1u << (i - 1);
      if (S & bit) continue;
      TowerElement th = f.theta(i);
      if (th.is_exact_zero()) continue;
      r.add_term(S | bit, wedge_sign(bit, S) > 0 ? th : -th);
    }
  return r;
}

inline QForm cartier(const QForm& w) {
  return w.map_coeffs([](const TowerElement& f) { return f.cartier(); });
}

/// Frobenius on forms: f dlog_S -> f^p dlog_S.
inline QForm frobenius(const QForm& w) {
  return w.map_coeffs([](const TowerElement& f) { return f.frobenius(); });
}

/// dlog x = x^{-1} sum_i theta_i(x) dlog t_i.
inline QForm dlog(const TowerElement& x) {
  if (x.is_exact_zero()) fail(ErrorKind::ZeroEntry, "dlog", "dlog of zero");
  const Spec& sp = x.spec();
  QForm r(sp, 1);
  TowerElement xi = x.inv();
  for (int i = 1; i <= sp->n(); ++i) {
    TowerElement th = x.theta(i);
    if (th.is_exact_zero()) continue;
    r.add_term(1u << (i - 1), th * xi);
  }
  return r;
}

inline QForm dlog_wedge(const std::vector<TowerElement>& xs, const Spec& sp) {
  QForm acc = QForm::function(TowerElement::one(sp));
  for (const auto& x : xs) acc = wedge(acc, dlog(x));
  return acc;
}

struct CartierDecomposition {
  QForm theta1;
  gcode c = 0;
};

/// Top form w = (1-C) theta1 + c dlog t_1 ^ ... ^ dlog t_n. c is the constant
/// coefficient; theta1 = sum_k C^k(w - c) on the known part of w, carrying
/// w's window. Only Tr(c) is canonical.
inline CartierDecomposition cartier_decompose(const QForm& w) {
  const Spec& sp = w.spec();
  int n = sp->n();
  if (w.q() != n) fail(ErrorKind::DegreeMismatch, "cartier_decompose", "form is not of top degree");
  TowerElement f = w.coeff((1u << n) - 1);
  std::vector<int> zero(n, 0);
  gcode c;
  try {
    c = f.coeff_at(zero);
  } catch (const error&) {
    fail(ErrorKind::NonConvergence, "cartier_decompose", "constant coefficient outside the window");
  }
  TowerElement g = f - TowerElement::scalar(sp, c);
  TowerElement g_poly = TowerElement::zero(sp);
  for (const auto& [E, a] : g.monomials()) g_poly += TowerElement::monomial(sp, E, a);
  TowerElement acc = TowerElement::zero(sp);
  TowerElement cur = g_poly;
  int bound = 64 + sp->F().f();
  for (int k = 0; !cur.is_exact_zero(); ++k) {
    if (k > bound) fail(ErrorKind::NonConvergence, "cartier_decompose", "C-iteration did not stabilize");
    acc += cur;
    cur = cur.cartier();
  }
  acc += g - g;  // carry the window of w
  CartierDecomposition out;
  out.theta1 = QForm::basis(sp, (1u << n) - 1, acc);
  out.c = c;
  return out;
}

/// Residue trace of a top form: Tr(c) with c from cartier_decompose.
inline int delta_top(const QForm& w) {
  const Spec& sp = w.spec();
  int n = sp->n();
  if (w.q() != n) fail(ErrorKind::DegreeMismatch, "delta_top", "form is not of top degree");
  std::vector<int> zero(n, 0);
  gcode c;
  try {
    c = w.coeff((1u << n) - 1).coeff_at(zero);
  } catch (const error&) {
    fail(ErrorKind::NonConvergence, "delta_top", "constant coefficient outside the window");
  }
  return sp->F().trace(c);
}

/// Membership in the logarithmic forms: dw = 0 and C(w) = w on the window.
inline bool is_logarithmic(const QForm& w) {
  if (!ext_d(w).is_known_zero()) return false;
  return (cartier(w) - w).is_known_zero();
}

/// Degree-(q-1) antiderivative of an exact form, chosen monomial-wise: at a
/// monomial T^E the contraction with t_j for the first j with p not dividing
/// e_j, divided by e_j. Monomials with all e_i divisible by p must be absent.
inline QForm d_preimage(const QForm& w) {
  const Spec& sp = w.spec();
  const GFField& F = sp->F();
  int n = sp->n(), p = sp->p();
  if (w.q() == 0) fail(ErrorKind::DegreeMismatch, "d_preimage", "0-forms are not exact");
  QForm r(sp, w.q() - 1);
  auto first_unit = [p](const std::vector<int>& E) {
    for (std::size_t j = 0; j < E.size(); ++j)
      if (pos_mod(E[j], p) != 0) return static_cast<int>(j) + 1;
    return 0;
  };
  for (const auto& [S, f] : w.terms()) {
    for (int j = 1; j <= n; ++j) {
      IndexMask bit = 1u << (j - 1);
      if (!(S & bit)) continue;
      IndexMask rest = S & ~bit;
      int sign = wedge_sign(bit, rest);
      TowerElement part = f.map([&](const std::vector<int>& E, gcode c) -> gcode {
        if (first_unit(E) != j) return 0;
        gcode v = F.div(c, F.from_int(E[j - 1]));
        return sign > 0 ? v : F.neg(v);
      });
      r.add_term(rest, part);
    }
  }
  return r;
}

inline std::string QForm::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  std::vector<IndexMask> keys;
  for (const auto& [S, f] : terms_) keys.push_back(S);
  std::sort(keys.begin(), keys.end(), [](IndexMask a, IndexMask b) {
    auto ia = mask_indices(a), ib = mask_indices(b);
    return ia < ib;
  });
  for (IndexMask S : keys) {
    const TowerElement& f = terms_.at(S);
    std::string cs = f.str();
    std::string dl;
    for (int i : mask_indices(S)) dl += " dlog " + spec_->names()[i - 1];
    std::string term;
    if (dl.empty())
      term = "(" + cs + ")";
    else if (cs == "1")
      term = dl.substr(1);
    else
      term = "(" + cs + ")" + dl;
    out += out.empty() ? term : " + " + term;
  }
  return out;
}

/// Form expressions: sums of products of element factors, `dlog x` and
/// `d x`, e.g. "(1/u) dlog t dlog u" or "t^2 dlog t - dlog(1+u)".
inline QForm parse_form(const Spec& spec, const std::string& text) {
  ExprReader r(spec, text, "parse_form");
  auto factor = [&]() -> QForm {
    if (r.at_ident("dlog")) {
      r.next();
      TowerElement x = r.power();
      if (x.is_exact_zero()) fail(ErrorKind::ZeroEntry, "parse_form", "dlog of zero");
      return dlog(x);
    }
    if (r.at_ident("d")) {
      r.next();
      return ext_d(QForm::function(r.power()));
    }
    return QForm::function(r.power());
  };
  auto starts = [&]() { return r.at_ident("dlog") || r.at_ident("d") || r.starts_primary(); };
  auto term = [&]() -> QForm {
    QForm acc = factor();
    for (;;) {
      if (r.at_sym("*")) {
        r.next();
        acc = wedge(acc, factor());
      } else if (r.at_sym("/")) {
        r.next();
        TowerElement d = r.power();
        acc = acc.scale(d.inv());
      } else if (starts()) {
        acc = wedge(acc, factor());
      } else {
        break;
      }
    }
    return acc;
  };
  if (r.at_end()) r.error("empty form");
  QForm acc;
  bool first = true;
  for (;;) {
    bool minus = false;
    if (r.at_sym("+") || r.at_sym("-")) {
      minus = r.next().text == "-";
    } else if (!first) {
      break;
    }
    QForm t = term();
    if (first) {
      acc = minus ? -t : t;
    } else {
      if (t.q() != acc.q()) fail(ErrorKind::DegreeMismatch, "parse_form", "summands of different degree");
      acc = minus ? acc - t : acc + t;
    }
    first = false;
  }
  r.expect_end();
  return acc;
}

}  // namespace hilok

#endif  // HILOK_FORMS_HPP
