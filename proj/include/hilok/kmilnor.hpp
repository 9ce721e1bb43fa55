#ifndef HILOK_KMILNOR_HPP
#define HILOK_KMILNOR_HPP

#include <memory>
#include <string>
#include <vector>

#include "hilok/forms.hpp"

namespace hilok {

inline int default_level_cap() { return 6; }

struct Symbol {
  long coeff = 1;
  std::vector<TowerElement> entries;
};

struct GradedDecomposition;
using GradedPtr = std::shared_ptr<const GradedDecomposition>;

/// gr_i for i >= 1. For p not dividing i only `first` is used (a (q-1)-form
/// over the residue field). For p | i, `first` and `second` are the canonical
/// d-preimages (degrees q-1 and q-2) standing for classes modulo closed forms.
struct GradedLevel {
  int i = 0;
  bool divisible = false;
  QForm first, second;
  bool is_zero() const { return first.is_known_zero() && second.is_known_zero(); }
};

/// Graded components of a class in K_q(K)/(p, U_N), recursively over the
/// residue fields. Over the finite field only K_0 = Z/p survives (`scalar`).
struct GradedDecomposition {
  Spec spec;
  int q = 0;
  int N = 0;
  int scalar = 0;
  GradedPtr gr0a, gr0b;
  std::vector<GradedLevel> levels;  // levels[i-1] is gr_i

  bool gr0_zero() const {
    if (spec->n() == 0) return scalar == 0;
    return (!gr0a || gr0a->is_zero()) && (!gr0b || gr0b->is_zero());
  }
  bool is_zero() const {
    if (!gr0_zero()) return false;
    for (const auto& l : levels)
      if (!l.is_zero()) return false;
    return true;
  }
  /// Largest i <= N with the class in U_i.
  int u_level() const {
    if (!gr0_zero()) return 0;
    for (const auto& l : levels)
      if (!l.is_zero()) return l.i;
    return N;
  }
};

namespace kdetail {

inline IndexMask top_bit(const Spec& sp) { return 1u << (sp->n() - 1); }

/// The t_n^i part of w as (A, B) with w_i = A + B ^ dlog t_n, over the residue.
inline std::pair<QForm, QForm> split_level(const QForm& w, int i) {
  const Spec& sp = w.spec();
  const Spec& res = sp->residue();
  IndexMask top = top_bit(sp);
  QForm A(res, w.q());
  QForm B(res, w.q() > 0 ? w.q() - 1 : 0);
  for (const auto& [S, f] : w.terms()) {
    TowerElement c = f.coeff(i);
    if (S & top)
      B.add_term(S & ~top, c);
    else
      A.add_term(S, c);
  }
  return {A, B};
}

inline QForm lift_form(const Spec& sp, const QForm& w, int shift = 0) {
  QForm r(sp, w.q());
  for (const auto& [S, f] : w.terms()) {
    TowerElement c = TowerElement::lift(sp, f);
    r.add_term(S, shift ? c.shift(sp->n(), shift) : c);
  }
  return r;
}

inline QForm dlog_pi(const Spec& sp) { return QForm::basis(sp, top_bit(sp), TowerElement::one(sp)); }

}  // namespace kdetail

/// Symbols {1 + f_S~ pi^i, t_S} for the terms f_S dlog t_S of a residue form.
inline std::vector<Symbol> rho_symbols(const Spec& sp, int i, const QForm& w) {
  std::vector<Symbol> out;
  for (const auto& [S, f] : w.terms()) {
    if (f.is_known_zero()) continue;
    Symbol s;
    s.entries.push_back(TowerElement::one(sp) + TowerElement::lift(sp, f).shift(sp->n(), i));
    for (int j : mask_indices(S)) s.entries.push_back(TowerElement::var(sp, j));
    out.push_back(std::move(s));
  }
  return out;
}

inline QForm symbol_form(const Spec& sp, const Symbol& s) {
  return dlog_wedge(s.entries, sp).scale_int(s.coeff);
}

/// Graded decomposition of a logarithmic q-form (the dlog image of a class).
inline GradedDecomposition decompose_form(const QForm& w, int q, int N) {
  const Spec& sp = w.spec();
  const GFField& F = sp->F();
  int p = sp->p();
  GradedDecomposition g;
  g.spec = sp;
  g.q = q;
  g.N = N;
  if (sp->n() == 0) {
    if (q == 0) {
      gcode c = w.coeff(0).is_exact_zero() ? 0 : ser::scalar_of(w.coeff(0).series());
      if (c >= p) fail(ErrorKind::InternalInconsistency, "graded_decompose", "K_0 component outside Z/p");
      g.scalar = c;
    }
    return g;
  }
  const Spec& res = sp->residue();
  auto [A0, B0] = kdetail::split_level(w, 0);
  g.gr0a = std::make_shared<GradedDecomposition>(decompose_form(A0, q, N));
  if (q >= 1) g.gr0b = std::make_shared<GradedDecomposition>(decompose_form(B0, q - 1, N));
  QForm cur = w - kdetail::lift_form(sp, A0);
  if (q >= 1) cur -= wedge(kdetail::lift_form(sp, B0), kdetail::dlog_pi(sp));
  auto inconsistent = [](int i) {
    fail(ErrorKind::InternalInconsistency, "graded_decompose",
         "form is not logarithmic at level " + std::to_string(i) + " (precision too low?)");
  };
  for (int i = 1; i < N; ++i) {
    auto [A, B] = kdetail::split_level(cur, i);
    GradedLevel lv;
    lv.i = i;
    lv.divisible = (i % p == 0);
    lv.first = QForm(res, q >= 1 ? q - 1 : 0);
    lv.second = QForm(res, q >= 2 ? q - 2 : 0);
    std::vector<Symbol> reps;
    if (!lv.divisible) {
      if (q == 0) {
        if (!A.is_known_zero()) inconsistent(i);
      } else {
        gcode s = F.inv(F.from_int(i));
        if ((q - 1) % 2) s = F.neg(s);
        lv.first = B.scale_scalar(s);
        if (!(A - ext_d(lv.first)).is_known_zero()) inconsistent(i);
        reps = rho_symbols(sp, i, lv.first);
      }
    } else {
      if (q == 0) {
        if (!A.is_known_zero()) inconsistent(i);
      } else {
        lv.first = d_preimage(A);
        if (!(ext_d(lv.first) - A).is_known_zero()) inconsistent(i);
        reps = rho_symbols(sp, i, lv.first);
        if (q >= 2) {
          lv.second = d_preimage(B);
          if (!(ext_d(lv.second) - B).is_known_zero()) inconsistent(i);
          for (auto s : rho_symbols(sp, i, lv.second)) {
            s.entries.push_back(TowerElement::var(sp, sp->n()));
            reps.push_back(std::move(s));
          }
        } else if (!B.is_known_zero()) {
          inconsistent(i);
        }
      }
    }
    for (const auto& s : reps) cur -= symbol_form(sp, s);
    g.levels.push_back(std::move(lv));
  }
  return g;
}

/// An element of K_q(K)/(p, U_N): a formal Z-combination of symbols. The level
/// cap applies at every level of the tower.
class KClass {
 public:
  KClass() = default;
  KClass(Spec spec, int q, int N = default_level_cap()) : spec_(std::move(spec)), q_(q), N_(N) {
    if (q < 0) fail(ErrorKind::DegreeMismatch, "kclass", "negative degree");
    if (N < 1) fail(ErrorKind::SyntaxError, "kclass", "level cap must be positive");
  }

  static KClass symbol(const Spec& sp, const std::vector<TowerElement>& xs, int N = default_level_cap()) {
    KClass k(sp, static_cast<int>(xs.size()), N);
    k.add_symbol(xs, 1);
    return k;
  }

  const Spec& spec() const { return spec_; }
  int q() const { return q_; }
  int N() const { return N_; }
  const std::vector<Symbol>& terms() const { return terms_; }

  void add_symbol(const std::vector<TowerElement>& xs, long coeff) {
    if (static_cast<int>(xs.size()) != q_) fail(ErrorKind::DegreeMismatch, "symbol", "wrong number of entries");
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (!xs[j].spec()->compatible(*spec_)) fail(ErrorKind::SpecMismatch, "symbol", "entry over another field");
      if (xs[j].is_known_zero())
        fail(ErrorKind::ZeroEntry, "symbol", "entry " + std::to_string(j + 1) + " is zero");
    }
    terms_.push_back({coeff, xs});
    cache_.reset();
  }

  friend KClass operator+(const KClass& a, const KClass& b) {
    check(a, b, "kclass_add");
    KClass r = a;
    r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
    r.cache_.reset();
    return r;
  }
  KClass scale(long k) const {
    KClass r = *this;
    for (auto& t : r.terms_) t.coeff *= k;
    r.cache_.reset();
    return r;
  }
  KClass operator-() const { return scale(-1); }
  friend KClass operator-(const KClass& a, const KClass& b) { return a + (-b); }

  /// Sum of coeff * dlog x_1 ^ ... ^ dlog x_q.
  QForm form() const {
    QForm acc(spec_, q_);
    for (const auto& t : terms_) {
      long c = t.coeff % spec_->p();
      if (c == 0) continue;
      acc += dlog_wedge(t.entries, spec_).scale_int(c);
    }
    return acc;
  }

  const GradedDecomposition& graded() const {
    if (!cache_) cache_ = std::make_shared<GradedDecomposition>(decompose_form(form(), q_, N_));
    return *cache_;
  }
  bool is_zero() const { return graded().is_zero(); }
  int u_level() const { return graded().u_level(); }
  bool equals(const KClass& o) const { return (*this - o).is_zero(); }

  std::string str() const;

 private:
  static void check(const KClass& a, const KClass& b, const char* op) {
    if (!a.spec_->compatible(*b.spec_)) fail(ErrorKind::SpecMismatch, op, "classes over different fields");
    if (a.q_ != b.q_) fail(ErrorKind::DegreeMismatch, op, "degrees differ");
    if (a.N_ != b.N_) fail(ErrorKind::SpecMismatch, op, "level caps differ");
  }
  Spec spec_;
  int q_ = 0;
  int N_ = default_level_cap();
  std::vector<Symbol> terms_;
  mutable std::shared_ptr<const GradedDecomposition> cache_;
};

inline std::string symbol_string(const std::vector<TowerElement>& xs) {
  std::string s = "{";
  for (std::size_t j = 0; j < xs.size(); ++j) s += (j ? ", " : "") + xs[j].str();
  return s + "}";
}

inline std::string KClass::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    std::string s = symbol_string(t.entries);
    if (t.coeff == 1)
      out += out.empty() ? s : " + " + s;
    else if (t.coeff == -1)
      out += out.empty() ? "-" + s : " - " + s;
    else
      out += (out.empty() ? "" : " + ") + std::to_string(t.coeff) + s;
  }
  return out;
}

/// rho_i(x dlog y_1 ^ ... ^ dlog y_{q-1}) = {1 + x~ pi^i, y~_1, ..., y~_{q-1}},
/// plus {1 + z~ pi^i, w~_1, ..., pi} when a second slot is given. x, y, z, w
/// live in the residue field; lifts are constant lifts.
inline KClass rho(const Spec& sp, int i, const TowerElement& x, const std::vector<TowerElement>& ys,
                  const TowerElement* z = nullptr, const std::vector<TowerElement>& ws = {},
                  int N = default_level_cap()) {
  if (sp->n() == 0) fail(ErrorKind::Unsupported, "rho", "finite field has no filtration");
  if (i < 1) fail(ErrorKind::SyntaxError, "rho", "level must be at least 1");
  int q = static_cast<int>(ys.size()) + 1;
  KClass k(sp, q, N);
  auto one_unit = [&](const TowerElement& c) {
    return TowerElement::one(sp) + TowerElement::lift(sp, c).shift(sp->n(), i);
  };
  if (!x.is_known_zero()) {
    std::vector<TowerElement> e{one_unit(x)};
    for (const auto& y : ys) e.push_back(TowerElement::lift(sp, y));
    k.add_symbol(e, 1);
  }
  if (z) {
    if (static_cast<int>(ws.size()) + 2 != q) fail(ErrorKind::DegreeMismatch, "rho", "second slot has wrong degree");
    if (!z->is_known_zero()) {
      std::vector<TowerElement> e{one_unit(*z)};
      for (const auto& w : ws) e.push_back(TowerElement::lift(sp, w));
      e.push_back(TowerElement::var(sp, sp->n()));
      k.add_symbol(e, 1);
    }
  }
  return k;
}

/// rho_i of a whole residue form, term by term (first slot only).
inline KClass rho_form(const Spec& sp, int i, const QForm& w, int N = default_level_cap()) {
  KClass k(sp, w.q() + 1, N);
  for (auto& s : rho_symbols(sp, i, w)) k.add_symbol(s.entries, s.coeff);
  return k;
}

/// Coordinates of a class of K_1 of a one-dimensional field modulo (p, U_N):
/// [v mod p] followed by the F_p-digits of gr_i for p not dividing i.
inline std::vector<int> k1_coordinates(const GradedDecomposition& g) {
  if (g.spec->n() != 1 || g.q != 1) fail(ErrorKind::Unsupported, "k1_coordinates", "needs q = 1 over a 1-dimensional field");
  const GFField& F = g.spec->F();
  std::vector<int> out{g.gr0b ? g.gr0b->scalar : 0};
  for (const auto& l : g.levels) {
    if (l.divisible) continue;
    gcode c = 0;
    if (!l.first.terms().empty()) {
      const TowerElement& e = l.first.coeff(0);
      if (!e.is_exact_zero()) c = ser::scalar_of(e.series());
    }
    for (int j = 0; j < F.f(); ++j) out.push_back(F.digit(c, j));
  }
  return out;
}

/// Generators of K_q(K)/(p, U_N) level by level: lifted residue generators at
/// level 0 (with pi appended for the second slot) and rho-images of monomial
/// forms c T^E dlog t_S at level i, with c running over an F_p-basis and inner
/// exponents in [-box, box]. For p | i only non-closed monomials are used.
struct KGenerator {
  int level = 0;
  std::string label;
  KClass cls;
};

namespace kdetail {

inline bool monomial_closed(const std::vector<int>& E, IndexMask S, int p) {
  for (std::size_t j = 0; j < E.size(); ++j)
    if (!((S >> j) & 1) && pos_mod(E[j], p) != 0) return false;
  return true;
}

template <class Fn>
void for_each_box(int dims, int box, Fn fn) {
  std::vector<int> E(dims, -box);
  for (;;) {
    fn(E);
    int j = 0;
    while (j < dims && E[j] == box) E[j++] = -box;
    if (j == dims) return;
    ++E[j];
  }
}

inline std::vector<IndexMask> masks_of_size(int n, int q) {
  std::vector<IndexMask> out;
  if (q < 0) return out;
  for (IndexMask m = 0; m < (1u << n); ++m)
    if (popcount(m) == q) out.push_back(m);
  return out;
}

}  // namespace kdetail

inline std::vector<KGenerator> graded_generators(const Spec& sp, int q, int N, int box = 3) {
  std::vector<KGenerator> out;
  int n = sp->n(), p = sp->p();
  if (n == 0) {
    if (q == 0) out.push_back({0, "{}", KClass::symbol(sp, {}, N)});
    return out;
  }
  const Spec& res = sp->residue();
  const GFField& F = sp->F();
  auto lifted = [&](const KClass& c, bool append_pi) {
    std::vector<TowerElement> e;
    for (const auto& x : c.terms().front().entries) e.push_back(TowerElement::lift_from(sp, x));
    if (append_pi) e.push_back(TowerElement::var(sp, n));
    return KClass::symbol(sp, e, N);
  };
  for (const auto& g : graded_generators(res, q, N, box)) {
    KClass c = lifted(g.cls, false);
    out.push_back({0, "L0 " + c.str(), c});
  }
  if (q >= 1)
    for (const auto& g : graded_generators(res, q - 1, N, box)) {
      KClass c = lifted(g.cls, true);
      out.push_back({0, "L0 " + c.str(), c});
    }
  if (q == 0) return out;
  std::vector<gcode> basis;
  for (int j = 0, c = 1; j < F.f(); ++j, c *= p) basis.push_back(static_cast<gcode>(c));
  for (int i = 1; i < N; ++i) {
    bool div = (i % p == 0);
    auto emit = [&](int deg, bool with_pi) {
      for (IndexMask S : kdetail::masks_of_size(n - 1, deg))
        kdetail::for_each_box(n - 1, box, [&](const std::vector<int>& E) {
          if (div && kdetail::monomial_closed(E, S, p)) return;
          for (gcode c : basis) {
            std::vector<TowerElement> e;
            e.push_back(TowerElement::one(sp) + TowerElement::lift(sp, TowerElement::monomial(res, E, c)).shift(n, i));
            for (int j : mask_indices(S)) e.push_back(TowerElement::var(sp, j));
            if (with_pi) e.push_back(TowerElement::var(sp, n));
            KClass k = KClass::symbol(sp, e, N);
            out.push_back({i, "L" + std::to_string(i) + " " + k.str(), k});
          }
        });
    };
    emit(q - 1, false);
    if (div && q >= 2) emit(q - 2, true);
  }
  return out;
}

/// Symbol sums such as "{t, u} + 2{1+t, u} - {u, t}"; "{}" is the unit of K_0.
inline KClass parse_kclass(const Spec& spec, const std::string& text, int N = default_level_cap()) {
  ExprReader r(spec, text, "parse_symbol");
  if (r.at_end()) r.error("empty symbol expression");
  std::vector<Symbol> terms;
  bool first = true;
  for (;;) {
    long sign = 1;
    if (r.at_sym("+") || r.at_sym("-")) {
      sign = r.next().text == "-" ? -1 : 1;
    } else if (!first) {
      break;
    }
    long coeff = 1;
    if (r.peek().kind == Token::Num) {
      coeff = r.next().num;
      if (r.at_sym("*")) r.next();
    }
    r.expect("{");
    Symbol s;
    s.coeff = sign * coeff;
    if (!r.at_sym("}")) {
      s.entries.push_back(r.expr());
      while (r.at_sym(",")) {
        r.next();
        s.entries.push_back(r.expr());
      }
    }
    r.expect("}");
    terms.push_back(std::move(s));
    first = false;
  }
  r.expect_end();
  int q = static_cast<int>(terms.front().entries.size());
  KClass k(spec, q, N);
  for (const auto& s : terms) {
    if (static_cast<int>(s.entries.size()) != q)
      fail(ErrorKind::DegreeMismatch, "parse_symbol", "symbols of different length in one sum");
    k.add_symbol(s.entries, s.coeff);
  }
  return k;
}

}  // namespace hilok

#endif  // HILOK_KMILNOR_HPP
