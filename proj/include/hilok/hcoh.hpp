#ifndef HILOK_HCOH_HPP
#define HILOK_HCOH_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hilok/forms.hpp"

namespace hilok {

/// A class of H_p^r(K) = Omega^{r-1} / ((F-1) Omega^{r-1} + d Omega^{r-2}),
/// where F(f dlog t_S) = f^p dlog t_S.
class CohClass {
 public:
  CohClass() = default;
  CohClass(int r, QForm rep, bool reduced = false) : r_(r), rep_(std::move(rep)), reduced_(reduced) {
    if (r_ < 1) fail(ErrorKind::DegreeMismatch, "as_class", "degree must be at least 1");
    if (rep_.q() != r_ - 1) fail(ErrorKind::DegreeMismatch, "as_class", "representative must have degree r-1");
    if (r_ > rep_.n() + 1) fail(ErrorKind::DegreeMismatch, "as_class", "H^r vanishes for r > n+1");
  }
  const Spec& spec() const { return rep_.spec(); }
  int r() const { return r_; }
  const QForm& rep() const { return rep_; }
  bool reduced() const { return reduced_; }

  friend CohClass operator+(const CohClass& a, const CohClass& b) {
    if (a.r_ != b.r_) fail(ErrorKind::DegreeMismatch, "coh_add", "degrees differ");
    return {a.r_, a.rep_ + b.rep_};
  }
  friend CohClass operator-(const CohClass& a, const CohClass& b) {
    if (a.r_ != b.r_) fail(ErrorKind::DegreeMismatch, "coh_sub", "degrees differ");
    return {a.r_, a.rep_ - b.rep_};
  }
  CohClass scale_int(long k) const { return {r_, rep_.scale_int(k)}; }

  std::string str() const { return "[" + rep_.str() + "]"; }

 private:
  int r_ = 1;
  QForm rep_;
  bool reduced_ = false;
};

inline CohClass as_class(int r, const QForm& rep) { return {r, rep}; }
inline CohClass h1_class(const TowerElement& a) { return {1, QForm::function(a)}; }

namespace hdetail {

/// Sign of an exponent vector in the rank order: -1, 0 or 1.
inline int rank_sign(const std::vector<int>& E) {
  for (int i = static_cast<int>(E.size()) - 1; i >= 0; --i)
    if (E[i] != 0) return E[i] < 0 ? -1 : 1;
  return 0;
}

struct RankLess {
  bool operator()(const std::vector<int>& a, const std::vector<int>& b) const { return rank_less(a, b); }
};

/// Work table: exponent -> (index set -> coefficient).
using Table = std::map<std::vector<int>, std::map<IndexMask, gcode>, RankLess>;

inline void table_add(const GFField& F, Table& t, const std::vector<int>& E, IndexMask S, gcode c) {
  if (c == 0) return;
  auto& row = t[E];
  gcode v = F.add(row[S], c);
  if (v == 0)
    row.erase(S);
  else
    row[S] = v;
}

}  // namespace hdetail

struct Reduction {
  CohClass cls;
  /// For r = 1: y with y^p - y = a - reduced rep on the window.
  std::optional<TowerElement> as_root;
};

/// Canonical representative. Monomials of positive rank valuation lie in the
/// (F-1)-image and are dropped; c T^{pE} dlog_S becomes c^{1/p} T^E dlog_S;
/// constants keep only their trace class; at exponents E with some e_j prime
/// to p the components containing the first such j are rewritten modulo
/// d(T^E dlog_R). Exponents are processed in increasing rank order, and every
/// rewrite moves strictly upward, so one pass suffices.
inline Reduction reduce_with_root(const CohClass& w) {
  const Spec& sp = w.spec();
  const GFField& F = sp->F();
  int n = sp->n(), p = sp->p();
  hdetail::Table tab;
  TowerElement mask = TowerElement::zero(sp);
  for (const auto& [S, f] : w.rep().terms()) {
    f.for_each([&](const std::vector<int>& E, gcode c) { hdetail::table_add(F, tab, E, S, c); });
    mask += f - f;
  }
  // Unknown coefficients move with the p-th roots, and the rewrite modulo
  // exact forms mixes components, so one window serves every component.
  for (const auto& b : mask.bounds()) {
    std::vector<int> at = b.at;
    int hi = b.hi;
    bool any = false;
    for (int e : at) any = any || e != 0;
    while (any) {
      bool div = true;
      for (int e : at) div = div && pos_mod(e, p) == 0;
      if (!div) break;
      for (auto& e : at) e /= p;
      hi = hi >= 0 ? (hi + p - 1) / p : -((-hi) / p);
      std::vector<int> E(n, 0);
      E[b.level - 1] = hi;
      for (std::size_t j = 0; j < at.size(); ++j) E[b.level + j] = at[j];
      mask += TowerElement::big_o(sp, E, b.level);
    }
  }
  QForm window(sp, w.r() - 1);
  if (!mask.is_exact())
    for (IndexMask S = 0; S < (1u << n); ++S)
      if (popcount(S) == w.r() - 1) window.add_term(S, mask);
  bool want_root = w.r() == 1;
  TowerElement y = TowerElement::zero(sp);
  // Exact inputs have no window; the root is cut at the precision caps,
  // measured at the outermost nonzero exponent.
  auto beyond_caps = [&](const std::vector<int>& E) {
    for (int j = n - 1; j >= 0; --j)
      if (E[j] != 0) return E[j] >= sp->prec()[j] ? j + 1 : 0;
    return 0;
  };
  auto in_window = [&](const std::vector<int>& E) {
    if (int lvl = beyond_caps(E)) {
      y += TowerElement::big_o(sp, E, lvl);
      return false;
    }
    try {
      mask.coeff_at(E);
      return true;
    } catch (const error&) {
      return false;
    }
  };
  QForm out(sp, w.r() - 1);
  while (!tab.empty()) {
    auto it = tab.begin();
    std::vector<int> E = it->first;
    std::map<IndexMask, gcode> row = std::move(it->second);
    tab.erase(it);
    if (row.empty()) continue;
    int sgn = hdetail::rank_sign(E);
    if (sgn > 0) {
      if (want_root)
        for (const auto& [S, c] : row) {
          // c T^E = y0^p - y0 with y0 = -sum_k (c T^E)^{p^k}
          std::vector<int> e = E;
          gcode cc = c;
          for (int k = 0; k < 64 && in_window(e); ++k) {
            y -= TowerElement::monomial(sp, e, cc);
            for (auto& x : e) x *= p;
            cc = F.frobenius(cc);
          }
        }
      continue;
    }
    if (sgn == 0) {
      for (const auto& [S, c] : row) {
        int tr = F.trace(c);
        gcode keep = F.scale_int(F.trace_one(), tr);
        if (want_root) y += TowerElement::scalar(sp, *F.artin_schreier_solve(F.sub(c, keep)));
        if (keep) out.add_term(S, TowerElement::scalar(sp, keep));
      }
      continue;
    }
    bool all_div = true;
    int j0 = 0;
    for (int j = 0; j < n; ++j)
      if (pos_mod(E[j], p) != 0) {
        all_div = false;
        if (!j0) j0 = j + 1;
      }
    if (all_div) {
      std::vector<int> Ep(n);
      for (int j = 0; j < n; ++j) Ep[j] = E[j] / p;
      for (const auto& [S, c] : row) {
        gcode r = F.pth_root(c);
        if (want_root) y += TowerElement::monomial(sp, Ep, r);
        hdetail::table_add(F, tab, Ep, S, r);
      }
      continue;
    }
    // modulo exact forms: T^E dlog t_j0 ^ dlog_R == -e_j0^{-1} sum_{j != j0} e_j T^E dlog t_j ^ dlog_R
    IndexMask b0 = 1u << (j0 - 1);
    std::map<IndexMask, gcode> kept;
    gcode inv0 = F.inv(F.from_int(E[j0 - 1]));
    for (const auto& [S, c] : row) {
      if (!(S & b0)) {
        kept[S] = F.add(kept[S], c);
        continue;
      }
      IndexMask R = S & ~b0;
      gcode base = F.neg(F.mul(c, inv0));
      if (wedge_sign(b0, R) < 0) base = F.neg(base);
      for (int j = 1; j <= n; ++j) {
        IndexMask bj = 1u << (j - 1);
        if (j == j0 || (R & bj)) continue;
        gcode coef = F.mul(base, F.from_int(E[j - 1]));
        if (coef == 0) continue;
        if (wedge_sign(bj, R) < 0) coef = F.neg(coef);
        kept[bj | R] = F.add(kept[bj | R], coef);
      }
    }
    for (const auto& [S, c] : kept)
      if (c) out.add_term(S, TowerElement::monomial(sp, E, c));
  }
  // Unknown coefficients of the input stay unknown in the result.
  for (const auto& [S, f] : window.terms()) out.add_term(S, f);
  Reduction red{CohClass(w.r(), out, true), std::nullopt};
  if (want_root) red.as_root = y + mask;
  return red;
}

inline CohClass reduce(const CohClass& w) { return reduce_with_root(w).cls; }

inline bool is_zero(const CohClass& w) { return reduce(w).rep().is_known_zero(); }
inline bool same_class(const CohClass& a, const CohClass& b) { return is_zero(a - b); }

/// A root of y^p - y = a when a lies in the Artin-Schreier image on the window.
inline std::optional<TowerElement> as_solve(const TowerElement& a) {
  Reduction red = reduce_with_root(h1_class(a));
  if (!red.cls.rep().is_known_zero()) return std::nullopt;
  return red.as_root;
}

/// Smallest i with all coefficients of the reduced representative of outer
/// valuation >= -i.
inline int t_level(const CohClass& w) {
  CohClass red = w.reduced() ? w : reduce(w);
  int n = red.spec()->n();
  int lvl = 0;
  for (const auto& [S, f] : red.rep().terms())
    f.for_each([&](const std::vector<int>& E, gcode) { lvl = std::max(lvl, -E[n - 1]); });
  return lvl;
}

struct StandardCheck {
  bool ok = false;
  std::string which;   // "i", "ii" or ""
  std::string reason;
};

namespace hdetail {

inline bool p_independent(const std::vector<TowerElement>& xs, const Spec& sp) {
  if (xs.empty()) return true;
  if (sp->n() == 0) return false;
  return !dlog_wedge(xs, sp).is_known_zero();
}

}  // namespace hdetail

/// Checks whether {chi, a_1, ..., a_m} (plus {.., pi} when pi is given) is a
/// standard element: case (i) chi totally ramified with p not dividing its
/// level and the residues of the a_j p-independent; case (ii) chi with
/// inseparable residue extension, pi a prime element and the residues of the
/// a_j p-independent.
inline StandardCheck validate_standard_presentation(const CohClass& chi, const std::vector<TowerElement>& a_list,
                                                    const std::optional<TowerElement>& pi = std::nullopt) {
  const Spec& sp = chi.spec();
  int n = sp->n(), p = sp->p();
  if (chi.r() != 1) fail(ErrorKind::NotAClass, "validate_standard", "expects a class of degree 1");
  CohClass red = reduce(chi);
  if (red.rep().is_known_zero()) fail(ErrorKind::NotAClass, "validate_standard", "class is zero");
  std::vector<TowerElement> residues;
  for (std::size_t j = 0; j < a_list.size(); ++j) {
    const auto& a = a_list[j];
    if (a.outer_valuation() != 0) fail(ErrorKind::NonUnitEntry, "validate_standard", "entry " + std::to_string(j + 1) + " is not a unit");
    residues.push_back(a.residue_reduce());
  }
  StandardCheck out;
  int m = t_level(red);
  if (m == 0) {
    out.reason = "unramified class";
    return out;
  }
  bool indep = hdetail::p_independent(residues, sp->residue());
  if (!pi) {
    if (m % p == 0) {
      out.reason = "level divisible by p";
      return out;
    }
    out.which = "i";
    out.ok = indep;
    if (!indep) out.reason = "residues are not p-independent";
    return out;
  }
  if (pi->outer_valuation() != 1) {
    out.reason = "given element is not a prime element";
    return out;
  }
  if (m % p != 0) {
    out.reason = "level prime to p: residue extension is separable";
    return out;
  }
  // leading coefficient at t_n^{-m} must not be a p-th power in k
  TowerElement lead = red.rep().coeff(0).coeff(-m);
  bool insep = false;
  lead.for_each([&](const std::vector<int>& E, gcode) {
    for (int e : E)
      if (pos_mod(e, p) != 0) insep = true;
  });
  if (!insep) {
    out.reason = "leading residue is a p-th power";
    return out;
  }
  (void)n;
  out.which = "ii";
  out.ok = indep;
  if (!indep) out.reason = "residues are not p-independent";
  return out;
}

}  // namespace hilok

#endif  // HILOK_HCOH_HPP
