#ifndef HILOK_RECIP_HPP
#define HILOK_RECIP_HPP

#include <string>
#include <vector>

#include "hilok/hcoh.hpp"
#include "hilok/kmilnor.hpp"
#include "hilok/linalg.hpp"

namespace hilok {

/// Reciprocity pairing H_p^r(K) x K_q(K)/p -> Z/p, q + r = n + 1:
/// delta_top(rep ^ dlog x_1 ^ ... ^ dlog x_q) summed over the symbols.
inline int pair(const CohClass& w, const KClass& xi) {
  const Spec& sp = w.spec();
  if (!sp->compatible(*xi.spec())) fail(ErrorKind::SpecMismatch, "pair", "class and symbol over different fields");
  if (w.r() + xi.q() != sp->n() + 1) fail(ErrorKind::DegreeMismatch, "pair", "need r + q = n + 1");
  return delta_top(wedge(w.rep(), xi.form()));
}

struct CharacterEntry {
  int level = 0;
  std::string label;
  int value = 0;
};

struct CharacterTable {
  CohClass w;
  int N = 0;
  int box = 0;
  std::vector<CharacterEntry> values;

  bool is_zero() const {
    for (const auto& e : values)
      if (e.value) return false;
    return true;
  }
  /// Index of the kernel in K_q/(p, U_N): p if some value is nonzero, else 1.
  int kernel_index(int p) const { return is_zero() ? 1 : p; }
};

/// pair(w, .) on the generators of K_{n+1-r}(K)/(p, U_N).
inline CharacterTable phi_character(const CohClass& w, int N, int box = 3) {
  const Spec& sp = w.spec();
  int q = sp->n() + 1 - w.r();
  CharacterTable t{w, N, box, {}};
  for (const auto& g : graded_generators(sp, q, N, box)) t.values.push_back({g.level, g.label, pair(w, g.cls)});
  return t;
}

/// Generators of T_i/T_{i-1} (kind 0: pi^{-i} w, kind 1: pi^{-i} w ^ dlog pi;
/// at i = 0 the lifted residue forms) and of U_i/U_{i+1} (kind 0: first slot,
/// kind 1: second slot with pi appended). `res_form` is the residue datum: the
/// monomial form for i >= 1, the dlog form of the residue symbol for i = 0.
struct PairingGen {
  int level = 0;
  int kind = 0;
  QForm res_form;
  std::string label;
};

struct RowGen : PairingGen {
  CohClass cls;
};
struct ColGen : PairingGen {
  KClass cls;
};

namespace rdetail {

inline std::vector<gcode> fp_basis(const GFField& F) {
  std::vector<gcode> b;
  for (int j = 0, c = 1; j < F.f(); ++j, c *= F.p()) b.push_back(static_cast<gcode>(c));
  return b;
}

template <class Fn>
void monomial_forms(const Spec& res, int deg, int box, bool skip_closed, Fn fn) {
  if (deg < 0) return;
  int m = res->n();
  int p = res->p();
  for (IndexMask S : kdetail::masks_of_size(m, deg))
    kdetail::for_each_box(m, box, [&](const std::vector<int>& E) {
      if (skip_closed && kdetail::monomial_closed(E, S, p)) return;
      for (gcode c : fp_basis(res->F())) fn(QForm::basis(res, S, TowerElement::monomial(res, E, c)));
    });
}

inline int delta_residue(const QForm& a, const QForm& b) {
  QForm w = wedge(a, b);
  if (w.q() != w.n()) return 0;
  return delta_top(w);
}

}  // namespace rdetail

inline std::vector<RowGen> class_generators(const Spec& sp, int r, int i, int box = 3) {
  std::vector<RowGen> out;
  int n = sp->n(), p = sp->p();
  const Spec& res = sp->residue();
  QForm dpi = kdetail::dlog_pi(sp);
  bool div = (i % p == 0);
  auto add = [&](int kind, const QForm& w) {
    QForm rep = kdetail::lift_form(sp, w, -i);
    if (kind == 1) rep = wedge(rep, dpi);
    CohClass c(r, rep);
    RowGen g;
    g.level = i;
    g.kind = kind;
    g.res_form = w;
    g.label = "T" + std::to_string(i) + " " + c.str();
    g.cls = c;
    out.push_back(std::move(g));
  };
  bool skip = i > 0 && div;
  rdetail::monomial_forms(res, r - 1, box, skip, [&](const QForm& w) { add(0, w); });
  if (i == 0 || div) rdetail::monomial_forms(res, r - 2, box, skip, [&](const QForm& w) { add(1, w); });
  (void)n;
  return out;
}

inline std::vector<ColGen> symbol_generators(const Spec& sp, int q, int i, int N, int box = 3) {
  std::vector<ColGen> out;
  int n = sp->n(), p = sp->p();
  const Spec& res = sp->residue();
  if (i == 0) {
    for (int kind = 0; kind < 2; ++kind) {
      int deg = q - kind;
      if (deg < 0) continue;
      for (const auto& g : graded_generators(res, deg, N, box)) {
        std::vector<TowerElement> e;
        for (const auto& x : g.cls.terms().front().entries) e.push_back(TowerElement::lift_from(sp, x));
        if (kind == 1) e.push_back(TowerElement::var(sp, n));
        ColGen c;
        c.level = 0;
        c.kind = kind;
        c.res_form = g.cls.form();
        c.cls = KClass::symbol(sp, e, N);
        c.label = "U0 " + c.cls.str();
        out.push_back(std::move(c));
      }
    }
    return out;
  }
  bool div = (i % p == 0);
  auto add = [&](int kind, const QForm& v) {
    KClass k = rho_form(sp, i, v, N);
    if (kind == 1) {
      KClass k2(sp, q, N);
      for (auto s : k.terms()) {
        s.entries.push_back(TowerElement::var(sp, n));
        k2.add_symbol(s.entries, s.coeff);
      }
      k = k2;
    }
    ColGen c;
    c.level = i;
    c.kind = kind;
    c.res_form = v;
    c.cls = k;
    c.label = "U" + std::to_string(i) + " " + k.str();
    out.push_back(std::move(c));
  };
  rdetail::monomial_forms(res, q - 1, box, div, [&](const QForm& v) { add(0, v); });
  if (div) rdetail::monomial_forms(res, q - 2, box, true, [&](const QForm& v) { add(1, v); });
  return out;
}

/// The graded pairing predicted on residue data. `signed_value` carries the
/// signs and unit factors that come out of expanding dlog of the generators;
/// `plain` is the normalized pairing: delta(w ^ v) for p not dividing i,
/// delta(dw_1 ^ v_2 + dw_2 ^ v_1) for p | i, the residue pairing for i = 0.
struct GradedValue {
  int plain = 0;
  int signed_value = 0;
};

inline GradedValue graded_formula(const Spec& sp, int r, int q, const RowGen& a, const ColGen& b) {
  int n = sp->n(), p = sp->p();
  int i = a.level;
  GradedValue out;
  if (a.level != b.level) return out;
  auto sgn = [p](int v, int e) { return ((e % 2) ? linalg::mod(-v, p) : linalg::mod(v, p)); };
  if (i == 0) {
    if (a.kind == 0 && b.kind == 1) {
      out.plain = rdetail::delta_residue(a.res_form, b.res_form);
      out.signed_value = out.plain;
    } else if (a.kind == 1 && b.kind == 0) {
      out.plain = rdetail::delta_residue(a.res_form, b.res_form);
      out.signed_value = sgn(out.plain, q);
    }
    return out;
  }
  if (i % p != 0) {
    out.plain = rdetail::delta_residue(a.res_form, b.res_form);
    out.signed_value = linalg::mod(static_cast<long>(sgn(out.plain, q - 1)) * i, p);
    return out;
  }
  if (a.kind == 0 && b.kind == 1) {
    out.plain = rdetail::delta_residue(ext_d(a.res_form), b.res_form);
    out.signed_value = sgn(out.plain, r);
  } else if (a.kind == 1 && b.kind == 0) {
    out.plain = rdetail::delta_residue(ext_d(a.res_form), b.res_form);
    out.signed_value = sgn(out.plain, n);
  }
  return out;
}

struct GradedMatrix {
  int i = 0, r = 0, q = 0;
  std::vector<std::string> rows, cols;
  linalg::Mat direct, formula, signed_formula;
  linalg::Mat annihilation;  // T_0..T_i generators against U_{i+1} generators
  int rank = 0;
  bool annihilation_zero() const { return linalg::all_zero(annihilation); }
  bool formula_matches() const { return direct == signed_formula; }
  bool full_rank() const { return rank == static_cast<int>(rows.size()) && rank == static_cast<int>(cols.size()); }
};

inline GradedMatrix graded_pairing_matrix(const Spec& sp, int i, int r, int q, int N = default_level_cap(), int box = 3) {
  int n = sp->n(), p = sp->p();
  if (n < 1 || r < 1 || q < 0 || r + q != n + 1)
    fail(ErrorKind::DimensionMismatch, "graded_pairing_matrix", "need r >= 1 and r + q = n + 1");
  if (i < 0 || i + 1 >= N) fail(ErrorKind::DimensionMismatch, "graded_pairing_matrix", "level outside 0..N-2");
  GradedMatrix g;
  g.i = i;
  g.r = r;
  g.q = q;
  auto rows = class_generators(sp, r, i, box);
  auto cols = symbol_generators(sp, q, i, N, box);
  for (const auto& a : rows) g.rows.push_back(a.label);
  for (const auto& b : cols) g.cols.push_back(b.label);
  for (const auto& a : rows) {
    linalg::Vec d, f, s;
    for (const auto& b : cols) {
      d.push_back(pair(a.cls, b.cls));
      GradedValue v = graded_formula(sp, r, q, a, b);
      f.push_back(v.plain);
      s.push_back(v.signed_value);
    }
    g.direct.push_back(d);
    g.formula.push_back(f);
    g.signed_formula.push_back(s);
  }
  g.rank = linalg::rank(g.direct, p);
  auto next = symbol_generators(sp, q, i + 1, N, box);
  for (int l = 0; l <= i; ++l)
    for (const auto& a : class_generators(sp, r, l, box)) {
      linalg::Vec row;
      for (const auto& b : next) row.push_back(pair(a.cls, b.cls));
      g.annihilation.push_back(row);
    }
  return g;
}

}  // namespace hilok

#endif  // HILOK_RECIP_HPP
