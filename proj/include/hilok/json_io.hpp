#ifndef HILOK_JSON_IO_HPP
#define HILOK_JSON_IO_HPP

#include <json.hpp>
#include <string>

#include "hilok/hcoh.hpp"
#include "hilok/kmilnor.hpp"

namespace hilok::json_io {

using json = nlohmann::ordered_json;

inline json element(const TowerElement& x) {
  json j;
  j["spec"] = x.spec()->str();
  j["value"] = x.str();
  json coeffs = json::array();
  auto mons = x.monomials();
  std::sort(mons.begin(), mons.end(), [](const auto& a, const auto& b) { return rank_less(a.first, b.first); });
  for (const auto& [E, c] : mons) coeffs.push_back({E, x.F().format(c)});
  j["coeffs"] = coeffs;
  json win = json::array();
  for (const auto& b : x.bounds()) win.push_back({{"level", b.level}, {"outer", b.at}, {"hi", b.hi}});
  j["window"] = win;
  return j;
}

inline TowerElement element_from(const Spec& sp, const json& j) {
  return parse_element(sp, j.is_string() ? j.get<std::string>() : j.at("value").get<std::string>());
}

inline json form(const QForm& w) {
  json j;
  j["spec"] = w.spec()->str();
  j["q"] = w.q();
  j["value"] = w.str();
  json terms = json::array();
  for (const auto& [S, f] : w.terms()) terms.push_back({mask_indices(S), f.str()});
  j["terms"] = terms;
  return j;
}

inline QForm form_from(const Spec& sp, const json& j) {
  QForm w(sp, j.at("q").get<int>());
  for (const auto& t : j.at("terms")) {
    IndexMask S = 0;
    for (int i : t.at(0)) {
      if (i < 1 || i > sp->n()) fail(ErrorKind::SyntaxError, "form_from_json", "index out of range");
      S |= 1u << (i - 1);
    }
    w.add_term(S, parse_element(sp, t.at(1).get<std::string>()));
  }
  return w;
}

inline json kclass(const KClass& k) {
  json j;
  j["field"] = k.spec()->str();
  j["q"] = k.q();
  json terms = json::array();
  for (const auto& s : k.terms()) {
    json e = json::array();
    for (const auto& x : s.entries) e.push_back(x.str());
    terms.push_back({{"coeff", s.coeff}, {"entries", e}});
  }
  j["terms"] = terms;
  j["level_cap"] = k.N();
  j["value"] = k.str();
  return j;
}

inline KClass kclass_from(const json& j) {
  Spec sp = parse_spec(j.at("field").get<std::string>());
  KClass k(sp, j.at("q").get<int>(), j.at("level_cap").get<int>());
  for (const auto& t : j.at("terms")) {
    std::vector<TowerElement> e;
    for (const auto& x : t.at("entries")) e.push_back(parse_element(sp, x.get<std::string>()));
    k.add_symbol(e, t.at("coeff").get<long>());
  }
  return k;
}

inline json coh(const CohClass& w) {
  json j;
  j["field"] = w.spec()->str();
  j["r"] = w.r();
  j["rep"] = form(w.rep());
  j["value"] = w.str();
  return j;
}

inline CohClass coh_from(const json& j) {
  Spec sp = parse_spec(j.at("field").get<std::string>());
  return {j.at("r").get<int>(), form_from(sp, j.at("rep"))};
}

/// Canonical symbols realizing a graded decomposition: lifted residue
/// representatives at level 0 and rho-images above.
inline KClass representative(const GradedDecomposition& g) {
  const Spec& sp = g.spec;
  KClass k(sp, g.q, g.N);
  int n = sp->n();
  if (n == 0) {
    if (g.q == 0 && g.scalar) k.add_symbol({}, g.scalar);
    return k;
  }
  auto lift_into = [&](const KClass& sub, bool with_pi) {
    for (const auto& s : sub.terms()) {
      std::vector<TowerElement> e;
      for (const auto& x : s.entries) e.push_back(TowerElement::lift(sp, x));
      if (with_pi) e.push_back(TowerElement::var(sp, n));
      k.add_symbol(e, s.coeff);
    }
  };
  if (g.gr0a) lift_into(representative(*g.gr0a), false);
  if (g.gr0b) lift_into(representative(*g.gr0b), true);
  for (const auto& l : g.levels) {
    for (auto& s : rho_symbols(sp, l.i, l.first)) k.add_symbol(s.entries, s.coeff);
    if (g.q >= 2)
      for (auto& s : rho_symbols(sp, l.i, l.second)) {
        s.entries.push_back(TowerElement::var(sp, n));
        k.add_symbol(s.entries, s.coeff);
      }
  }
  return k;
}

inline json graded(const GradedDecomposition& g) {
  json j;
  j["field"] = g.spec->str();
  j["q"] = g.q;
  j["level_cap"] = g.N;
  j["zero"] = g.is_zero();
  j["u_level"] = g.u_level();
  if (g.spec->n() == 0) {
    j["scalar"] = g.scalar;
    return j;
  }
  json gr0;
  gr0["first"] = g.gr0a ? representative(*g.gr0a).str() : "0";
  gr0["second"] = g.gr0b ? representative(*g.gr0b).str() : "0";
  if (g.gr0a) gr0["first_graded"] = graded(*g.gr0a);
  if (g.gr0b) gr0["second_graded"] = graded(*g.gr0b);
  j["gr0"] = gr0;
  json lv = json::array();
  for (const auto& l : g.levels) {
    if (l.is_zero()) continue;
    lv.push_back({{"i", l.i}, {"p_divides_i", l.divisible}, {"first", l.first.str()}, {"second", l.second.str()}});
  }
  j["levels"] = lv;
  return j;
}

}  // namespace hilok::json_io

#endif  // HILOK_JSON_IO_HPP
