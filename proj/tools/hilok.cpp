#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "hilok/hilok.hpp"
#include "hilok/json_io.hpp"

using namespace hilok;
using json = json_io::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitDomain = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string field;
  std::string prec;
  std::string format = "json";
  std::vector<std::string> exprs;
  std::string w, s, a, input_json, pi;
  std::vector<std::string> xs;
  int r = 0, N = default_level_cap(), box = 3, level = 1, family = 0, samples = 20;
  std::uint64_t seed = 1;
  std::string action;
};

// Name of the argument being interpreted, reported with library errors.
std::string g_arg;

template <class Fn>
auto with_arg(const std::string& name, Fn fn) {
  g_arg = name;
  auto out = fn();
  g_arg.clear();
  return out;
}

std::vector<int> parse_prec_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("bad precision list '" + s + "'");
    }
  }
  return out;
}

Spec field_of(const Options& o) {
  if (o.field.empty()) throw UsageError("missing field spec (-F)");
  return with_arg("-F", [&] { return parse_spec(o.field, parse_prec_list(o.prec)); });
}

std::string need(const std::string& v, const char* flag) {
  if (v.empty()) throw UsageError(std::string("missing argument ") + flag);
  return v;
}

json read_input_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::SyntaxError, "input_json", "not valid JSON");
  if (j.contains("class")) return j["class"];
  return j;
}

json header(const std::string& command, const Spec& sp) {
  json j;
  j["schema"] = "hilok/1";
  j["command"] = command;
  j["field"] = sp->str();
  return j;
}

KClass load_kclass(const Options& o) {
  return with_arg("--input-json", [&] { return json_io::kclass_from(read_input_json(o.input_json)); });
}

CohClass load_coh(const Options& o) {
  return with_arg("--input-json", [&] { return json_io::coh_from(read_input_json(o.input_json)); });
}

// With --input-json and no -F the field comes from the input.
bool field_from_input(const Options& o) { return o.field.empty() && !o.input_json.empty(); }

KClass symbol_arg(const Options& o, const Spec& sp) {
  if (!o.input_json.empty()) {
    return with_arg("--input-json", [&] {
      KClass k = load_kclass(o);
      if (!k.spec()->compatible(*sp)) fail(ErrorKind::SpecMismatch, "input_json", "class over a different field");
      return k;
    });
  }
  if (!o.s.empty()) return with_arg("-s", [&] { return parse_kclass(sp, o.s, o.N); });
  if (!o.xs.empty()) {
    return with_arg("-x", [&] {
      std::vector<TowerElement> e;
      for (const auto& x : o.xs) e.push_back(parse_element(sp, x));
      return KClass::symbol(sp, e, o.N);
    });
  }
  throw UsageError("missing symbol (-s, -x or --input-json)");
}

CohClass coh_arg(const Options& o, const Spec& sp, int r_default = 0) {
  if (!o.input_json.empty()) {
    return with_arg("--input-json", [&] {
      CohClass c = load_coh(o);
      if (!c.spec()->compatible(*sp)) fail(ErrorKind::SpecMismatch, "input_json", "class over a different field");
      return c;
    });
  }
  need(o.w, "-w");
  return with_arg("-w", [&] {
    QForm rep = parse_form(sp, o.w);
    int r = o.r ? o.r : (r_default ? r_default : rep.q() + 1);
    if (rep.terms().empty() && rep.q() != r - 1) rep = QForm(sp, r - 1);
    return CohClass(r, rep);
  });
}

// eval / val / form ----------------------------------------------------------

json cmd_eval(const Options& o) {
  Spec sp = field_of(o);
  if (o.exprs.size() != 1) throw UsageError("eval takes exactly one -e expression");
  TowerElement x = with_arg("-e", [&] { return parse_element(sp, o.exprs[0]); });
  const std::string& op = o.action;
  TowerElement y = with_arg("-e", [&] {
    if (op.empty() || op == "value") return x;
    if (op == "inv") return x.inv();
    if (op == "frobenius") return x.frobenius();
    if (op == "cartier") return x.cartier();
    if (op == "residue") return x.residue_reduce();
    throw UsageError("unknown eval operation '" + op + "'");
  });
  json j = header("eval", sp);
  j["operation"] = op.empty() ? "value" : op;
  j["input"] = x.str();
  j["result"] = json_io::element(y);
  return j;
}

json cmd_val(const Options& o) {
  Spec sp = field_of(o);
  if (o.exprs.size() != 1) throw UsageError("val takes exactly one -e expression");
  TowerElement x = with_arg("-e", [&] { return parse_element(sp, o.exprs[0]); });
  json j = header("val", sp);
  j["input"] = x.str();
  with_arg("-e", [&] {
    j["valuation"] = x.valuation();
    auto [m, u] = x.unit_decompose();
    j["unit_decompose"] = {{"m", m}, {"unit", json_io::element(u)}};
    return 0;
  });
  return j;
}

json cmd_form(const Options& o) {
  Spec sp = field_of(o);
  if (o.exprs.empty()) throw UsageError("missing form (-e)");
  json j = header("form", sp);
  j["action"] = o.action;
  if (o.action == "log") {
    std::vector<TowerElement> xs;
    with_arg("-e", [&] {
      for (const auto& e : o.exprs) xs.push_back(parse_element(sp, e));
      return 0;
    });
    j["result"] = json_io::form(with_arg("-e", [&] { return dlog_wedge(xs, sp); }));
    return j;
  }
  if (o.exprs.size() != 1) throw UsageError("form takes exactly one -e form");
  QForm w = with_arg("-e", [&] { return parse_form(sp, o.exprs[0]); });
  j["input"] = json_io::form(w);
  with_arg("-e", [&] {
    if (o.action == "d") {
      j["result"] = json_io::form(ext_d(w));
    } else if (o.action == "cartier") {
      j["result"] = json_io::form(cartier(w));
    } else if (o.action == "decompose") {
      CartierDecomposition c = cartier_decompose(w);
      j["theta1"] = json_io::form(c.theta1);
      j["c"] = sp->F().format(c.c);
      // x - (1 - C) theta1 - c dlog t_1 ^ ... ^ dlog t_n
      QForm back = w - (c.theta1 - cartier(c.theta1)) - QForm::top_log(sp).scale_scalar(c.c);
      j["reconstruction_ok"] = back.is_known_zero();
    } else if (o.action == "delta") {
      j["value"] = delta_top(w);
    } else {
      throw UsageError("unknown form action '" + o.action + "'");
    }
    return 0;
  });
  return j;
}

// k / h ------------------------------------------------------------------------

json cmd_k(const Options& o) {
  KClass k = field_from_input(o) ? load_kclass(o) : symbol_arg(o, field_of(o));
  Spec sp = k.spec();
  json j = header("k", sp);
  j["action"] = o.action;
  j["class"] = json_io::kclass(k);
  with_arg(o.s.empty() ? "--input-json" : "-s", [&] {
    if (o.action == "symbol") {
      j["form"] = json_io::form(k.form());
    } else if (o.action == "ulevel") {
      j["u_level"] = k.u_level();
    } else if (o.action == "graded") {
      j["graded"] = json_io::graded(k.graded());
    } else if (o.action == "zero") {
      j["zero"] = k.is_zero();
    } else {
      throw UsageError("unknown k action '" + o.action + "'");
    }
    return 0;
  });
  return j;
}

json cmd_h(const Options& o) {
  CohClass c = field_from_input(o) ? load_coh(o) : coh_arg(o, field_of(o));
  Spec sp = c.spec();
  json j = header("h", sp);
  j["action"] = o.action;
  j["class"] = json_io::coh(c);
  with_arg(o.w.empty() ? "--input-json" : "-w", [&] {
    if (o.action == "class") {
      j["zero"] = is_zero(c);
    } else if (o.action == "reduce") {
      Reduction red = reduce_with_root(c);
      j["reduced"] = json_io::coh(red.cls);
      if (red.as_root) j["as_root"] = json_io::element(*red.as_root);
    } else if (o.action == "tlevel") {
      j["t_level"] = t_level(c);
    } else if (o.action == "standard") {
      std::vector<TowerElement> as;
      for (const auto& x : o.xs) as.push_back(with_arg("-x", [&] { return parse_element(sp, x); }));
      std::optional<TowerElement> pi;
      if (!o.pi.empty()) pi = with_arg("--pi", [&] { return parse_element(sp, o.pi); });
      StandardCheck s = validate_standard_presentation(c, as, pi);
      j["standard"] = {{"ok", s.ok}, {"case", s.which}, {"reason", s.reason}};
    } else {
      throw UsageError("unknown h action '" + o.action + "'");
    }
    return 0;
  });
  return j;
}

// pairing ----------------------------------------------------------------------

json cmd_pair(const Options& o) {
  Spec sp = field_of(o);
  need(o.w.empty() ? o.input_json : o.w, "-w");
  if (o.s.empty() && o.xs.empty()) throw UsageError("missing symbol (-s or -x)");
  Options so = o;
  so.input_json.clear();
  KClass k = symbol_arg(so, sp);
  Options co = o;
  co.s.clear();
  CohClass c = coh_arg(co, sp, sp->n() + 1 - k.q());
  json j = header("pair", sp);
  j["class"] = c.str();
  j["symbol"] = k.str();
  j["value"] = with_arg("-w", [&] { return pair(c, k); });
  return j;
}

json cmd_character(const Options& o) {
  CohClass c = field_from_input(o) ? load_coh(o) : coh_arg(o, field_of(o));
  Spec sp = c.spec();
  CharacterTable t = with_arg("-w", [&] { return phi_character(c, o.N, o.box); });
  json j = header("character", sp);
  j["class"] = c.str();
  j["level_cap"] = o.N;
  j["box"] = o.box;
  json vals = json::array();
  for (const auto& e : t.values) vals.push_back({{"level", e.level}, {"generator", e.label}, {"value", e.value}});
  j["values"] = vals;
  j["zero"] = t.is_zero();
  j["kernel_index"] = t.kernel_index(sp->p());
  return j;
}

json cmd_grmatrix(const Options& o) {
  Spec sp = field_of(o);
  int r = o.r ? o.r : 1;
  GradedMatrix g = with_arg("-i", [&] { return graded_pairing_matrix(sp, o.level, r, sp->n() + 1 - r, o.N, o.box); });
  json j = header("grmatrix", sp);
  j["i"] = g.i;
  j["r"] = g.r;
  j["q"] = g.q;
  j["rows"] = g.rows;
  j["cols"] = g.cols;
  j["direct"] = g.direct;
  j["formula"] = g.formula;
  j["signed_formula"] = g.signed_formula;
  j["rank"] = g.rank;
  j["full_rank"] = g.full_rank();
  j["formula_matches"] = g.formula_matches();
  j["annihilation_zero"] = g.annihilation_zero();
  return j;
}

// extensions -------------------------------------------------------------------

TowerElement random_integral(std::mt19937_64& rng, const Spec& sp, int terms, int lo, int hi) {
  auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  TowerElement x = TowerElement::zero(sp);
  std::vector<int> E(sp->n());
  for (int k = 0; k < terms; ++k) {
    for (auto& e : E) e = uni(lo, hi);
    x += TowerElement::monomial(sp, E, static_cast<gcode>(uni(1, sp->F().q() - 1)));
  }
  return x;
}

json cmd_normcheck(const Options& o) {
  Spec sp = field_of(o);
  need(o.a, "-a");
  TowerElement a = with_arg("-a", [&] { return parse_element(sp, o.a); });
  ASExt L = with_arg("-a", [&] { return make_extension(a); });
  NormSetup s = with_arg("-a", [&] { return norm_setup(L); });
  int n = sp->n();
  std::mt19937_64 rng(o.seed);
  json j = header("normcheck", sp);
  j["a"] = L.a().str();
  j["extension"] = {{"type", s.ram.type}, {"break", s.ram.t}, {"t", s.t}, {"f", s.f}, {"b", s.b.str()}, {"h", L.str(s.h)}};
  json fams = json::object();
  auto tally = [&](int fam, const std::function<CongruenceReport(int)>& run) {
    int checked = 0, held = 0;
    json fails = json::array();
    for (int k = 0; k < o.samples; ++k) {
      CongruenceReport r = run(k);
      if (r.family == 0) continue;
      ++checked;
      if (r.holds) {
        ++held;
      } else if (fails.size() < 5) {
        fails.push_back({{"sample", k}, {"first_difference", r.first_difference}});
      }
    }
    fams[std::to_string(fam)] = {{"checked", checked}, {"held", held}, {"failures", fails}};
  };
  with_arg("-a", [&] {
    if (o.family == 0 || o.family == 1) {
      std::vector<int> levels;
      for (int i = s.f; i < s.t; i += s.f) levels.push_back(i);
      tally(1, [&](int k) {
        if (levels.empty()) return CongruenceReport{};
        int i = levels[k % levels.size()];
        LElement y = L.zero();
        for (int c = 0; c < L.p(); ++c) y = L.add(y, L.scale(L.pow(s.h, c), random_integral(rng, sp, 3, 0, 3)));
        return congruence_1(L, s, L.mul(L.pow(s.h, i), y), i);
      });
    }
    if (o.family == 0 || o.family == 2)
      tally(2, [&](int k) {
        TowerElement x = random_integral(rng, sp, 3, 0, 3);
        int rp = s.f > 1 ? k % L.p() : 0;
        return congruence_2(L, s, x, rp);
      });
    if (o.family == 0 || o.family == 3)
      tally(3, [&](int) {
        TowerElement y = random_integral(rng, sp, 3, 0, 3).shift(n, s.t + 1);
        return congruence_3(L, s, y, s.t + 6);
      });
    return 0;
  });
  j["families"] = fams;
  return j;
}

json cmd_existence(const Options& o) {
  Spec sp = field_of(o);
  CohClass c = coh_arg(o, sp, 1);
  ExistenceReport e = with_arg("-w", [&] { return existence_check(c, o.N, o.box); });
  json j = header("existence", sp);
  j["class"] = c.str();
  j["level_cap"] = o.N;
  j["index"] = e.index;
  j["norm_symbols"] = e.norm_symbols;
  j["norm_failures"] = e.norm_failures;
  j["oracle_checked"] = e.oracle_checked;
  if (e.oracle_checked) {
    j["oracle_equal"] = e.oracle_equal;
    j["kernel"] = e.kernel;
    j["oracle"] = e.oracle;
  }
  j["ok"] = e.ok();
  return j;
}

json cmd_selftest(const Options&) {
  json checks = json::array();
  bool all = true;
  auto check = [&](const std::string& name, const std::function<bool()>& fn) {
    bool ok = false;
    std::string err;
    try {
      ok = fn();
    } catch (const error& e) {
      err = e.what();
    }
    all = all && ok;
    json c = {{"name", name}, {"ok", ok}};
    if (!err.empty()) c["error"] = err;
    checks.push_back(c);
  };
  check("pair [1/t] with {1+t} over F(2)((t)) is 1", [] {
    Spec K = parse_spec("F(2)((t))");
    return pair(h1_class(parse_element(K, "1/t")), parse_kclass(K, "{1+t}")) == 1;
  });
  check("gr0 second slot of {t,u} is {t}", [] {
    Spec K = parse_spec("F(2)((t))((u))");
    return json_io::representative(*parse_kclass(K, "{t,u}").graded().gr0b).str() == "{t}";
  });
  check("Steinberg symbol {t, 1-t} vanishes", [] {
    Spec K = parse_spec("F(3)((t))");
    return parse_kclass(K, "{t, 1-t}").is_zero();
  });
  check("[t^-2] reduces to [t^-1] over F(2)((t))", [] {
    Spec K = parse_spec("F(2)((t))");
    return same_class(h1_class(parse_element(K, "t^-2")), h1_class(parse_element(K, "t^-1")));
  });
  check("existence for [1/t] over F(2)((t)) matches the norm oracle", [] {
    Spec K = parse_spec("F(2)((t))");
    return existence_check(h1_class(parse_element(K, "1/t")), 6).ok();
  });
  json j;
  j["schema"] = "hilok/1";
  j["command"] = "selftest";
  j["checks"] = checks;
  j["ok"] = all;
  return j;
}

// output -------------------------------------------------------------------------

void render_text(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_text(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& e) { return e.is_object(); })) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", rows);
  } else {
    rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

void emit(const json& j, const std::string& format) {
  if (format == "text") {
    std::vector<std::pair<std::string, std::string>> rows;
    render_text(j, "", rows);
    std::size_t w = 0;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    for (const auto& [k, v] : rows) std::cout << k << std::string(w - k.size() + 2, ' ') << v << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

int report_error(const std::string& kind, const std::string& op, const std::string& detail, int code,
                 const std::string& format) {
  json j;
  j["schema"] = "hilok/1";
  j["error"] = {{"kind", kind}, {"operation", op}, {"detail", detail}};
  if (!g_arg.empty()) j["error"]["argument"] = g_arg;
  std::cerr << "hilok: " << kind << " in " << op << ": " << detail << (g_arg.empty() ? "" : " (argument " + g_arg + ")")
            << "\n";
  emit(j, format);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hilok: arithmetic of higher-dimensional local fields of characteristic p"};
  app.require_subcommand(1);
  Options o;
  std::function<json(const Options&)> run;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-F,--field", o.field, "field spec, e.g. F(2)((t))((u))");
    sub->add_option("-p,--prec", o.prec, "precision caps, comma separated, innermost first");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
  };
  auto add = [&](const char* name, const char* help, std::function<json(const Options&)> fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    sub->callback([&run, fn] { run = fn; });
    return sub;
  };

  auto* eval = add("eval", "evaluate an element expression", cmd_eval);
  eval->add_option("-e,--expr", o.exprs, "element expression")->required();
  eval->add_option("--op", o.action, "value | inv | frobenius | cartier | residue");

  auto* val = add("val", "valuation and unit decomposition", cmd_val);
  val->add_option("-e,--expr", o.exprs, "element expression")->required();

  auto* form = add("form", "differential forms", cmd_form);
  form->add_option("action", o.action, "d | cartier | decompose | delta | log")
      ->required()
      ->check(CLI::IsMember({"d", "cartier", "decompose", "delta", "log"}));
  form->add_option("-e,--expr", o.exprs, "form expression (log: one element per -e)")->required();

  auto* k = add("k", "Milnor K-groups mod p", cmd_k);
  k->add_option("action", o.action, "symbol | ulevel | graded | zero")
      ->required()
      ->check(CLI::IsMember({"symbol", "ulevel", "graded", "zero"}));
  k->add_option("-s,--symbol", o.s, "symbol sum, e.g. {t,u} + 2{1+t,u}");
  k->add_option("-x", o.xs, "entries of a single symbol");
  k->add_option("--input-json", o.input_json, "JSON class (file or -)");
  k->add_option("-N,--level-cap", o.N, "unit level cap")->check(CLI::Range(1, 64));

  auto* h = add("h", "mod p cohomology", cmd_h);
  h->add_option("action", o.action, "class | reduce | tlevel | standard")
      ->required()
      ->check(CLI::IsMember({"class", "reduce", "tlevel", "standard"}));
  h->add_option("-w,--class", o.w, "representative form of degree r-1");
  h->add_option("-r,--degree", o.r, "cohomological degree")->check(CLI::Range(1, 4));
  h->add_option("--input-json", o.input_json, "JSON class (file or -)");
  h->add_option("-x", o.xs, "entries a_j for the standard-presentation check");
  h->add_option("--pi", o.pi, "prime element for case (ii)");

  auto* pr = add("pair", "reciprocity pairing", cmd_pair);
  pr->add_option("-w,--class", o.w, "cohomology class representative");
  pr->add_option("-r,--degree", o.r, "cohomological degree (default n+1-q)")->check(CLI::Range(1, 4));
  pr->add_option("-s,--symbol", o.s, "symbol sum");
  pr->add_option("-x", o.xs, "entries of a single symbol");
  pr->add_option("-N,--level-cap", o.N, "unit level cap")->check(CLI::Range(1, 64));

  auto* ch = add("character", "values of the pairing on K-group generators", cmd_character);
  ch->add_option("-w,--class", o.w, "cohomology class representative")->required();
  ch->add_option("-r,--degree", o.r, "cohomological degree")->check(CLI::Range(1, 4));
  ch->add_option("-N,--level-cap", o.N, "unit level cap")->check(CLI::Range(2, 16));
  ch->add_option("--box", o.box, "inner exponent box")->check(CLI::Range(0, 6));

  auto* gm = add("grmatrix", "graded pairing matrix at level i", cmd_grmatrix);
  gm->add_option("-i,--level", o.level, "level i")->required()->check(CLI::Range(0, 14));
  gm->add_option("-r,--degree", o.r, "cohomological degree")->check(CLI::Range(1, 4));
  gm->add_option("-N,--level-cap", o.N, "unit level cap")->check(CLI::Range(2, 16));
  gm->add_option("--box", o.box, "inner exponent box")->check(CLI::Range(0, 6));

  auto* nc = add("normcheck", "norm congruences for an Artin-Schreier extension", cmd_normcheck);
  nc->add_option("-a,--as-param", o.a, "Artin-Schreier parameter a")->required();
  nc->add_option("--family", o.family, "1, 2, 3 or 0 for all")->check(CLI::Range(0, 3));
  nc->add_option("--samples", o.samples, "random samples per family")->check(CLI::Range(1, 100000));
  nc->add_option("--seed", o.seed, "random seed");

  auto* ex = add("existence", "kernel of the character against norms", cmd_existence);
  ex->add_option("-w,--class", o.w, "degree-1 class representative")->required();
  ex->add_option("-N,--level-cap", o.N, "unit level cap")->check(CLI::Range(2, 16));
  ex->add_option("--box", o.box, "inner exponent box")->check(CLI::Range(0, 6));

  auto* st = app.add_subcommand("selftest", "run built-in checks");
  st->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
  st->callback([&run] { run = cmd_selftest; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    json out = run(o);
    emit(out, o.format);
    if (out.contains("ok") && out["ok"].is_boolean() && !out["ok"].get<bool>() && out["command"] == "selftest") return 1;
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "hilok: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const error& e) {
    bool precision = e.kind() == ErrorKind::PrecisionExhausted || e.kind() == ErrorKind::NonConvergence;
    int code = precision ? kExitPrecision
               : e.kind() == ErrorKind::SyntaxError  ? kExitUsage
                                                     : kExitDomain;
    return report_error(std::string(to_string(e.kind())), e.operation(), e.detail(), code, o.format);
  } catch (const json::exception& e) {
    return report_error("SyntaxError", "input_json", e.what(), kExitDomain, o.format);
  }
}
