#ifndef HILOK_EXT_HPP
#define HILOK_EXT_HPP

#include <string>
#include <vector>

#include "hilok/hcoh.hpp"
#include "hilok/kmilnor.hpp"
#include "hilok/linalg.hpp"
#include "hilok/recip.hpp"

namespace hilok {

/// Elements of L = K[theta]/(theta^p - theta - a) as coefficient vectors in
/// the basis 1, theta, ..., theta^{p-1}.
using LElement = std::vector<TowerElement>;

struct RamData {
  int t = 0;
  std::string type;  // "unramified", "ramified" or "ferocious"
};

class ASExt {
 public:
  ASExt(Spec K, TowerElement a) : K_(std::move(K)), a_(std::move(a)), p_(K_->p()) {}

  const Spec& base() const { return K_; }
  const TowerElement& a() const { return a_; }
  int p() const { return p_; }

  LElement zero() const { return LElement(p_, TowerElement::zero(K_)); }
  LElement from_K(const TowerElement& x) const {
    LElement r = zero();
    r[0] = x;
    return r;
  }
  LElement one() const { return from_K(TowerElement::one(K_)); }
  LElement theta() const {
    LElement r = zero();
    if (p_ > 1) r[1] = TowerElement::one(K_);
    return r;
  }

  LElement add(const LElement& x, const LElement& y) const {
    LElement r(p_);
    for (int k = 0; k < p_; ++k) r[k] = x[k] + y[k];
    return r;
  }
  LElement sub(const LElement& x, const LElement& y) const {
    LElement r(p_);
    for (int k = 0; k < p_; ++k) r[k] = x[k] - y[k];
    return r;
  }
  LElement scale(const LElement& x, const TowerElement& c) const {
    LElement r(p_);
    for (int k = 0; k < p_; ++k) r[k] = x[k] * c;
    return r;
  }
  LElement mul(const LElement& x, const LElement& y) const {
    std::vector<TowerElement> c(2 * p_ - 1, TowerElement::zero(K_));
    for (int i = 0; i < p_; ++i) {
      if (x[i].is_exact_zero()) continue;
      for (int j = 0; j < p_; ++j)
        if (!y[j].is_exact_zero()) c[i + j] += x[i] * y[j];
    }
    for (int k = 2 * p_ - 2; k >= p_; --k) {
      if (c[k].is_exact_zero()) continue;
      c[k - p_ + 1] += c[k];
      c[k - p_] += a_ * c[k];
    }
    c.resize(p_);
    return c;
  }
  LElement pow(const LElement& x, long e) const {
    if (e < 0) fail(ErrorKind::Unsupported, "ext.pow", "negative powers need inverses in L");
    LElement r = one(), b = x;
    while (e > 0) {
      if (e & 1) r = mul(r, b);
      e >>= 1;
      if (e) b = mul(b, b);
    }
    return r;
  }
  /// theta^{-1} = (theta^{p-1} - 1) / a.
  LElement theta_inv() const {
    LElement r = pow(theta(), p_ - 1);
    r[0] -= TowerElement::one(K_);
    return scale(r, a_.inv());
  }
  /// Galois conjugate: theta -> theta + j.
  LElement conj(const LElement& x, int j) const {
    LElement sh = theta();
    sh[0] = TowerElement::from_int(K_, j);
    LElement r = zero(), pw = one();
    for (int k = 0; k < p_; ++k) {
      if (!x[k].is_exact_zero()) r = add(r, scale(pw, x[k]));
      pw = mul(pw, sh);
    }
    return r;
  }
  TowerElement norm(const LElement& x) const {
    LElement r = x;
    for (int j = 1; j < p_; ++j) r = mul(r, conj(x, j));
    for (int k = 1; k < p_; ++k)
      if (!r[k].is_known_zero())
        fail(ErrorKind::InternalInconsistency, "norm_elt", "norm has a nonzero theta-coordinate");
    return r[0];
  }

  std::string str(const LElement& x) const {
    std::string out;
    for (int k = 0; k < p_; ++k) {
      if (x[k].is_exact_zero()) continue;
      std::string c = "(" + x[k].str() + ")";
      if (k == 1) c += "*theta";
      if (k > 1) c += "*theta^" + std::to_string(k);
      out += out.empty() ? c : " + " + c;
    }
    return out.empty() ? "0" : out;
  }

 private:
  Spec K_;
  TowerElement a_;
  int p_;
};

/// L = K(theta), theta^p - theta = reduced a. Fails when a lies in the
/// Artin-Schreier image on the window.
inline ASExt make_extension(const TowerElement& a) {
  CohClass red = reduce(h1_class(a));
  if (red.rep().is_known_zero()) fail(ErrorKind::TrivialExtension, "make_extension", "a lies in the Artin-Schreier image");
  return {a.spec(), red.rep().coeff(0)};
}

inline LElement norm_input(const ASExt& L, const LElement& x) {
  if (static_cast<int>(x.size()) != L.p()) fail(ErrorKind::DimensionMismatch, "norm_elt", "L-element has the wrong length");
  bool zero = true;
  for (const auto& c : x)
    if (!c.is_known_zero()) zero = false;
  if (zero) fail(ErrorKind::ZeroEntry, "norm_elt", "norm of zero");
  return x;
}

inline TowerElement norm_elt(const ASExt& L, const LElement& x) { return L.norm(norm_input(L, x)); }

inline RamData ram_break(const ASExt& L) {
  int n = L.base()->n(), p = L.p();
  int m = 0;
  L.a().for_each([&](const std::vector<int>& E, gcode) { m = std::max(m, -E[n - 1]); });
  RamData r;
  r.t = m;
  r.type = m == 0 ? "unramified" : (m % p ? "ramified" : "ferocious");
  return r;
}

/// {N(x), y_2, ..., y_q}: only one entry may come from L.
inline KClass norm_symbol(const ASExt& L, const LElement& x, const std::vector<TowerElement>& ys, int N = default_level_cap()) {
  std::vector<TowerElement> e{norm_elt(L, x)};
  e.insert(e.end(), ys.begin(), ys.end());
  return KClass::symbol(L.base(), e, N);
}

/// L-elements written as polynomials in `theta` over K.
inline LElement parse_lelement(const ASExt& L, const std::string& text) {
  const Spec& K = L.base();
  if (K->n() >= 3) fail(ErrorKind::Unsupported, "parse_lelement", "L-expressions need n <= 2");
  std::vector<std::string> names = K->names();
  names.push_back("theta");
  std::vector<int> prec = K->prec();
  prec.push_back(4 * L.p() + 4);
  Spec big = make_spec(K->base(), K->n() + 1, names, prec);
  TowerElement e = parse_element(big, text);
  if (!e.is_exact()) fail(ErrorKind::SyntaxError, "parse_lelement", "L-expressions must be polynomial in theta");
  if (!e.is_exact_zero() && e.outer_vlb() < 0) fail(ErrorKind::SyntaxError, "parse_lelement", "negative powers of theta");
  LElement r = L.zero();
  int top = e.is_exact_zero() ? -1 : ser::end(e.series(), big->n()) - 1;
  for (int k = top; k >= 0; --k) {
    // Horner in theta; coefficients come back over K
    r = L.mul(r, L.theta());
    Series c = ser::entry(e.series(), big->n(), k);
    r[0] += TowerElement(K, c);
  }
  return r;
}

// Norm congruences ----------------------------------------

/// h, alpha = sigma(h)/h - 1, b = N(alpha), t = v(b) and the residue degree f
/// (1 when totally ramified or unramified, p in the ferocious case).
struct NormSetup {
  LElement h, alpha;
  TowerElement b;
  int t = 0;
  int f = 1;
  RamData ram;
};

inline NormSetup norm_setup(const ASExt& L) {
  const Spec& K = L.base();
  int n = K->n(), p = L.p();
  NormSetup s;
  s.ram = ram_break(L);
  int m = s.ram.t;
  LElement ti = L.theta_inv();
  int beta = 1;
  if (s.ram.type == "ramified") {
    beta = 1;
    while (pos_mod(static_cast<long>(m) * beta + 1, p) != 0) ++beta;
    int alpha = (1 + m * beta) / p;
    s.h = L.scale(L.pow(L.theta(), beta), TowerElement::var(K, n, alpha));
  } else if (s.ram.type == "ferocious") {
    s.f = p;
    s.h = L.scale(L.theta(), TowerElement::var(K, n, m / p));
  } else {
    s.h = L.theta();
  }
  LElement onep = L.add(L.one(), ti);
  s.alpha = L.sub(L.pow(onep, beta), L.one());
  s.b = norm_elt(L, s.alpha);
  s.t = s.b.outer_valuation();
  return s;
}

struct CongruenceReport {
  int family = 0;
  bool holds = false;
  int modulus = 0;          // congruence is modulo M_K^modulus
  std::string first_difference;
  int achieved = 0;         // family 3: residual valuation reached
};

namespace edetail {

/// x in M_K^level on the window.
inline bool in_ideal(const TowerElement& x, int level, std::string* first = nullptr) {
  int n = x.spec()->n();
  if (x.outer_hi() < level) fail(ErrorKind::PrecisionExhausted, "norm_congruence", "window below the congruence modulus");
  TowerElement low = x.truncate_outer(level);
  if (low.is_known_zero()) return true;
  if (first) {
    auto mons = low.monomials();
    std::sort(mons.begin(), mons.end(), [](const auto& a, const auto& b) { return rank_less(a.first, b.first); });
    if (!mons.empty()) *first = x.F().format(mons.front().second) + "*" + monomial_string(*x.spec(), mons.front().first);
  }
  (void)n;
  return false;
}

}  // namespace edetail

/// Family 1: N(1+x) == 1 + N(x) mod M_K^{i+1} for f | i, 1 <= i < t and
/// x in M_L^{i/f} (checked as v_K(N(x)) >= i).
inline CongruenceReport congruence_1(const ASExt& L, const NormSetup& s, const LElement& x, int i) {
  if (i < 1 || i >= s.t || i % s.f != 0)
    fail(ErrorKind::HypothesisViolation, "norm_congruence", "family 1 needs f | i and 1 <= i < t");
  CongruenceReport r{1, false, i + 1, "", 0};
  bool xz = true;
  for (const auto& c : x)
    if (!c.is_exact_zero()) xz = false;
  TowerElement nx = xz ? TowerElement::zero(L.base()) : L.norm(x);
  if (!xz && !nx.is_exact_zero() && nx.outer_vlb() < i)
    fail(ErrorKind::HypothesisViolation, "norm_congruence", "x is not in the required power of the maximal ideal");
  TowerElement lhs = L.norm(L.add(L.one(), x));
  TowerElement rhs = TowerElement::one(L.base()) + nx;
  r.holds = edetail::in_ideal(lhs - rhs, i + 1, &r.first_difference);
  return r;
}

/// Family 2: N(1 + x alpha) == 1 + (x^p - x) b mod M_K^{t+1} for x in O_K;
/// with rpow != 0 (ferocious case, p not dividing rpow):
/// N(1 + x h^rpow alpha) == 1 + x^p N(h)^rpow b.
inline CongruenceReport congruence_2(const ASExt& L, const NormSetup& s, const TowerElement& x, int rpow = 0) {
  if (!x.is_exact_zero() && x.outer_vlb() < 0) fail(ErrorKind::HypothesisViolation, "norm_congruence", "x must be integral");
  CongruenceReport r{2, false, s.t + 1, "", 0};
  const Spec& K = L.base();
  TowerElement lhs, rhs;
  if (rpow == 0) {
    lhs = L.norm(L.add(L.one(), L.scale(s.alpha, x)));
    rhs = TowerElement::one(K) + (x.pow(L.p()) - x) * s.b;
  } else {
    if (s.f == 1 || rpow % L.p() == 0 || rpow < 0)
      fail(ErrorKind::HypothesisViolation, "norm_congruence", "the h^r variant needs the ferocious case and 0 < r prime to p");
    LElement hr = L.pow(s.h, rpow);
    lhs = L.norm(L.add(L.one(), L.scale(L.mul(hr, s.alpha), x)));
    rhs = TowerElement::one(K) + x.pow(L.p()) * L.norm(s.h).pow(rpow) * s.b;
  }
  r.holds = edetail::in_ideal(lhs - rhs, s.t + 1, &r.first_difference);
  return r;
}

/// Family 3: for y in M_K^{t+1}, builds z in M_L^{t/f+1} with
/// N(1+z) == 1 + y mod M_K^target by successive approximation with
/// corrections c theta^{p-1} (Tr theta^{p-1} = -1).
inline CongruenceReport congruence_3(const ASExt& L, const NormSetup& s, const TowerElement& y, int target,
                                     LElement* preimage = nullptr) {
  const Spec& K = L.base();
  int n = K->n();
  if (!y.is_exact_zero() && y.outer_vlb() < s.t + 1)
    fail(ErrorKind::HypothesisViolation, "norm_congruence", "y must lie in M_K^{t+1}");
  CongruenceReport r{3, false, target, "", 0};
  LElement u = L.one();
  LElement tp = L.pow(L.theta(), L.p() - 1);
  TowerElement goal = TowerElement::one(K) + y;
  int last = s.t;
  for (int it = 0; it < 4 * target + 8; ++it) {
    TowerElement res = goal * L.norm(u).inv() - TowerElement::one(K);
    TowerElement low = res.truncate_outer(target);
    if (low.is_known_zero()) {
      r.achieved = target;
      break;
    }
    int j = low.outer_valuation();
    r.achieved = j;
    if (j <= last && it > 0) break;  // no progress
    last = j;
    TowerElement c = TowerElement::lift(K, res.coeff(j)).shift(n, j);
    LElement corr = L.add(L.one(), L.scale(tp, -c));
    u = L.mul(u, corr);
  }
  LElement z = L.sub(u, L.one());
  bool z_ok = true;
  bool zz = true;
  for (const auto& c : z)
    if (!c.is_known_zero()) zz = false;
  if (!zz) {
    TowerElement nz = L.norm(z);
    z_ok = nz.is_known_zero() || nz.outer_vlb() >= s.t + s.f;
  }
  r.holds = z_ok && r.achieved >= target;
  if (!z_ok) r.first_difference = "preimage outside the required ideal";
  if (preimage) *preimage = z;
  return r;
}

// Norm groups and the existence check ------------------------------------------

/// Generators of L^* modulo p-th powers and high units, for the norm oracle
/// (n = 1) and the reciprocity check.
inline std::vector<std::pair<std::string, LElement>> l_generators(const ASExt& L, const NormSetup& s, int N) {
  const Spec& K = L.base();
  int n = K->n(), p = L.p();
  const GFField& F = K->F();
  std::vector<std::pair<std::string, LElement>> out;
  std::vector<gcode> basis;
  for (int j = 0, c = 1; j < F.f(); ++j, c *= p) basis.push_back(static_cast<gcode>(c));
  if (s.ram.type == "unramified") {
    out.push_back({"pi", L.from_K(TowerElement::var(K, n))});
    out.push_back({"theta", L.theta()});
    for (int j = 1; j < N; ++j)
      for (int k = 0; k < p; ++k)
        for (gcode c : basis) {
          LElement x = L.scale(L.pow(L.theta(), k), TowerElement::var(K, n, j).scale(c));
          out.push_back({"1+c*theta^" + std::to_string(k) + "*pi^" + std::to_string(j), L.add(L.one(), x)});
        }
  } else {
    out.push_back({"h", s.h});
    if (s.ram.type == "ferocious") out.push_back({"pi", L.from_K(TowerElement::var(K, n))});
    LElement hp = L.one();
    int top = s.ram.type == "ramified" ? p * N : N;
    for (int j = 1; j < top; ++j) {
      hp = L.mul(hp, s.ram.type == "ramified" ? s.h : L.from_K(TowerElement::var(K, n)));
      int kmax = s.ram.type == "ramified" ? 1 : p;
      for (int k = 0; k < kmax; ++k)
        for (gcode c : basis) {
          LElement x = L.scale(L.mul(hp, L.pow(s.h, k)), TowerElement::scalar(K, c));
          out.push_back({"1+c*h^" + std::to_string(k) + "*P^" + std::to_string(j), L.add(L.one(), x)});
        }
    }
  }
  for (int j = 1; j < n; ++j) {
    TowerElement tj = TowerElement::var(K, j);
    out.push_back({"t" + std::to_string(j), L.from_K(tj)});
    out.push_back({"theta+t" + std::to_string(j), L.add(L.theta(), L.from_K(tj))});
    out.push_back({"1+theta/t" + std::to_string(j), L.add(L.one(), L.scale(L.theta(), tj.inv()))});
  }
  return out;
}

struct OracleResult {
  linalg::Mat basis;  // rref of the norm subgroup in coordinates
  int dim = 0;
  std::vector<std::string> generators;
};

/// Norm subgroup of K^*/(K^*)^p U_N for n = 1, from the norms of generators.
inline OracleResult norm_group_oracle(const ASExt& L, int N) {
  const Spec& K = L.base();
  if (K->n() != 1) fail(ErrorKind::Unsupported, "norm_group_oracle", "only for one-dimensional fields");
  int p = L.p(), f = K->F().f();
  int dim = 1;
  for (int i = 1; i < N; ++i)
    if (i % p) dim += f;
  double size = std::pow(static_cast<double>(p), dim);
  if (size > 1048576.0) fail(ErrorKind::TooLarge, "norm_group_oracle", "quotient has more than 2^20 elements");
  NormSetup s = norm_setup(L);
  OracleResult out;
  out.dim = dim;
  linalg::Mat rows;
  for (const auto& [label, x] : l_generators(L, s, N)) {
    KClass k = KClass::symbol(K, {L.norm(x)}, N);
    rows.push_back(k1_coordinates(k.graded()));
    out.generators.push_back(label);
  }
  out.basis = linalg::rref(rows, p);
  return out;
}

struct ExistenceReport {
  int index = 0;
  int norm_symbols = 0;
  int norm_failures = 0;
  bool oracle_checked = false;
  bool oracle_equal = false;
  linalg::Mat kernel, oracle;
  bool ok() const { return index == 0 ? false : (norm_failures == 0 && (!oracle_checked || oracle_equal)); }
};

/// For a nonzero class chi of degree 1: the index of ker(phi_character(chi))
/// in K_n(K)/(p, U_N), norms of one-L-entry symbols in the kernel, and for
/// n = 1 equality of the kernel with the norm oracle.
inline ExistenceReport existence_check(const CohClass& chi, int N, int box = 3) {
  const Spec& K = chi.spec();
  int n = K->n(), p = K->p();
  if (chi.r() != 1) fail(ErrorKind::NotAClass, "existence_check", "expects a class of degree 1");
  ASExt L = make_extension(chi.rep().coeff(0));
  NormSetup s = norm_setup(L);
  ExistenceReport rep;
  CharacterTable tab = phi_character(chi, N, box);
  rep.index = tab.kernel_index(p);
  std::vector<TowerElement> ys;
  for (int j = 1; j <= n; ++j) {
    ys.push_back(TowerElement::var(K, j));
    ys.push_back(TowerElement::one(K) + TowerElement::var(K, j));
  }
  for (const auto& [label, x] : l_generators(L, s, N)) {
    TowerElement nx = L.norm(x);
    if (n == 1) {
      ++rep.norm_symbols;
      if (pair(chi, KClass::symbol(K, {nx}, N)) != 0) ++rep.norm_failures;
      continue;
    }
    for (const auto& y : ys) {
      std::vector<TowerElement> e{nx};
      for (int k = 1; k < n; ++k) e.push_back(y);
      ++rep.norm_symbols;
      if (pair(chi, KClass::symbol(K, e, N)) != 0) ++rep.norm_failures;
    }
  }
  if (n == 1) {
    linalg::Vec functional;
    for (const auto& g : graded_generators(K, 1, N, box)) {
      auto c = k1_coordinates(g.cls.graded());
      std::size_t pos = functional.size();
      linalg::Vec unit(c.size(), 0);
      if (pos < unit.size()) unit[pos] = 1;
      if (c != unit) fail(ErrorKind::InternalInconsistency, "existence_check", "generator is not a coordinate vector");
      functional.push_back(0);
    }
    functional.clear();
    for (const auto& e : tab.values) functional.push_back(e.value);
    rep.kernel = linalg::rref(linalg::nullspace({functional}, p, functional.size()), p);
    rep.oracle = norm_group_oracle(L, N).basis;
    rep.oracle_checked = true;
    rep.oracle_equal = rep.kernel == rep.oracle;
  }
  return rep;
}

}  // namespace hilok

#endif  // HILOK_EXT_HPP
