#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace hilok;
using namespace hilok::testing;

namespace {

KClass sym(const Spec& sp, std::initializer_list<TowerElement> xs, int N = default_level_cap()) {
  return KClass::symbol(sp, std::vector<TowerElement>(xs), N);
}

TowerElement el(const Spec& sp, const char* s) { return parse_element(sp, s); }

// K_1 of F_p((t)) modulo (p, U_N) by brute force: x is trivial iff p | v(x)
// and its normalized 1-unit is a p-th power modulo t^N.
struct K1Oracle {
  int p, N;
  std::set<std::vector<int>> pth_powers;

  K1Oracle(int p_, int N_) : p(p_), N(N_) {
    std::vector<int> y(N, 0);
    y[0] = 1;
    int total = 1;
    for (int i = 1; i < N; ++i) total *= p;
    for (int code = 0; code < total; ++code) {
      int c = code;
      for (int i = 1; i < N; ++i, c /= p) y[i] = c % p;
      std::vector<int> acc(N, 0);
      acc[0] = 1;
      for (int k = 0; k < p; ++k) acc = mul(acc, y);
      pth_powers.insert(acc);
    }
  }
  std::vector<int> mul(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> r(N, 0);
    for (int i = 0; i < N; ++i)
      for (int j = 0; i + j < N; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return r;
  }
  bool trivial(const TowerElement& x) const {
    int v = x.outer_valuation();
    if (((v % p) + p) % p) return false;
    const GFField& F = x.F();
    gcode lead = x.coeff_at({v});
    std::vector<int> u(N);
    for (int i = 0; i < N; ++i) u[i] = F.div(x.coeff_at({v + i}), lead);
    return pth_powers.count(u) > 0;
  }
};

class K1BruteForce : public ::testing::TestWithParam<int> {};

TEST_P(K1BruteForce, ZeroTestMatchesEnumeration) {
  int p = GetParam();
  int N = 6;
  Spec K = parse_spec("F(" + std::to_string(p) + ")((t))");
  K1Oracle oracle(p, N);
  Rng rng(41);
  int trivial = 0;
  for (int k = 0; k < 400; ++k) {
    TowerElement x = rand_nonzero(rng, K, -4, 4, 3);
    if (k % 4 == 0) x = x.pow(p) * (TowerElement::one(K) + rand_poly(rng, K, 2, N, N + 4));
    bool expect = oracle.trivial(x);
    trivial += expect;
    EXPECT_EQ(sym(K, {x}, N).is_zero(), expect) << x.str();
  }
  EXPECT_GT(trivial, 50);
}

INSTANTIATE_TEST_SUITE_P(Primes, K1BruteForce, ::testing::Values(2, 3));

TEST(KMilnor, HandComputedLevels) {
  Spec K = parse_spec("F(2)((t))");
  EXPECT_EQ(sym(K, {el(K, "t")}).u_level(), 0);
  EXPECT_EQ(sym(K, {el(K, "1+t")}).u_level(), 1);
  EXPECT_EQ(sym(K, {el(K, "1/(1+t)")}).u_level(), 1);
  EXPECT_TRUE(sym(K, {el(K, "1+t^2")}).is_zero());
  EXPECT_EQ(sym(K, {el(K, "1+t^3+t^5")}).u_level(), 3);
  EXPECT_EQ(sym(K, {el(K, "1+t^2+t^3")}).u_level(), 3);

  Spec K2 = parse_spec("F(2)((t))((u))");
  EXPECT_TRUE(sym(K2, {el(K2, "t"), el(K2, "t")}).is_zero());
  EXPECT_EQ(sym(K2, {el(K2, "t"), el(K2, "u")}).u_level(), 0);
  EXPECT_TRUE(sym(K2, {el(K2, "1+u^2"), el(K2, "t")}).is_zero());
  KClass k = sym(K2, {el(K2, "1+t*u^2"), el(K2, "u")});
  const auto& g = k.graded();
  EXPECT_EQ(g.u_level(), 2);
  EXPECT_TRUE(g.levels[1].first.is_known_zero());
  EXPECT_EQ(g.levels[1].second.str(), "(t)");

  Spec K3 = parse_spec("F(3)((t))((u))");
  EXPECT_EQ(sym(K3, {el(K3, "1+u^2"), el(K3, "t")}).u_level(), 2);
}

TEST(KMilnor, SymbolSumsParse) {
  Spec K = parse_spec("F(3)((t))((u))");
  KClass a = parse_kclass(K, "2{1+t, u} - {u, 1+t}");
  KClass b = parse_kclass(K, "3{1+t, u}");
  EXPECT_EQ(a.q(), 2);
  EXPECT_TRUE(a.is_zero());
  EXPECT_TRUE(b.is_zero());
  EXPECT_THROW(parse_kclass(K, "{t} + {t, u}"), error);
  EXPECT_THROW(parse_kclass(K, "{0, u}"), error);
}

struct KCase {
  const char* field;
  int q;
};

void PrintTo(const KCase& c, std::ostream* os) { *os << c.field << " q=" << c.q; }

class KProps : public ::testing::TestWithParam<KCase> {};

TEST_P(KProps, SteinbergAndNegationRelations) {
  Spec sp = parse_spec(GetParam().field);
  Rng rng(42);
  TowerElement one = TowerElement::one(sp);
  for (int k = 0; k < 60; ++k) {
    TowerElement x = rand_nonzero(rng, sp, -2, 2, 2);
    if ((one - x).is_known_zero()) continue;
    EXPECT_TRUE(sym(sp, {x, one - x}).is_zero()) << x.str();
    EXPECT_TRUE(sym(sp, {x, -x}).is_zero()) << x.str();
  }
}

TEST_P(KProps, MultilinearAndAlternating) {
  auto [field, q] = GetParam();
  Spec sp = parse_spec(field);
  Rng rng(43);
  for (int k = 0; k < 40; ++k) {
    std::vector<TowerElement> xs, ys;
    for (int j = 0; j < q; ++j) xs.push_back(rand_nonzero(rng, sp, -2, 2, 2));
    TowerElement y = rand_nonzero(rng, sp, -2, 2, 2);
    ys = xs;
    ys[0] = y;
    std::vector<TowerElement> prod = xs;
    prod[0] = xs[0] * y;
    EXPECT_TRUE((KClass::symbol(sp, prod) - KClass::symbol(sp, xs) - KClass::symbol(sp, ys)).is_zero());
    std::vector<TowerElement> pw = xs;
    pw[0] = xs[0].pow(sp->p());
    EXPECT_TRUE(KClass::symbol(sp, pw).is_zero());
    if (q >= 2) {
      std::vector<TowerElement> sw = xs;
      std::swap(sw[0], sw[1]);
      EXPECT_TRUE((KClass::symbol(sp, sw) + KClass::symbol(sp, xs)).is_zero());
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Fields, KProps,
                         ::testing::Values(KCase{"F(2)((t))", 1}, KCase{"F(3)((t))", 1}, KCase{"F(2^2)((t))", 1},
                                           KCase{"F(2)((t))((u))@prec=10,10", 2}, KCase{"F(3)((t))((u))@prec=8,8", 2},
                                           KCase{"F(2)((t))((u))@prec=10,10", 1}),
                         [](const auto& info) { return "case" + std::to_string(info.index); });

TEST(KMilnor, OneDimensionalK2IsTrivialModP) {
  for (const char* f : {"F(2)((t))", "F(3)((t))"}) {
    Spec K = parse_spec(f);
    Rng rng(44);
    for (int k = 0; k < 50; ++k)
      EXPECT_TRUE(sym(K, {rand_nonzero(rng, K, -3, 3), rand_nonzero(rng, K, -3, 3)}).is_zero());
  }
}

TEST(KMilnor, RhoLandsAtItsLevel) {
  Spec K = parse_spec("F(3)((t))((u))@prec=10,10");
  const Spec& res = K->residue();
  Rng rng(45);
  for (int k = 0; k < 40; ++k) {
    int i = uniform(rng, 1, 4);
    QForm w = QForm::basis(res, uniform(rng, 0, 1), rand_poly(rng, res, 2, -2, 2));
    KClass c = rho_form(K, i, w);
    const auto& g = c.graded();
    EXPECT_GE(g.u_level(), i);
    const GradedLevel& lv = g.levels[i - 1];
    if (i % 3)
      EXPECT_TRUE((lv.first - w).is_known_zero()) << w.str() << " at " << i;
    else
      EXPECT_TRUE((ext_d(lv.first) - ext_d(w)).is_known_zero()) << w.str() << " at " << i;
  }
}

TEST(KMilnor, GeneratorsAreIndependentInK1) {
  for (const char* f : {"F(2)((t))", "F(3)((t))", "F(2^2)((t))"}) {
    Spec K = parse_spec(f);
    auto gens = graded_generators(K, 1, 6);
    linalg::Mat rows;
    for (const auto& g : gens) rows.push_back(k1_coordinates(g.cls.graded()));
    EXPECT_EQ(linalg::rank(rows, K->p()), static_cast<int>(gens.size())) << f;
  }
}

// Cohomology -------------------------------------------------------------------

struct HCase {
  const char* field;
};

void PrintTo(const HCase& c, std::ostream* os) { *os << c.field; }

class HProps : public ::testing::TestWithParam<HCase> {};

TEST_P(HProps, ArtinSchreierImageIsZero) {
  Spec sp = parse_spec(GetParam().field);
  Rng rng(51);
  for (int k = 0; k < 60; ++k) {
    TowerElement y = rand_poly(rng, sp, 3, -4, 3), b = rand_poly(rng, sp, 3, -4, 3);
    TowerElement a = y.pow(sp->p()) - y + b;
    EXPECT_TRUE(same_class(h1_class(a), h1_class(b))) << a.str();
    auto root = as_solve(y.pow(sp->p()) - y);
    ASSERT_TRUE(root.has_value());
    EXPECT_TRUE((root->pow(sp->p()) - *root - (y.pow(sp->p()) - y)).is_known_zero());
  }
}

TEST_P(HProps, ReductionIsIdempotentAndInClass) {
  Spec sp = parse_spec(GetParam().field);
  Rng rng(52);
  for (int k = 0; k < 60; ++k) {
    CohClass c = h1_class(rand_poly(rng, sp, 4, -5, 3));
    CohClass r = reduce(c);
    EXPECT_TRUE(same_class(c, r));
    EXPECT_EQ(reduce(r).str(), r.str());
    Reduction red = reduce_with_root(c);
    TowerElement y = *red.as_root;
    EXPECT_TRUE((y.pow(sp->p()) - y - (c.rep().coeff(0) - red.cls.rep().coeff(0))).is_known_zero());
  }
}

TEST_P(HProps, ExactFormsAreZeroInDegreeTwo) {
  Spec sp = parse_spec(GetParam().field);
  Rng rng(53);
  for (int k = 0; k < 40; ++k) {
    QForm w = ext_d(QForm::function(rand_poly(rng, sp, 3, -4, 3)));
    EXPECT_TRUE(is_zero(CohClass(2, w)));
    // frobenius-twisted representatives f^p dlog x - f dlog x
    TowerElement f = rand_poly(rng, sp, 2, -3, 2);
    QForm dl = dlog(rand_nonzero(rng, sp, -2, 2));
    EXPECT_TRUE(is_zero(CohClass(2, dl.scale(f.frobenius()) - dl.scale(f))));
  }
}

INSTANTIATE_TEST_SUITE_P(Fields, HProps,
                         ::testing::Values(HCase{"F(2)((t))"}, HCase{"F(3)((t))"}, HCase{"F(2^2)((t))"},
                                           HCase{"F(2)((t))((u))@prec=10,10"}, HCase{"F(3)((t))((u))@prec=8,8"}),
                         [](const auto& info) { return "case" + std::to_string(info.index); });

TEST(HCoh, LevelsAndCanonicalForms) {
  Spec K = parse_spec("F(2)((t))");
  EXPECT_EQ(reduce(h1_class(el(K, "t^-2"))).str(), "[(t^(-1))]");
  EXPECT_EQ(reduce(h1_class(el(K, "1/t + t"))).str(), "[(t^(-1))]");
  EXPECT_EQ(t_level(h1_class(el(K, "t^-3 + t^-2"))), 3);
  EXPECT_EQ(t_level(h1_class(el(K, "t^-4"))), 1);
  EXPECT_EQ(t_level(h1_class(el(K, "1"))), 0);
  EXPECT_FALSE(is_zero(h1_class(el(K, "1"))));
  Spec F4 = parse_spec("F(2^2)((t))");
  // trace(w) = 1 for w^2 + w + 1 = 0
  EXPECT_FALSE(is_zero(h1_class(el(F4, "w"))));
  EXPECT_TRUE(is_zero(h1_class(el(F4, "w + w^2"))));
}

TEST(HCoh, DegreesOutOfRange) {
  Spec K = parse_spec("F(2)((t))");
  EXPECT_THROW(CohClass(3, QForm(K, 2)), error);
  EXPECT_THROW(CohClass(2, QForm(K, 0)), error);
}

TEST(HCoh, StandardPresentations) {
  Spec K = parse_spec("F(2)((t))((u))");
  StandardCheck a = validate_standard_presentation(h1_class(el(K, "1/u")), {el(K, "t")});
  EXPECT_TRUE(a.ok);
  EXPECT_EQ(a.which, "i");
  StandardCheck b = validate_standard_presentation(h1_class(el(K, "1/u")), {el(K, "t^2")});
  EXPECT_FALSE(b.ok);
  StandardCheck c = validate_standard_presentation(h1_class(el(K, "t/u^2")), {}, el(K, "u"));
  EXPECT_TRUE(c.ok);
  EXPECT_EQ(c.which, "ii");
  StandardCheck d = validate_standard_presentation(h1_class(el(K, "t^2/u^2")), {}, el(K, "u"));
  EXPECT_FALSE(d.ok);
  try {
    validate_standard_presentation(h1_class(el(K, "1/u")), {el(K, "u + u^2")});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonUnitEntry);
  }
  EXPECT_THROW(validate_standard_presentation(h1_class(el(K, "u")), {}), error);
}

}  // namespace
