#include <gtest/gtest.h>

#include <map>
#include <set>

#include "support.hpp"

using namespace hilok;
using namespace hilok::testing;

namespace {

// Independent F_q model: coefficient vectors modulo the field's modulus.
struct PolyField {
  int p, f;
  std::vector<int> mod;

  std::vector<int> decode(gcode c) const {
    std::vector<int> v(f);
    for (int i = 0; i < f; ++i, c = static_cast<gcode>(c / p)) v[i] = c % p;
    return v;
  }
  gcode encode(const std::vector<int>& v) const {
    int c = 0;
    for (int i = f - 1; i >= 0; --i) c = c * p + v[i];
    return static_cast<gcode>(c);
  }
  gcode mul(gcode a, gcode b) const {
    auto x = decode(a), y = decode(b);
    std::vector<int> z(2 * f, 0);
    for (int i = 0; i < f; ++i)
      for (int j = 0; j < f; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p;
    for (int k = 2 * f - 1; k >= f; --k) {
      int c = z[k];
      if (!c) continue;
      for (int i = 0; i <= f; ++i) z[k - f + i] = ((z[k - f + i] - c * mod[i]) % p + p) % p;
    }
    z.resize(f);
    return encode(z);
  }
  gcode add(gcode a, gcode b) const {
    auto x = decode(a), y = decode(b);
    for (int i = 0; i < f; ++i) x[i] = (x[i] + y[i]) % p;
    return encode(x);
  }
};

struct FieldCase {
  int p, f;
};

void PrintTo(const FieldCase& c, std::ostream* os) { *os << "F(" << c.p << "^" << c.f << ")"; }

class GFTables : public ::testing::TestWithParam<FieldCase> {};

TEST_P(GFTables, MultiplicationMatchesPolynomialModel) {
  auto [p, f] = GetParam();
  Field F = make_field(p, f);
  PolyField oracle{p, f, F->modulus()};
  for (int a = 0; a < F->q(); ++a)
    for (int b = 0; b < F->q(); ++b) {
      ASSERT_EQ(F->mul(a, b), oracle.mul(a, b)) << a << "*" << b;
      ASSERT_EQ(F->add(a, b), oracle.add(a, b)) << a << "+" << b;
    }
}

TEST_P(GFTables, FrobeniusTraceAndRoots) {
  auto [p, f] = GetParam();
  Field F = make_field(p, f);
  PolyField oracle{p, f, F->modulus()};
  for (int a = 0; a < F->q(); ++a) {
    gcode ap = 1;
    for (int k = 0; k < p; ++k) ap = oracle.mul(ap, a);
    EXPECT_EQ(F->frobenius(a), ap);
    EXPECT_EQ(F->frobenius(F->pth_root(a)), a);
    gcode tr = 0, c = a;
    for (int k = 0; k < f; ++k, c = F->frobenius(c)) tr = oracle.add(tr, c);
    ASSERT_LT(tr, p) << "trace must lie in the prime field";
    EXPECT_EQ(F->trace(a), tr);
    auto y = F->artin_schreier_solve(a);
    EXPECT_EQ(y.has_value(), tr == 0);
    if (y) EXPECT_EQ(F->sub(F->frobenius(*y), *y), a);
    if (a) EXPECT_EQ(F->mul(a, F->inv(a)), 1);
  }
  EXPECT_EQ(F->trace(F->trace_one()), 1);
}

INSTANTIATE_TEST_SUITE_P(Fields, GFTables,
                         ::testing::Values(FieldCase{2, 1}, FieldCase{2, 3}, FieldCase{2, 4}, FieldCase{3, 2},
                                           FieldCase{5, 2}, FieldCase{7, 1}),
                         [](const auto& info) {
                           return "p" + std::to_string(info.param.p) + "f" + std::to_string(info.param.f);
                         });

TEST(GF, DefaultModuliAreTheSmallestIrreducibles) {
  EXPECT_EQ(make_field(2, 2)->modulus(), (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(make_field(3, 2)->modulus(), (std::vector<int>{1, 0, 1}));
}

TEST(GF, ConstructionErrors) {
  auto kind_of = [](auto fn) {
    try {
      fn();
    } catch (const error& e) {
      return e.kind();
    }
    return ErrorKind::InternalInconsistency;
  };
  EXPECT_EQ(kind_of([] { make_field(4, 1); }), ErrorKind::NotPrime);
  EXPECT_EQ(kind_of([] { make_field(2, 2, std::vector<int>{1, 0, 1}); }), ErrorKind::ReducibleModulus);
  EXPECT_EQ(kind_of([] { parse_spec("F(6)((t))"); }), ErrorKind::NotPrime);
  EXPECT_EQ(kind_of([] { parse_spec("F(2)((t)"); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { make_field(2, 1)->inv(0); }), ErrorKind::DivisionByZero);
}

TEST(GF, NormToHalfIsSurjective) {
  for (auto [p, f] : {FieldCase{2, 2}, FieldCase{3, 2}, FieldCase{2, 4}}) {
    Field F = make_field(p, f);
    std::set<gcode> image;
    for (int a = 1; a < F->q(); ++a) image.insert(F->norm_to_half(a));
    int half = 1;
    for (int i = 0; i < f / 2; ++i) half *= p;
    EXPECT_EQ(static_cast<int>(image.size()), half - 1);
  }
}

// Dense Laurent polynomial product as a tower-free oracle.
using Dense = std::map<std::vector<int>, int>;

Dense dense_of(const TowerElement& x) {
  Dense d;
  for (const auto& [E, c] : x.monomials()) d[E] = c;
  return d;
}

Dense dense_mul(const Dense& a, const Dense& b, const GFField& F) {
  Dense out;
  for (const auto& [Ea, ca] : a)
    for (const auto& [Eb, cb] : b) {
      std::vector<int> E(Ea.size());
      for (std::size_t i = 0; i < E.size(); ++i) E[i] = Ea[i] + Eb[i];
      out[E] = F.add(out[E], F.mul(ca, cb));
    }
  for (auto it = out.begin(); it != out.end();) it = it->second ? std::next(it) : out.erase(it);
  return out;
}

struct TowerCase {
  const char* field;
};

void PrintTo(const TowerCase& c, std::ostream* os) { *os << c.field; }

class TowerProps : public ::testing::TestWithParam<TowerCase> {};

TEST_P(TowerProps, ExactProductsMatchDenseConvolution) {
  Spec sp = parse_spec(GetParam().field);
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    TowerElement a = rand_poly(rng, sp, 4, -3, 3), b = rand_poly(rng, sp, 4, -3, 3);
    EXPECT_EQ(dense_of(a * b), dense_mul(dense_of(a), dense_of(b), sp->F()));
  }
}

TEST_P(TowerProps, RingAxiomsOnTheWindow) {
  Spec sp = parse_spec(GetParam().field);
  Rng rng(12);
  for (int k = 0; k < 150; ++k) {
    TowerElement a = rand_nonzero(rng, sp, -2, 2), b = rand_nonzero(rng, sp, -2, 2), c = rand_nonzero(rng, sp, -2, 2);
    EXPECT_TRUE(((a + b) * c - (a * c + b * c)).is_known_zero());
    EXPECT_TRUE(((a * b) * c - a * (b * c)).is_known_zero());
    EXPECT_TRUE((a * a.inv() - TowerElement::one(sp)).is_known_zero()) << a.str();
    auto va = a.valuation(), vb = b.valuation();
    for (std::size_t i = 0; i < va.size(); ++i) va[i] += vb[i];
    EXPECT_EQ((a * b).valuation(), va);
  }
}

TEST_P(TowerProps, FrobeniusIsThePthPower) {
  Spec sp = parse_spec(GetParam().field);
  Rng rng(13);
  for (int k = 0; k < 100; ++k) {
    TowerElement a = rand_poly(rng, sp, 3, -2, 3), b = rand_poly(rng, sp, 3, -2, 3);
    EXPECT_TRUE((a.frobenius() - a.pow(sp->p())).is_known_zero());
    EXPECT_TRUE(((a + b).frobenius() - a.frobenius() - b.frobenius()).is_known_zero());
    // C is p^-1-linear: C(a^p b) = a C(b)
    EXPECT_TRUE(((a.frobenius() * b).cartier() - a * b.cartier()).is_known_zero());
  }
}

TEST_P(TowerProps, UnitDecompositionRemultiplies) {
  Spec sp = parse_spec(GetParam().field);
  int n = sp->n();
  Rng rng(14);
  for (int k = 0; k < 100; ++k) {
    TowerElement x = rand_nonzero(rng, sp, -3, 3);
    auto [m, u] = x.unit_decompose();
    EXPECT_EQ(u.outer_valuation(), 0);
    EXPECT_TRUE((u.shift(n, m) - x).is_known_zero());
  }
}

INSTANTIATE_TEST_SUITE_P(Fields, TowerProps,
                         ::testing::Values(TowerCase{"F(2)((t))"}, TowerCase{"F(3)((t))"}, TowerCase{"F(2^2)((t))"},
                                           TowerCase{"F(2)((t))((u))@prec=10,10"}, TowerCase{"F(3)((t))((u))@prec=8,8"}),
                         [](const auto& info) { return "case" + std::to_string(info.index); });

TEST(Tower, GeometricSeriesHasAWindow) {
  Spec sp = parse_spec("F(2)((t))@prec=8");
  TowerElement x = parse_element(sp, "1/(1+t)");
  EXPECT_EQ(x.str(), "1 + t + t^2 + t^3 + t^4 + t^5 + t^6 + t^7 + O(t^8)");
  EXPECT_FALSE(x.is_exact());
  EXPECT_THROW(x.coeff(9), error);
  EXPECT_TRUE(parse_element(sp, "(1+t)^2 - 1 - t^2").is_exact_zero());
}

TEST(Tower, PrecisionFromEnvironmentAndOverride) {
  Spec sp = parse_spec("F(3)((t))((u))", {5, 7});
  EXPECT_EQ(sp->prec(), (std::vector<int>{5, 7}));
  EXPECT_EQ(sp->str(), "F(3)((t))((u))@prec=5,7");
  EXPECT_EQ(parse_spec("F(3)((x))((y))@prec=4,6")->names(), (std::vector<std::string>{"x", "y"}));
}

TEST(Tower, ValuationIsOutermostFirst) {
  Spec sp = parse_spec("F(2)((t))((u))");
  EXPECT_EQ(parse_element(sp, "t^-2*u^3 + u^4").valuation(), (std::vector<int>{3, -2}));
  EXPECT_EQ(parse_element(sp, "t + u").valuation(), (std::vector<int>{0, 1}));
}

TEST(Tower, ResidueOfAPoleFails) {
  Spec sp = parse_spec("F(2)((t))((u))");
  try {
    parse_element(sp, "1/u + t").residue_reduce();
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativeValuation);
  }
  EXPECT_EQ(parse_element(sp, "t + u").residue_reduce().str(), "t");
}

TEST(Tower, DivisionByUnknownLeadingTerm) {
  Spec sp = parse_spec("F(2)((t))@prec=4");
  TowerElement x = parse_element(sp, "1/(1+t)") - parse_element(sp, "1/(1+t)");
  try {
    x.inv();
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroOrUnknownLeadingTerm);
  }
}

}  // namespace
