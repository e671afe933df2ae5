#include "support.hpp"

#include <gtest/gtest.h>

using namespace wittlab;
using namespace wittlab::testing;

namespace {

TiltElt one(int p, int m) { return TiltElt::constant(p, 1, m, 1); }

// Geometric sum sum_{j < p^n} eps_n^j, the closed form of the first
// coordinate of ([eps] - 1) / ([eps_n] - 1).
TiltElt geometric_sum(int p, int n, int m) {
  const TiltElt en = TiltElt::epsilon(p, n, m);
  TiltElt acc = TiltElt::constant(p, 1, m, 0), pw = one(p, m);
  for (std::int64_t j = 0; j < ipow(p, n); ++j) {
    acc = acc + pw;
    pw = pw * en;
  }
  return acc;
}

}  // namespace

TEST(Epsilon, SpecExamples) {
  const auto eps = TiltElt::epsilon(3, 0, 4);
  EXPECT_EQ(eps.level(1), ResidueElt::constant(3, 1, 1));
  const auto e1 = TiltElt::epsilon(3, 1, 4);
  EXPECT_EQ(e1.level(1), ResidueElt::constant(3, 1, 1) + ResidueElt::uniformizer(3, 1));
  EXPECT_EQ(e1.pow(3), eps.restricted(4));
  EXPECT_EQ(TiltElt::epsilon(3, 2, 3).pow(9), eps);
  EXPECT_TRUE(eps.is_compatible());
  EXPECT_TRUE(e1.is_compatible());
  EXPECT_THROW(TiltElt::epsilon(3, 2, 5, 6), Error);
  EXPECT_NO_THROW(TiltElt::epsilon(3, 2, 4, 6));
}

TEST(TiltRing, SpecExamples) {
  const auto eps = TiltElt::epsilon(3, 0, 4), e1 = TiltElt::epsilon(3, 1, 4);
  EXPECT_TRUE((eps - eps).is_zero());
  EXPECT_EQ((e1 - one(3, 4)) + one(3, 4), e1);
}

TEST(TiltRing, CompatibilityPreservedUnderRandomOperations) {
  Rng rng(51);
  std::vector<TiltElt> pool;
  for (int i = 0; i < 6; ++i) pool.push_back(random_tilt(rng, 3, 4));
  std::uniform_int_distribution<std::size_t> pick(0, 5);
  for (int s = 0; s < 500; ++s) {
    const auto& a = pool[pick(rng)];
    const auto& b = pool[pick(rng)];
    TiltElt c = s % 3 == 0 ? a + b : s % 3 == 1 ? a * b : a - b;
    ASSERT_TRUE(c.is_compatible());
    pool[pick(rng)] = c;
  }
}

TEST(TiltRing, EmptyWindowIntersectionIsAnError) {
  EXPECT_THROW(TiltElt(3, 1, {}), Error);
}

TEST(TiltValuation, ClosedFormValues) {
  for (int p : {3, 5}) {
    const auto eps = TiltElt::epsilon(p, 0, 5);
    EXPECT_EQ((eps - one(p, 5)).valuation(), Valuation::exact(Rational(p, p - 1)));
    for (int n = 1; n <= 4; ++n) {
      const auto en = TiltElt::epsilon(p, n, 2);
      EXPECT_EQ((en - one(p, 2)).valuation(), Valuation::exact(Rational(1, ipow(p, n - 1) * (p - 1))));
    }
  }
  // xi_{1,1} for p = 3 has valuation (1 - 1/3)/(1 - 1/3) = 1.
  EXPECT_EQ(geometric_sum(3, 1, 4).valuation(), Valuation::exact(Rational(1)));
  EXPECT_EQ(geometric_sum(3, 2, 4).valuation(), Valuation::exact(Rational(4, 3)));
}

TEST(TiltValuation, ZeroGivesLowerBound) {
  EXPECT_EQ(TiltElt::constant(3, 1, 3, 0).valuation(), Valuation::at_least(Rational(9)));
}

TEST(TiltValuation, MultiplicativeAndUltrametric) {
  Rng rng(52);
  for (int s = 0; s < 100; ++s) {
    const auto a = random_tilt(rng, 3, 5), b = random_tilt(rng, 3, 5);
    const auto va = a.valuation(), vb = b.valuation(), vab = (a * b).valuation();
    if (!va.is_exact() || !vb.is_exact()) continue;
    // Products are exact below the truncation bound.
    if (va.value + vb.value < Rational(ipow(3, 3))) {
      ASSERT_TRUE(vab.is_exact());
      ASSERT_EQ(vab.value, va.value + vb.value);
      ASSERT_FALSE((a * b).is_zero());
    }
    const auto vs = (a + b).valuation();
    if (vs.is_exact()) {
      ASSERT_GE(vs.value, std::min(va.value, vb.value));
    }
  }
}

TEST(TiltFrobenius, SpecExamples) {
  EXPECT_EQ(TiltElt::epsilon(3, 2, 4).frobenius(), TiltElt::epsilon(3, 1, 4));
  const auto eps = TiltElt::epsilon(3, 0, 5);
  const auto root = eps.pth_root();
  EXPECT_EQ(root.window(), 4);
  EXPECT_EQ(root, TiltElt::epsilon(3, 1, 4));
  EXPECT_EQ(eps.pth_root(true).window(), 5);
  EXPECT_EQ(eps.pth_root(true), TiltElt::epsilon(3, 1, 5));
}

TEST(TiltFrobenius, RoundTripsAndValuation) {
  Rng rng(53);
  for (int s = 0; s < 50; ++s) {
    const auto a = random_tilt(rng, 3, 5);
    ASSERT_EQ(a.frobenius().frobenius_inverse(), a);
    ASSERT_EQ(a.frobenius_inverse().frobenius(), a);
    ASSERT_EQ(a.pow(3).pth_root(), a);
    ASSERT_TRUE(a.frobenius_inverse().is_compatible());
    const auto v = a.valuation(), vr = a.frobenius_inverse().valuation();
    if (v.is_exact() && vr.is_exact()) {
      ASSERT_EQ(vr.value * 3, v.value);
    }
  }
  EXPECT_THROW(TiltElt::epsilon(3, 1, 1).frobenius_inverse(), Error);
}

TEST(Sharp, SpecExamples) {
  const auto eps = TiltElt::epsilon(3, 0, 5);
  EXPECT_TRUE(same_value(sharp(eps, 1, 4), CycElt::constant(3, 1, 4, 1)));
  const auto e1 = TiltElt::epsilon(3, 1, 5);
  EXPECT_TRUE(same_value(sharp(e1, 1, 4), CycElt::zeta(3, 1, 4)));
  EXPECT_TRUE(same_value(sharp(e1, 2, 4), CycElt::zeta(3, 2, 4)));
  EXPECT_THROW(sharp(e1, 1, 6), Error);
}

TEST(Sharp, LiftIndependence) {
  Rng rng(54);
  for (int s = 0; s < 30; ++s) {
    const auto a = random_tilt(rng, 3, 5);
    ASSERT_EQ(sharp(a, 1, 4, &rng), sharp(a, 1, 4, &rng));
    ASSERT_EQ(sharp(a, 1, 4), sharp(a, 1, 4, &rng));
  }
}

TEST(Sharp, MultiplicativeAndAdditiveModP) {
  Rng rng(55);
  for (int s = 0; s < 30; ++s) {
    const auto a = random_tilt(rng, 3, 5), b = random_tilt(rng, 3, 5);
    ASSERT_TRUE(same_value(sharp(a * b, 1, 4), sharp(a, 1, 4).embed(6) * sharp(b, 1, 4).embed(6)));
    const auto sum = sharp(a + b, 1, 4);
    const auto parts = sharp(a, 1, 4).embed(6) + sharp(b, 1, 4).embed(6);
    ASSERT_TRUE(same_value(sum.with_precision(1), parts.with_precision(1)));
  }
}

TEST(Sharp, ValuationAgreesWithTiltValuation) {
  Rng rng(56);
  int compared = 0;
  for (int s = 0; s < 60; ++s) {
    const auto a = random_tilt(rng, 3, 5);
    const auto vt = a.valuation();
    const auto vc = sharp(a, 1, 4).valuation();
    if (!vt.is_exact() || !vc.is_exact()) continue;
    ASSERT_EQ(vt.value, vc.value) << a.str();
    ++compared;
  }
  EXPECT_GT(compared, 20);
  EXPECT_EQ(sharp(TiltElt::epsilon(3, 0, 5) - one(3, 5), 1, 4).valuation(), Valuation::exact(Rational(3, 2)));
}

TEST(TiltGalois, SpecExamples) {
  Rng rng(57);
  const auto eps = TiltElt::epsilon(3, 0, 4);
  EXPECT_EQ(eps.galois(2), eps.pow(2));
  EXPECT_EQ(TiltElt::epsilon(3, 2, 3).galois(4), TiltElt::epsilon(3, 2, 3).pow(4));
  for (int s = 0; s < 30; ++s) {
    const auto a = random_tilt(rng, 3, 4);
    ASSERT_EQ(a.galois(1), a);
    ASSERT_EQ(a.galois(2).galois(4), a.galois(8));
    ASSERT_EQ(a.galois(5).galois(7), a.galois(35));
    ASSERT_TRUE(a.galois(2).is_compatible());
  }
  EXPECT_THROW(eps.galois(3), Error);
}

TEST(TiltWitt, LevelwiseArithmeticIsCompatible) {
  Rng rng(58);
  for (int s = 0; s < 10; ++s) {
    const auto a = random_witt_tilt(rng, 3, 3, 4), b = random_witt_tilt(rng, 3, 3, 4);
    const auto c = witt_mul(a, b);
    for (const auto& x : c.coords) ASSERT_TRUE(x.is_compatible());
    ASSERT_EQ(witt_mul(c, witt_one(a[0], 3, 3)), c);
    ASSERT_TRUE(witt_is_zero(witt_sub(witt_add(a, b), witt_add(b, a))));
  }
}

TEST(TiltWitt, DivisionFirstCoordinateIsGeometricSum) {
  const int p = 3;
  for (int n = 1; n <= 2; ++n) {
    const int m = 4;
    const auto e = TiltElt::epsilon(p, 0, m), en = TiltElt::epsilon(p, n, m);
    const auto num = witt_sub(teichmuller(e, p, 3), witt_one(e, p, 3));
    const auto den = witt_sub(teichmuller(en, p, 3), witt_one(en, p, 3));
    const auto xi = witt_divide_exact(num, den);
    EXPECT_EQ(xi.quotient[0], geometric_sum(p, n, m));
    for (const auto& x : xi.quotient.coords) EXPECT_GE(x.window(), 2);
    const auto back = witt_mul(xi.quotient, den);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(back[i], num[i]) << "n=" << n << " i=" << i;
  }
}

TEST(TiltWitt, DivisionRecoversRandomQuotients) {
  Rng rng(59);
  for (int s = 0; s < 10; ++s) {
    const auto c = random_witt_tilt(rng, 3, 3, 5);
    const auto b = witt_add(teichmuller(TiltElt::epsilon(3, 2, 5), 3, 3), random_witt_tilt(rng, 3, 3, 5));
    if (b[0].valuation().value > Rational(1)) continue;
    const auto res = witt_divide_exact(witt_mul(c, b), b);
    for (int i = 0; i < 3; ++i) ASSERT_EQ(res.quotient[i], c[i]);
  }
}
