#include "support.hpp"

#include <gtest/gtest.h>

using namespace wittlab;
using namespace wittlab::testing;

namespace {

// Coordinatewise equality modulo p^prec, across tower depths.
bool equal_at(const WittVec<CycElt>& a, const WittVec<CycElt>& b, int prec) {
  if (a.len() != b.len()) return false;
  for (int i = 0; i < a.len(); ++i)
    if (!same_value(a[i].with_precision(prec), b[i].with_precision(prec))) return false;
  return true;
}

WittVec<CycElt> witt_one_cyc(int p, int n, int prec) {
  return witt_one(CycElt::constant(p, 1, prec, 1), p, n);
}

CycElt zeta_minus_one(int p, int depth, int prec) {
  return CycElt::zeta(p, depth, prec) - CycElt::constant(p, depth, prec, 1);
}

}  // namespace

TEST(ThetaPrime, SpecExamples) {
  const auto z3 = zeta_minus_one(3, 1, 6);
  EXPECT_TRUE(in_p_witt(theta_prime(z3, 1)));
  const auto z9 = zeta_minus_one(3, 2, 6);
  EXPECT_FALSE(in_p_witt(theta_prime(z9, 1)));
  EXPECT_EQ(theta_prime_kernel_bound(3, 2), Rational(4, 9));
  // Powers of zeta_9 - 1: v = k/6 and the bound is 4/9, so k >= 3 vanishes.
  auto x = CycElt::constant(3, 2, 10, 1);
  for (int k = 0; k <= 6; ++k) {
    EXPECT_EQ(in_p_witt(theta_prime(x, 2)), k >= 3) << "k=" << k;
    x = x * zeta_minus_one(3, 2, 10);
  }
}

TEST(ThetaPrime, RingHomomorphismModP) {
  Rng rng(61);
  for (int p : {3, 5}) {
    for (int n = 1; n <= 4; ++n) {
      for (int s = 0; s < 5; ++s) {
        const auto x = random_cyc(rng, p, 2, 6), y = random_cyc(rng, p, 2, 6);
        ASSERT_TRUE(congruent_mod_p(witt_add(theta_prime(x, n), theta_prime(y, n)), theta_prime(x + y, n)));
        ASSERT_TRUE(congruent_mod_p(witt_mul(theta_prime(x, n), theta_prime(y, n)), theta_prime(x * y, n)));
      }
    }
  }
}

TEST(ThetaPrime, FrobeniusRestrictionVerschiebung) {
  Rng rng(62);
  for (int s = 0; s < 30; ++s) {
    const auto x = random_cyc(rng, 3, 2, 6);
    ASSERT_TRUE(congruent_mod_p(frobenius(frobenius_mod_p_section(x, 2)), theta_prime(x.pow(3), 1)));
    ASSERT_TRUE(congruent_mod_p(frobenius(frobenius_mod_p_section(x, 3)), theta_prime(x.pow(3), 2)));
    ASSERT_EQ(restrict(theta_prime(x, 3)), theta_prime(x, 2));
  }
  // V(theta'_{n-1}(x)) == theta'_n(y) for -p x = y^p; y runs over
  // multiples of zeta_9 - 1 times cyclotomic units so that x is integral.
  for (int s = 0; s < 30; ++s) {
    const auto u = CycElt::zeta_power(3, 2, 8, 1 + s % 8);
    const auto y = zeta_minus_one(3, 2, 8).pow(static_cast<std::uint64_t>(2 + s % 5)) * u;
    const auto x = (-y.pow(3)).divide_by_p_power(1);
    for (int n = 2; n <= 3; ++n) {
      const auto lhs = verschiebung(theta_prime(x, n - 1));
      const auto rhs = theta_prime(y.with_precision(x.prec()), n);
      ASSERT_TRUE(congruent_mod_p(lhs, rhs)) << "s=" << s << " n=" << n;
    }
  }
}

TEST(ThetaPrime, KernelLadderHasNoMisclassification) {
  for (auto [p, n, depth] : {std::tuple{3, 1, 2}, {3, 2, 2}, {3, 3, 3}, {5, 1, 2}, {5, 2, 2}}) {
    const auto rungs = kernel_ladder(p, n, depth, static_cast<int>(ramification(p, depth)));
    int zeros = 0;
    for (const auto& r : rungs) {
      ASSERT_EQ(r.predicted_zero, r.observed_zero) << "p=" << p << " n=" << n << " v=" << r.valuation;
      zeros += r.observed_zero;
    }
    EXPECT_GT(zeros, 0);
    EXPECT_LT(zeros, static_cast<int>(rungs.size()));
  }
}

TEST(Theta, SpecExamples) {
  const int p = 3, N = 3;
  for (int n = 1; n <= 3; ++n) {
    const auto e = TiltElt::epsilon(p, 0, 4);
    const auto r = theta_n(teichmuller(e, p, n + N - 1), n, N);
    EXPECT_EQ(r.effective_precision, N);
    EXPECT_TRUE(equal_at(r.value, witt_one_cyc(p, n, N), N));
    const auto zero = theta_n(witt_sub(teichmuller(e, p, n + N - 1), witt_one(e, p, n + N - 1)), n, N);
    EXPECT_TRUE(witt_is_zero(zero.value));

    const auto en = TiltElt::epsilon(p, n, 4);
    const auto t = theta_n(teichmuller(en, p, n + N - 1), n, N);
    EXPECT_TRUE(equal_at(t.value, teichmuller(CycElt::zeta(p, n, N), p, n), N)) << "n=" << n;
  }
  const auto e1 = TiltElt::epsilon(p, 1, 4);
  EXPECT_TRUE(same_value(theta_n(teichmuller(e1, p, N), 1, N).value[0], sharp(e1, 1, N)));
}

TEST(Theta, PrecisionIsCappedByLengthAndWindow) {
  const auto e = TiltElt::epsilon(3, 1, 2);
  EXPECT_EQ(theta_n(teichmuller(e, 3, 3), 2, 5).effective_precision, 2);
  EXPECT_THROW(theta_n(teichmuller(e, 3, 4), 1, 4), Error);
  EXPECT_THROW(theta_n(teichmuller(e, 3, 1), 2, 2), Error);
}

TEST(Theta, AgreesWithTeichmullerOracle) {
  Rng rng(63);
  for (int s = 0; s < 20; ++s) {
    const auto x = random_tilt(rng, 3, 4);
    for (int n = 1; n <= 2; ++n) {
      const auto r = theta_n(teichmuller(x, 3, n + 2), n, 3);
      ASSERT_TRUE(equal_at(r.value, theta_teichmuller(x, n, 3).value, 3)) << x.str();
    }
  }
}

TEST(Theta, RingHomomorphism) {
  Rng rng(64);
  const int n = 2, N = 3, L = n + N - 1;
  for (int s = 0; s < 25; ++s) {
    const auto a = random_witt_tilt(rng, 3, L, 3), b = random_witt_tilt(rng, 3, L, 3);
    const auto ta = theta_n(a, n, N).value, tb = theta_n(b, n, N).value;
    const int d = std::max(ta[0].depth(), tb[0].depth());
    const auto embed = [d](const WittVec<CycElt>& v) { return witt_map(v, [d](const CycElt& x) { return x.embed(d); }); };
    ASSERT_TRUE(equal_at(theta_n(witt_add(a, b), n, N).value, witt_add(embed(ta), embed(tb), {WittConfig{Backend::ghost_lift}}), N - n + 1));
    ASSERT_TRUE(equal_at(theta_n(witt_mul(a, b), n, N).value, witt_mul(embed(ta), embed(tb), {WittConfig{Backend::ghost_lift}}), N - n + 1));
  }
}

TEST(Theta, RestrictionAndFrobenius) {
  Rng rng(65);
  const int N = 3;
  for (int s = 0; s < 15; ++s) {
    for (int n = 2; n <= 3; ++n) {
      const auto a = random_witt_tilt(rng, 3, n + N - 1, 3);
      const auto tn = theta_n(a, n, N).value;
      ASSERT_TRUE(equal_at(restrict(tn), theta_n(a, n - 1, N).value, N));
      const auto fa = frobenius(a);
      const auto rhs = theta_n(fa, n - 1, N);
      ASSERT_TRUE(equal_at(frobenius(tn), rhs.value, rhs.effective_precision - 1)) << "n=" << n;
    }
  }
}

TEST(Xi, GeneratorPropertiesAndKernel) {
  const int p = 3;
  for (int n = 1; n <= 3; ++n) {
    const auto xi = xi_generator(p, n, 3, 5);
    EXPECT_EQ(xi.value[0].valuation(),
              Valuation::exact((Rational(1) - Rational(1, ipow(p, n))) / (Rational(1) - Rational(1, p))));
    const auto t = theta_n(xi.value, n, 3);
    EXPECT_EQ(t.effective_precision, std::min(3, 4 - n));
    EXPECT_TRUE(witt_is_zero(t.value)) << "n=" << n;
  }
}

TEST(Xi, KernelIsAnIdeal) {
  Rng rng(66);
  const auto xi = xi_generator(3, 1, 3, 5);
  for (int s = 0; s < 10; ++s) {
    const auto c = random_witt_tilt(rng, 3, 3, 5);
    EXPECT_TRUE(witt_is_zero(theta_n(witt_mul(xi.value, c), 1, 3).value));
  }
}

TEST(RootsOfUnity, SpecExamples) {
  const auto z9 = CycElt::zeta(3, 2, 5);
  EXPECT_EQ(classify_root_of_unity(teichmuller(z9, 3, 2), 2), z9);
  EXPECT_EQ(classify_root_of_unity(witt_one_cyc(3, 3, 5), 0), CycElt::constant(3, 1, 5, 1));
  WittVec<CycElt> bad{3, {z9, CycElt::constant(3, 2, 5, 1)}};
  try {
    classify_root_of_unity(bad, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_root_of_unity);
  }
  EXPECT_THROW(classify_root_of_unity(teichmuller(z9, 3, 2), 1), Error);
}

TEST(RootsOfUnity, ZetaPowersClassify) {
  for (int k = 0; k < 27; ++k) {
    const auto z = CycElt::zeta_power(3, 3, 4, k);
    EXPECT_EQ(classify_root_of_unity(teichmuller(z, 3, 3), 3), z);
  }
}
