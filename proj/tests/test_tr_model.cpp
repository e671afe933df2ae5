#include "support.hpp"

#include <gtest/gtest.h>

using namespace wittlab;
using namespace wittlab::testing;

namespace {

PrecisionCtx small_ctx() { return PrecisionCtx{3, 4, 5, 4, 4}; }

TRClass random_class(Rng& rng, const TRModel& tr, int n, int m) {
  const int prec = tr.theta_precision(n);
  return tr.make(n, 2 * m, random_witt_cyc(rng, tr.p(), n, 2, prec));
}

}  // namespace

TEST(TR, BetaCoefficients) {
  const TRModel tr(small_ctx());
  const auto b1 = tr.beta(1);
  const auto z3 = CycElt::zeta(3, 1, 4);
  EXPECT_TRUE(same_value(b1.coeff[0], z3 - CycElt::constant(3, 1, 4, 1)));
  for (int n = 1; n <= 3; ++n) {
    const auto b = tr.beta(n);
    const int np = tr.theta_precision(n);
    const auto z = CycElt::zeta(3, n, np);
    auto expect = witt_sub(teichmuller(z, 3, n), witt_one(z, 3, n));
    EXPECT_TRUE(TRModel::equal(b, tr.make(n, 2, expect))) << "n=" << n;
    EXPECT_FALSE(b.is_zero());
  }
}

TEST(TR, GradedMultiplication) {
  const TRModel tr(small_ctx());
  const auto a2 = tr.mul(tr.alpha(2), tr.alpha(2));
  EXPECT_EQ(a2.deg, 4);
  EXPECT_TRUE(TRModel::equal(a2, tr.alpha(2, 2)));
  EXPECT_TRUE(tr.mul(tr.beta(2), tr.zero(2, 0)).is_zero());
  EXPECT_THROW(tr.mul(tr.alpha(1), tr.alpha(2)), Error);
  EXPECT_THROW(tr.make(2, 3, tr.alpha(2).coeff), Error);
  const auto b = tr.beta(2);
  EXPECT_TRUE(TRModel::equal(tr.mul(b, b), tr.make(2, 4, detail::cyc_mul(b.coeff, b.coeff))));

  Rng rng(71);
  for (int s = 0; s < 10; ++s) {
    const auto x = random_class(rng, tr, 2, 1), y = random_class(rng, tr, 2, 2), z = random_class(rng, tr, 2, 0);
    ASSERT_TRUE(TRModel::equal(tr.mul(x, y), tr.mul(y, x)));
    ASSERT_TRUE(TRModel::equal(tr.mul(tr.mul(x, y), z), tr.mul(x, tr.mul(y, z))));
    const auto x2 = random_class(rng, tr, 2, 1);
    ASSERT_TRUE(TRModel::equal(tr.mul(tr.add(x, x2), y), tr.add(tr.mul(x, y), tr.mul(x2, y))));
  }
}

TEST(TR, RestrictionAndFrobeniusFixBeta) {
  const TRModel tr(small_ctx());
  for (int n = 2; n <= 3; ++n) {
    const auto b = tr.beta(n), below = tr.beta(n - 1);
    EXPECT_TRUE(TRModel::equal(tr.restriction(b), below)) << "n=" << n;
    EXPECT_TRUE(TRModel::equal(tr.frobenius(b), below)) << "n=" << n;
    EXPECT_TRUE(TRModel::equal(tr.frobenius(tr.alpha(n)), tr.alpha(n - 1)));
  }
  EXPECT_THROW(tr.restriction(tr.beta(1)), Error);
  EXPECT_THROW(tr.frobenius(tr.alpha(1)), Error);
}

TEST(TR, RestrictionConsistentWithBeta) {
  const TRModel tr(small_ctx());
  for (int n = 2; n <= 3; ++n) {
    const auto en = TiltElt::epsilon(3, n, tr.theta_precision(n));
    const auto em = TiltElt::epsilon(3, n - 1, tr.theta_precision(n));
    // theta_{n-1}([eps_n] - 1) * lambda = theta_{n-1}([eps_{n-1}] - 1).
    const int np = tr.theta_precision(n);
    const auto lhs = detail::cyc_mul(
        theta_n(detail::teich_minus_one(en, n - 1 + np - 1), n - 1, np).value, tr.lambda(n));
    const auto rhs = theta_n(detail::teich_minus_one(em, n - 1 + np - 1), n - 1, np).value;
    EXPECT_TRUE(TRModel::equal(tr.make(n - 1, 0, lhs), tr.make(n - 1, 0, rhs))) << "n=" << n;
  }
}

TEST(TR, DegreeZeroOperators) {
  const TRModel tr(small_ctx());
  Rng rng(72);
  const auto c = random_class(rng, tr, 3, 0);
  EXPECT_EQ(tr.restriction(c).coeff, restrict(c.coeff));
  EXPECT_EQ(tr.frobenius(c).coeff, frobenius(c.coeff));
}

TEST(TR, FrobeniusCommutesWithRestriction) {
  const TRModel tr(small_ctx());
  Rng rng(73);
  for (int s = 0; s < 5; ++s) {
    for (int m = 0; m <= 2; ++m) {
      const auto c = random_class(rng, tr, 3, m);
      ASSERT_TRUE(TRModel::equal(tr.frobenius(tr.restriction(c)), tr.restriction(tr.frobenius(c)))) << "m=" << m;
    }
  }
}

TEST(TR, GaloisActsOnBetaByCharacter) {
  const TRModel tr(small_ctx());
  for (int n = 1; n <= 3; ++n) {
    const auto b = tr.beta(n);
    for (std::int64_t u : {2, 1 + 3, 3 - 1}) {
      const auto sb = tr.galois(b, u);
      const auto ub = tr.make(n, 2, detail::cyc_mul(b.coeff, detail::witt_unit(b.coeff[0], 3, n, mpz_class(static_cast<long>(u)))));
      EXPECT_TRUE(TRModel::equal(sb, ub)) << "n=" << n << " u=" << u;
    }
    EXPECT_TRUE(TRModel::equal(tr.galois(b, 1), b));
  }
  EXPECT_THROW(tr.galois(tr.beta(1), 3), Error);
}

TEST(TR, GaloisComposition) {
  const TRModel tr(small_ctx());
  Rng rng(74);
  for (int s = 0; s < 20; ++s) {
    const int n = 1 + s % 2, m = s % 3;
    const auto c = random_class(rng, tr, n, m);
    ASSERT_TRUE(TRModel::equal(tr.galois(tr.galois(c, 4), 2), tr.galois(c, 8))) << "s=" << s;
  }
  // mu(u) sigma_u(mu(u')) = mu(u u').
  for (int n = 1; n <= 2; ++n) {
    const auto mu2 = tr.mu(n, 2), mu4 = tr.mu(n, 4), mu8 = tr.mu(n, 8);
    const auto s2mu4 = witt_map(mu4, [](const CycElt& x) { return x.galois(2); });
    EXPECT_TRUE(TRModel::equal(tr.make(n, 0, detail::cyc_mul(mu2, s2mu4)), tr.make(n, 0, mu8))) << "n=" << n;
  }
}

TEST(TCKernel, SpecExamples) {
  EXPECT_TRUE(tc_kernel_check(0, prime_field_witt(3, {1}, 4), 4));
  EXPECT_TRUE(tc_kernel_check(1, prime_field_witt(3, {1, 0}, 4), 4));
  EXPECT_TRUE(tc_kernel_check(2, prime_field_witt(3, {2, 1, 1}, 4), 4));
  EXPECT_TRUE(tc_kernel_check(1, prime_field_witt(5, {3, 4}, 3), 3));
  const auto e1 = TiltElt::epsilon(3, 1, 4);
  EXPECT_FALSE(tc_kernel_check(1, teichmuller(e1, 3, 2), 4));
}
