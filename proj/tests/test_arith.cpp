#include "support.hpp"

#include <gtest/gtest.h>

using namespace wittlab;
using namespace wittlab::testing;

namespace {

// Binomial expansion of (1 + t)^k over Z, reduced mod p and truncated.
std::vector<std::uint32_t> binomial_oracle(int p, std::int64_t k, std::int64_t e) {
  std::vector<std::uint32_t> out(static_cast<std::size_t>(e), 0);
  for (std::int64_t i = 0; i <= k && i < e; ++i) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(i));
    out[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(mpz_fdiv_ui(b.get_mpz_t(), static_cast<unsigned long>(p)));
  }
  return out;
}

ResidueElt one_plus_t(int p, int depth) {
  return ResidueElt::constant(p, depth, 1) + ResidueElt::uniformizer(p, depth);
}

}  // namespace

TEST(Residue, SquareOfUniformizerVanishesAtDepthOne) {
  const auto t = ResidueElt::uniformizer(3, 1);
  EXPECT_TRUE((t * t).is_zero());
}

TEST(Residue, FreshmansDream) {
  const auto x = one_plus_t(3, 2).pow(3);
  EXPECT_EQ(x, ResidueElt::constant(3, 2, 1) + ResidueElt::monomial(3, 2, 3));
}

TEST(Residue, PowerMatchesBinomialOracle) {
  for (int p : {3, 5}) {
    for (int v = 1; v <= 3; ++v) {
      const auto e = ramification(p, v);
      for (std::int64_t k : {e, e + 1, 2 * e - 1, std::int64_t{7}}) {
        const auto got = one_plus_t(p, v).pow(static_cast<std::uint64_t>(k));
        EXPECT_EQ(got.coeffs(), binomial_oracle(p, k, e)) << "p=" << p << " v=" << v << " k=" << k;
      }
    }
  }
}

TEST(Residue, Valuations) {
  EXPECT_EQ(ResidueElt::uniformizer(3, 2).valuation(), Valuation::exact(Rational(1, 6)));
  // zeta_3 - 1 is t_1 at depth 1.
  EXPECT_EQ(ResidueElt::uniformizer(3, 1).valuation(), Valuation::exact(Rational(1, 2)));
  EXPECT_EQ(ResidueElt(3, 2).valuation().kind, Valuation::Kind::infinite);
}

TEST(Residue, DepthMismatchIsAnError) {
  const auto a = ResidueElt::uniformizer(3, 1);
  const auto b = ResidueElt::uniformizer(3, 2);
  try {
    (void)(a + b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::depth_mismatch);
  }
}

TEST(Residue, RingAxiomsSampled) {
  Rng rng(11);
  for (int v = 1; v <= 4; ++v) {
    for (int s = 0; s < 200; ++s) {
      const auto a = random_residue(rng, 3, v), b = random_residue(rng, 3, v), c = random_residue(rng, 3, v);
      ASSERT_EQ((a * b) * c, a * (b * c));
      ASSERT_EQ(a * (b + c), a * b + a * c);
      ASSERT_EQ(a * b, b * a);
      ASSERT_EQ(a + b, b + a);
    }
  }
}

TEST(Residue, ValuationIsMultiplicativeAndUltrametric) {
  Rng rng(12);
  for (int s = 0; s < 200; ++s) {
    const int v = 1 + s % 3;
    const auto a = ResidueElt::monomial(3, v, s % 3) + ResidueElt::monomial(3, v, s % 3 + 1);
    const auto b = ResidueElt::monomial(3, v, (s / 3) % 2) + random_residue(rng, 3, v) * ResidueElt::monomial(3, v, 2);
    const auto va = a.valuation(), vb = b.valuation(), vab = (a * b).valuation();
    if (vab.kind == Valuation::Kind::infinite) continue;  // product beyond the truncation
    ASSERT_EQ(vab.value, va.value + vb.value);
    const auto vs = (a + b).valuation();
    if (vs.kind == Valuation::Kind::exact) {
      ASSERT_GE(vs.value, std::min(va.value, vb.value));
    }
  }
}

TEST(Residue, FrobeniusLandsInShallowerDepth) {
  Rng rng(13);
  for (int v = 1; v <= 4; ++v) {
    for (int s = 0; s < 30; ++s) {
      const auto a = random_residue(rng, 3, v + 1);
      ASSERT_EQ(a.pth_power(), a.frobenius_descend().embed(v + 1));
      ASSERT_EQ(a.pth_power(), a.pow(3));
    }
  }
}

TEST(Residue, EmbedOfUniformizer) {
  EXPECT_EQ(ResidueElt::uniformizer(3, 1).embed(2), ResidueElt::monomial(3, 2, 3));
}

TEST(Residue, EmbedPreservesValuation) {
  Rng rng(14);
  for (int s = 0; s < 20; ++s) {
    const auto a = random_residue(rng, 3, 2) * ResidueElt::monomial(3, 2, s % 5);
    const auto b = a.embed(4);
    ASSERT_EQ(a.valuation(), b.valuation());
  }
}

TEST(Residue, DivisionRecoversQuotient) {
  Rng rng(15);
  for (int s = 0; s < 50; ++s) {
    const auto q = random_residue(rng, 5, 2);
    const auto d = ResidueElt::monomial(5, 2, 3) * (ResidueElt::constant(5, 2, 2) + random_residue(rng, 5, 2) * ResidueElt::uniformizer(5, 2));
    const auto r = (q * d).divide(d);
    ASSERT_EQ(r.known, 20 - 3);
    ASSERT_EQ(r.value, q.truncated(r.known));
  }
}

TEST(Cyc, ReductionOfTopPower) {
  for (int v = 1; v <= 3; ++v) {
    const int p = 3;
    const auto phi = ramification(p, v);
    const auto m = ipow(p, v - 1);
    const auto x = CycElt::zeta(p, v, 4);
    std::vector<std::int64_t> expect(static_cast<std::size_t>(phi), 0);
    for (int i = 0; i < p - 1; ++i) expect[static_cast<std::size_t>(i * m)] = -1;
    EXPECT_EQ(x.pow(static_cast<std::uint64_t>(phi)), CycElt(p, v, 4, expect));
  }
}

TEST(Cyc, ZetaHasOrderPToTheDepth) {
  for (int p : {3, 5})
    for (int v = 1; v <= 3; ++v)
      EXPECT_EQ(CycElt::zeta(p, v, 5).pow(static_cast<std::uint64_t>(ipow(p, v))), CycElt::constant(p, v, 5, 1));
}

TEST(Cyc, Valuations) {
  const auto pi2 = CycElt::zeta(3, 2, 6) - CycElt::constant(3, 2, 6, 1);
  EXPECT_EQ(pi2.valuation(), Valuation::exact(Rational(1, 6)));
  EXPECT_EQ(pi2.pow(std::uint64_t{6}).valuation(), Valuation::exact(Rational(1)));
  EXPECT_EQ(CycElt::constant(3, 2, 6, 3).valuation(), Valuation::exact(Rational(1)));
  const auto pi1 = (CycElt::zeta(3, 1, 6) - CycElt::constant(3, 1, 6, 1)).embed(2);
  EXPECT_EQ((pi1 * pi2).valuation(), Valuation::exact(Rational(2, 3)));
  EXPECT_EQ(CycElt(3, 2, 6).valuation(), Valuation::at_least(Rational(6)));
}

// Independent oracle: v(a) = v_p(N(a)) / phi, with the norm computed as the
// product of all Galois conjugates.
Rational valuation_via_norm(const CycElt& a) {
  const std::int64_t order = ipow(a.p(), a.depth());
  CycElt norm = CycElt::constant(a.p(), a.depth(), a.prec(), 1);
  for (std::int64_t u = 1; u < order; ++u)
    if (u % a.p() != 0) norm = norm * a.galois(u);
  for (std::size_t i = 1; i < norm.coeffs().size(); ++i) EXPECT_EQ(norm.coeffs()[i], 0u);
  std::uint64_t c = norm.coeffs()[0];
  EXPECT_NE(c, 0u);
  std::int64_t vp = 0;
  for (; c % static_cast<std::uint64_t>(a.p()) == 0; c /= static_cast<std::uint64_t>(a.p())) ++vp;
  return Rational(vp, a.e());
}

TEST(Cyc, ValuationAgreesWithNormOracle) {
  Rng rng(27);
  const auto pi = CycElt::zeta(3, 2, 8) - CycElt::constant(3, 2, 8, 1);
  for (int s = 0; s < 20; ++s) {
    const auto a = pi.pow(static_cast<std::uint64_t>(s % 7)) * random_cyc(rng, 3, 2, 8);
    const auto v = a.valuation();
    if (!v.is_exact() || v.value * 6 >= 8) continue;
    EXPECT_EQ(v.value, valuation_via_norm(a));
  }
}

TEST(Cyc, RingAxiomsSampled) {
  Rng rng(21);
  for (int v = 1; v <= 3; ++v) {
    for (int s = 0; s < 200; ++s) {
      const auto a = random_cyc(rng, 3, v, 6), b = random_cyc(rng, 3, v, 6), c = random_cyc(rng, 3, v, 6);
      ASSERT_EQ((a * b) * c, a * (b * c));
      ASSERT_EQ(a * (b + c), a * b + a * c);
      ASSERT_EQ(a * b, b * a);
    }
  }
}

TEST(Cyc, LargeModulusUsesWideAccumulators) {
  Rng rng(22);
  for (int s = 0; s < 20; ++s) {
    const auto a = random_cyc(rng, 5, 2, 20), b = random_cyc(rng, 5, 2, 20), c = random_cyc(rng, 5, 2, 20);
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ((a * b).with_precision(3), a.with_precision(3) * b.with_precision(3));
  }
}

TEST(Cyc, EmbedAndReductionAreHomomorphisms) {
  Rng rng(23);
  for (int s = 0; s < 50; ++s) {
    const auto a = random_cyc(rng, 3, 1 + s % 2, 5), b = random_cyc(rng, 3, 1 + s % 2, 5);
    ASSERT_EQ((a * b).embed(3), a.embed(3) * b.embed(3));
    ASSERT_EQ((a + b).embed(3), a.embed(3) + b.embed(3));
    ASSERT_EQ((a * b).to_residue(), a.to_residue() * b.to_residue());
    ASSERT_EQ((a + b).to_residue(), a.to_residue() + b.to_residue());
    ASSERT_EQ(a.embed(3).to_residue(), a.to_residue().embed(3));
  }
}

TEST(Cyc, EmbedOfZeta) {
  EXPECT_EQ(CycElt::zeta(3, 1, 4).embed(2), CycElt::zeta(3, 2, 4).pow(std::uint64_t{3}));
  try {
    (void)CycElt::zeta(3, 2, 4).embed(1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::depth_mismatch);
  }
}

TEST(Cyc, ModulusMismatchIsAnError) {
  try {
    (void)(CycElt::zeta(3, 1, 4) + CycElt::zeta(3, 1, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::modulus_mismatch);
  }
}

TEST(Cyc, ResidueRoundTrip) {
  Rng rng(24);
  for (int s = 0; s < 30; ++s) {
    const auto r = random_residue(rng, 5, 2);
    ASSERT_EQ(CycElt::from_residue(r, 3).to_residue(), r);
  }
}

TEST(Cyc, DivisionByPTimesUnit) {
  Rng rng(25);
  for (int s = 0; s < 30; ++s) {
    const auto q = random_cyc(rng, 3, 2, 6);
    const auto den = CycElt::constant(3, 2, 6, 9) * (CycElt::constant(3, 2, 6, 1) + CycElt::zeta(3, 2, 6).pow(std::uint64_t{2}));
    const auto got = (q * den).divide(den);
    ASSERT_EQ(got.prec(), 4);
    ASSERT_EQ(got, q.with_precision(4));
  }
}

TEST(Cyc, GaloisIsARingAutomorphism) {
  Rng rng(26);
  for (int s = 0; s < 30; ++s) {
    const auto a = random_cyc(rng, 3, 2, 4), b = random_cyc(rng, 3, 2, 4);
    ASSERT_EQ((a * b).galois(2), a.galois(2) * b.galois(2));
    ASSERT_EQ(a.galois(2).galois(5), a.galois(10));
    ASSERT_EQ(a.to_residue().galois(2), a.galois(2).to_residue());
  }
  EXPECT_EQ(CycElt::zeta(3, 2, 4).galois(4), CycElt::zeta_power(3, 2, 4, 4));
}

TEST(Precision, ContextValidation) {
  PrecisionCtx ctx;
  EXPECT_NO_THROW(ctx.validate());
  ctx.p = 4;
  EXPECT_THROW(ctx.validate(), Error);
  ctx.p = 2;
  EXPECT_THROW(ctx.validate(), Error);
  ctx = {};
  ctx.G = ctx.L - 1;
  EXPECT_THROW(ctx.validate(), Error);
}
