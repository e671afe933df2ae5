#pragma once

#include "wittlab/cyclotomic.hpp"
#include "wittlab/precision.hpp"
#include "wittlab/residue.hpp"

#include <gmpxx.h>

#include <climits>
#include <cstdint>

namespace wittlab {

/// Per-ring hooks used by the generic Witt vector code. Elements carry
/// their own ring parameters, so constants are produced "like" an
/// existing element.
///
/// Characteristic-0 rings (Z, CycElt) additionally expose precision
/// control and exact division by powers of p; those are what the
/// ghost-lift backend needs.
template <class R>
struct RingTraits;

template <>
struct RingTraits<mpz_class> {
  static constexpr bool char_p = false;
  static constexpr const char* name = "integer";

  static mpz_class from_int(const mpz_class&, const mpz_class& c) { return c; }
  static bool is_zero(const mpz_class& x) { return x == 0; }
  static mpz_class pow(const mpz_class& x, const mpz_class& k) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), k.get_ui());
    return r;
  }
  static mpz_class scale(const mpz_class& x, const mpz_class& c) { return x * c; }
  static mpz_class pth_power(const mpz_class& x, int p) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(p));
    return r;
  }
  static mpz_class times_p_power(const mpz_class& x, int p, int j) {
    mpz_class pj;
    mpz_ui_pow_ui(pj.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(j));
    return x * pj;
  }

  static int precision(const mpz_class&) { return INT_MAX; }
  static mpz_class at_precision(const mpz_class& x, int) { return x; }

  static bool divisible_by_p_power(const mpz_class& x, int p, int k) {
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return mpz_divisible_p(x.get_mpz_t(), pk.get_mpz_t()) != 0;
  }
  static mpz_class divide_by_p_power(const mpz_class& x, int p, int k) {
    require(divisible_by_p_power(x, p, k), ErrorCode::not_divisible, "integer not divisible by p^k");
    mpz_class pk, r;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    mpz_divexact(r.get_mpz_t(), x.get_mpz_t(), pk.get_mpz_t());
    return r;
  }

  /// Exact quotient; the second member is the precision lost (always 0).
  static std::pair<mpz_class, int> divide(const mpz_class& num, const mpz_class& den) {
    require(den != 0, ErrorCode::not_divisible, "division by zero");
    require(mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) != 0, ErrorCode::not_divisible,
            "integer quotient is not exact");
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return {q, 0};
  }
};

template <>
struct RingTraits<CycElt> {
  static constexpr bool char_p = false;
  static constexpr const char* name = "cyc";

  static CycElt from_int(const CycElt& like, const mpz_class& c) {
    return CycElt::constant(like.p(), like.depth(), like.prec(), c);
  }
  static bool is_zero(const CycElt& x) { return x.is_zero(); }
  static CycElt pow(const CycElt& x, const mpz_class& k) { return x.pow(k); }
  static CycElt scale(const CycElt& x, const mpz_class& c) { return x.scaled(c); }
  static CycElt pth_power(const CycElt& x, int p) { return x.pow(static_cast<std::uint64_t>(p)); }
  static CycElt times_p_power(const CycElt& x, int p, int j) {
    mpz_class pj;
    mpz_ui_pow_ui(pj.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(j));
    return x.scaled(pj);
  }

  static int precision(const CycElt& x) { return x.prec(); }
  static CycElt at_precision(const CycElt& x, int prec) { return x.with_precision(prec); }

  static bool divisible_by_p_power(const CycElt& x, int, int k) { return x.p_content() >= k; }
  static CycElt divide_by_p_power(const CycElt& x, int, int k) { return x.divide_by_p_power(k); }

  static std::pair<CycElt, int> divide(const CycElt& num, const CycElt& den) {
    CycElt q = num.divide(den);
    return {q, num.prec() - q.prec()};
  }
};

template <>
struct RingTraits<ResidueElt> {
  static constexpr bool char_p = true;
  static constexpr const char* name = "residue";

  static ResidueElt from_int(const ResidueElt& like, const mpz_class& c) {
    const long r = static_cast<long>(mpz_fdiv_ui(c.get_mpz_t(), static_cast<unsigned long>(like.p())));
    return ResidueElt::constant(like.p(), like.depth(), r);
  }
  static bool is_zero(const ResidueElt& x) { return x.is_zero(); }
  static ResidueElt pow(const ResidueElt& x, const mpz_class& k) { return x.pow(k.get_ui()); }
  static ResidueElt scale(const ResidueElt& x, const mpz_class& c) { return from_int(x, c) * x; }
  static ResidueElt pth_power(const ResidueElt& x, int) { return x.pth_power(); }
  static int precision(const ResidueElt&) { return INT_MAX; }

  /// Quotient modulo t^{known}; the second member is the t-digit loss.
  static std::pair<ResidueElt, int> divide(const ResidueElt& num, const ResidueElt& den) {
    auto q = num.divide(den);
    return {q.value, static_cast<int>(num.e() - q.known)};
  }

  /// Lift to characteristic 0 used by the ghost-lift backend.
  static CycElt lift(const ResidueElt& x) { return CycElt::from_residue(x, 1); }
  static ResidueElt lower(const CycElt& x) { return x.to_residue(); }
};

}  // namespace wittlab
