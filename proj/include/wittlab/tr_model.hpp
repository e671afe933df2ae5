#pragma once

#include "wittlab/precision.hpp"
#include "wittlab/theta.hpp"
#include "wittlab/tilt_witt.hpp"
#include "wittlab/witt.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <string>
#include <vector>

namespace wittlab {

/// c * alpha_{eps,n}^m in the free graded W_n(V)-algebra on alpha_{eps,n}
/// (degree 2). Odd degrees only carry the zero class.
struct TRClass {
  int level = 1;
  int deg = 0;
  WittVec<CycElt> coeff;

  int m() const { return deg / 2; }
  bool is_zero() const { return witt_is_zero(coeff); }
  int precision() const { return detail::min_precision(coeff.coords); }
};

namespace detail {

/// Embeds both coefficient vectors at the larger depth and the smaller
/// precision.
inline void common_cyc(WittVec<CycElt>& a, WittVec<CycElt>& b) {
  int d = 1, prec = INT_MAX;
  for (const auto* v : {&a, &b})
    for (const auto& x : v->coords) {
      d = std::max(d, x.depth());
      prec = std::min(prec, x.prec());
    }
  for (auto* v : {&a, &b})
    for (auto& x : v->coords) x = x.embed(d).with_precision(prec);
}

inline WittVec<CycElt> cyc_mul(WittVec<CycElt> a, WittVec<CycElt> b) {
  common_cyc(a, b);
  return witt_mul(a, b);
}

inline WittVec<CycElt> witt_unit(const CycElt& like, int p, int n, const mpz_class& k) {
  return witt_from_int(like, p, n, k);
}

inline TRClass zero_class(int p, int level, int deg, int prec) {
  return {level, deg, witt_zero(CycElt::constant(p, 1, prec, 0), p, level)};
}

/// [x] - 1 in W_m(R).
inline WittVec<TiltElt> teich_minus_one(const TiltElt& x, int m) {
  return witt_sub(teichmuller(x, x.p(), m), witt_one(x, x.p(), m));
}

}  // namespace detail

/// Precision data for the model: p, theta precision N and the tower
/// depth D bounding every cyclotomic computation.
class TRModel {
 public:
  explicit TRModel(const PrecisionCtx& ctx) : ctx_(ctx), cache_(std::make_shared<Cache>()) { ctx_.validate(); }

  int p() const { return ctx_.p; }

  /// theta precision used at level n: level N' of an eps_n-frame sits at
  /// depth N' + n - 1, which must stay within D.
  int theta_precision(int n) const {
    const int np = std::min(ctx_.N, ctx_.D - n + 1);
    require(np >= 1, ErrorCode::precision_exhausted, "level " + std::to_string(n) + " exceeds the tower depth");
    return np;
  }

  TRClass alpha(int n, int m = 1) const {
    require(n >= 1, ErrorCode::invalid_argument, "level must be >= 1");
    require(m >= 0, ErrorCode::invalid_argument, "alpha exponent must be >= 0");
    return {n, 2 * m, witt_one(CycElt::constant(p(), 1, theta_precision(n), 1), p(), n)};
  }

  /// The zero class; the only class in odd degree.
  TRClass zero(int n, int deg) const {
    require(n >= 1 && deg >= 0, ErrorCode::invalid_argument, "level must be >= 1 and degree >= 0");
    return detail::zero_class(p(), n, deg, theta_precision(n));
  }

  TRClass make(int n, int deg, WittVec<CycElt> coeff) const {
    require(n >= 1 && deg >= 0, ErrorCode::invalid_argument, "level must be >= 1 and degree >= 0");
    require(coeff.len() == n, ErrorCode::length_bound, "coefficient must lie in W_n");
    TRClass c{n, deg, std::move(coeff)};
    require(deg % 2 == 0 || c.is_zero(), ErrorCode::invalid_argument, "odd-degree classes are zero");
    return c;
  }

  /// theta_n([x] - 1) for x in the tilt.
  WittVec<CycElt> theta_teich_minus_one(const TiltElt& x, int n) const {
    const int np = theta_precision(n);
    return theta_n(detail::teich_minus_one(x, n + np - 1), n, np).value;
  }

  /// beta_{eps,n} = theta_n([eps_n] - 1) alpha_{eps,n}.
  TRClass beta(int n) const {
    const TiltElt en = TiltElt::epsilon(p(), n, theta_precision(n));
    return {n, 2, theta_teich_minus_one(en, n)};
  }

  /// lambda_n = theta_{n-1}(([eps_{n-1}] - 1) / ([eps_n] - 1)), the factor
  /// in R(alpha_{eps,n}) = lambda_n alpha_{eps,n-1}. The coefficient lives
  /// in W_{n-1}, hence theta_{n-1}.
  WittVec<CycElt> lambda(int n) const {
    require(n >= 2, ErrorCode::invalid_argument, "restriction needs level n >= 2");
    return memo({n, 0}, [&] { return compute_lambda(n); });
  }

  /// mu_n(u) = theta_n(([eps_n] - 1) / ([eps_n^u] - 1)). The first quotient
  /// coordinate is the inverse of the geometric sum (X^u - 1)/(X - 1) at
  /// X = eps_n, which is checked.
  WittVec<CycElt> mu(int n, std::int64_t u) const {
    const std::int64_t uu = positive_unit(u);
    return memo({n, uu}, [&] { return compute_mu(n, uu); });
  }

 private:
  WittVec<CycElt> compute_lambda(int n) const {
    const int np = theta_precision(n);
    const int len = n - 1 + np - 1;
    const int window = np + 1;
    const auto num = detail::teich_minus_one(TiltElt::epsilon(p(), n - 1, window), len);
    const auto den = detail::teich_minus_one(TiltElt::epsilon(p(), n, window), len);
    return theta_n(witt_divide_exact(num, den).quotient, n - 1, np).value;
  }

  WittVec<CycElt> compute_mu(int n, std::int64_t uu) const {
    const int np = theta_precision(n);
    const int len = n + np - 1;
    const int window = np + 1;
    const TiltElt en = TiltElt::epsilon(p(), n, window);
    const TiltElt enu = en.pow(static_cast<std::uint64_t>(uu));
    const auto q = witt_divide_exact(detail::teich_minus_one(en, len), detail::teich_minus_one(enu, len)).quotient;
    TiltElt geo = TiltElt::constant(p(), en.shift(), window, 0), pw = TiltElt::constant(p(), en.shift(), window, 1);
    for (std::int64_t j = 0; j < uu; ++j) {
      geo = geo + pw;
      pw = pw * en;
    }
    require((q[0] * geo) == TiltElt::constant(p(), en.shift(), window, 1), ErrorCode::not_divisible,
            "mu: first coordinate is not the inverse geometric sum");
    return theta_n(q, n, np).value;
  }

  template <class F>
  WittVec<CycElt> memo(std::pair<int, std::int64_t> key, F compute) const {
    {
      std::lock_guard<std::mutex> lock(cache_->mutex);
      if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
    }
    WittVec<CycElt> v = compute();
    std::lock_guard<std::mutex> lock(cache_->mutex);
    return cache_->values.emplace(key, std::move(v)).first->second;
  }

 public:
  TRClass mul(const TRClass& a, const TRClass& b) const {
    require(a.level == b.level, ErrorCode::invalid_argument, "TR classes at different levels");
    const int deg = a.deg + b.deg;
    return {a.level, deg, detail::cyc_mul(a.coeff, b.coeff)};
  }

  TRClass add(const TRClass& a, const TRClass& b) const {
    require(a.level == b.level && a.deg == b.deg, ErrorCode::invalid_argument, "TR classes of different level or degree");
    WittVec<CycElt> x = a.coeff, y = b.coeff;
    detail::common_cyc(x, y);
    return {a.level, a.deg, witt_add(x, y)};
  }

  /// R(c alpha_n^m) = R(c) lambda_n^m alpha_{n-1}^m.
  TRClass restriction(const TRClass& a) const {
    require(a.level >= 2, ErrorCode::invalid_argument, "restriction needs level n >= 2");
    WittVec<CycElt> c = restrict(a.coeff);
    if (a.m() > 0) c = detail::cyc_mul(c, witt_pow(lambda(a.level), static_cast<std::uint64_t>(a.m())));
    return {a.level - 1, a.deg, c};
  }

  /// F(c alpha_n^m) = F(c) alpha_{n-1}^m.
  TRClass frobenius(const TRClass& a) const {
    require(a.level >= 2, ErrorCode::invalid_argument, "Frobenius needs level n >= 2");
    return {a.level - 1, a.deg, wittlab::frobenius(a.coeff)};
  }

  /// sigma_u(c alpha^m) = sigma_u(c) u^m mu(u)^m alpha^m, sigma_u acting on
  /// coordinates by zeta -> zeta^u.
  TRClass galois(const TRClass& a, std::int64_t u) const {
    const std::int64_t uu = positive_unit(u);
    WittVec<CycElt> c = witt_map(a.coeff, [uu](const CycElt& x) { return x.galois(uu); });
    if (a.m() > 0) {
      mpz_class um;
      mpz_pow_ui(um.get_mpz_t(), mpz_class(static_cast<long>(uu)).get_mpz_t(), static_cast<unsigned long>(a.m()));
      const auto scalar = detail::witt_unit(c[0], p(), a.level, um);
      c = detail::cyc_mul(detail::cyc_mul(c, scalar), witt_pow(mu(a.level, uu), static_cast<std::uint64_t>(a.m())));
    }
    return {a.level, a.deg, c};
  }

  /// Equality of classes at the smaller of the two precisions.
  static bool equal(const TRClass& a, const TRClass& b) {
    if (a.level != b.level || a.deg != b.deg) return false;
    WittVec<CycElt> x = a.coeff, y = b.coeff;
    detail::common_cyc(x, y);
    return x == y;
  }

 private:
  std::int64_t positive_unit(std::int64_t u) const {
    require(u % p() != 0, ErrorCode::invalid_argument, "Galois parameter must be a unit mod p");
    const std::int64_t mod = ipow(p(), ctx_.D);
    return ((u % mod) + mod) % mod;
  }

  // lambda_n under (n, 0) and mu_n(u) under (n, u); shared by copies.
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<int, std::int64_t>, WittVec<CycElt>> values;
  };

  PrecisionCtx ctx_;
  std::shared_ptr<Cache> cache_;
};

/// Kernel half of 0 -> W(F_p) -> W(R) -> W(R) -> 0 in the TC sequence:
/// for c over F_p, x = c ([eps_1] - 1)^q satisfies
/// x = xi^q W(phi^{-1})(x) with xi = ([eps_1] - 1)/([eps_2] - 1).
inline bool tc_kernel_check(int q, const WittVec<TiltElt>& c, int window) {
  require(q >= 0, ErrorCode::invalid_argument, "q must be >= 0");
  const int p = c.p, m = c.len();
  const TiltElt e1 = TiltElt::epsilon(p, 1, window), e2 = TiltElt::epsilon(p, 2, window);
  const auto d1 = detail::teich_minus_one(e1, m);
  WittVec<TiltElt> x = c;
  for (int k = 0; k < q; ++k) x = witt_mul(x, d1);
  const auto xi = witt_divide_exact(d1, detail::teich_minus_one(e2, m)).quotient;
  WittVec<TiltElt> rhs = witt_map(x, [](const TiltElt& y) { return y.frobenius_inverse(); });
  for (int k = 0; k < q; ++k) rhs = witt_mul(rhs, xi);
  return witt_is_zero(witt_sub(x, rhs));
}

/// c = (c_0, ..., c_{m-1}) with c_i in F_p, as a Witt vector over the tilt.
inline WittVec<TiltElt> prime_field_witt(int p, const std::vector<std::int64_t>& c, int window) {
  WittVec<TiltElt> out{p, {}};
  for (auto x : c) out.coords.push_back(TiltElt::constant(p, 1, window, x));
  return out;
}

}  // namespace wittlab
