#pragma once

#include "wittlab/cyclotomic.hpp"
#include "wittlab/tilt.hpp"
#include "wittlab/tilt_witt.hpp"
#include "wittlab/witt.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace wittlab {

/// theta'_n(x) = [x]_n^p = [x^p]_n, a representative of its class in
/// W_n(V)/p W_n(V). Compare classes with `congruent_mod_p`.
inline WittVec<CycElt> theta_prime(const CycElt& x, int n) {
  return teichmuller(x.pow(static_cast<std::uint64_t>(x.p())), x.p(), n);
}

/// a - b lies in p W_n, certified by exact division by p.
inline bool congruent_mod_p(const WittVec<CycElt>& a, const WittVec<CycElt>& b) {
  return in_p_witt(witt_sub(a, b));
}

/// The kernel bound (1 - p^{-n}) / (p - 1) of theta'_n.
inline Rational theta_prime_kernel_bound(int p, int n) {
  return (Rational(1) - Rational(1, ipow(p, n))) / Rational(p - 1);
}

/// Mod-p section of F: F(theta'_n(x)) == theta'_{n-1}(x^p) mod p, so
/// every class in W_{n-1}/p is hit.
inline WittVec<CycElt> frobenius_mod_p_section(const CycElt& x, int n) {
  require(n >= 2, ErrorCode::length_bound, "the Frobenius section needs n >= 2");
  return theta_prime(x, n);
}

struct ThetaResult {
  WittVec<CycElt> value;
  int effective_precision = 0;
  int consumed_window = 0;
};

namespace detail {

/// Embeds all coordinates at the smallest depth that holds each of them.
inline WittVec<CycElt> descend_common(WittVec<CycElt> a) {
  int d = 1;
  for (auto& x : a.coords) {
    x = x.descended();
    d = std::max(d, x.depth());
  }
  for (auto& x : a.coords) x = x.embed(d);
  return a;
}

}  // namespace detail

/// theta_n: W(R) -> W_n(V) at p-adic precision N.
///
/// With b the coordinatewise lift of level N of a, the ghost components
/// of the result are w_{N-1}(b), ..., w_{N+n-2}(b): the finite stage of
/// the limit over F, since (lift of level N)^{p^{N-1}} is the canonical
/// lift of level 1 modulo p^N. Term i of w_{N-1+j} needs coordinate
/// a_i for i <= N + j - 1, so a Witt length L' caps the precision at
/// L' - n + 1. Teichmuller inputs give [sharp(x, 1, N)]_n.
inline ThetaResult theta_n(const WittVec<TiltElt>& a, int n, int N) {
  require(n >= 1, ErrorCode::length_bound, "theta_n needs n >= 1");
  require(N >= 1, ErrorCode::invalid_argument, "precision must be >= 1");
  const int eff = std::min(N, a.len() - n + 1);
  require(eff >= 1, ErrorCode::precision_exhausted,
          "theta_n needs Witt length >= n; got " + std::to_string(a.len()) + " for n = " + std::to_string(n));
  const detail::TiltFrame f = detail::common_frame({&a});
  require(f.window >= eff, ErrorCode::precision_exhausted,
          "theta_n at precision " + std::to_string(eff) + " needs tilt level " + std::to_string(eff));

  const int len = eff + n - 1;
  const int prec = len;
  WittVec<CycElt> b{a.p, {}};
  for (int i = 0; i < len; ++i)
    b.coords.push_back(CycElt::from_residue(a[i].aligned(f.shift, f.window).level(eff), prec));
  const GhostVec<CycElt> w = ghost(b);
  GhostVec<CycElt> shifted{a.p, std::vector<CycElt>(w.comps.begin() + (eff - 1), w.comps.end())};
  WittVec<CycElt> out{a.p, detail::ghost_inverse_raw(shifted)};
  for (auto& x : out.coords) x = x.with_precision(eff);
  return {detail::descend_common(std::move(out)), eff, eff};
}

/// Independent path on Teichmuller inputs: theta_n([x]) = [x^sharp]_n.
inline ThetaResult theta_teichmuller(const TiltElt& x, int n, int N) {
  auto v = teichmuller(sharp(x, 1, N), x.p(), n);
  return {detail::descend_common(std::move(v)), N, N};
}

/// Sum_{j < p^n} eps_n^j, the first coordinate of xi_n.
inline TiltElt xi_first_coordinate(int p, int n, int window) {
  const TiltElt en = TiltElt::epsilon(p, n, window);
  TiltElt acc = TiltElt::constant(p, en.shift(), window, 0);
  TiltElt pw = TiltElt::constant(p, en.shift(), window, 1);
  for (std::int64_t j = 0; j < ipow(p, n); ++j) {
    acc = acc + pw;
    pw = pw * en;
  }
  return acc;
}

struct XiResult {
  WittVec<TiltElt> value;
  std::vector<int> loss;  // t-digits lost per coordinate at the deepest level
};

/// xi_n = ([eps] - 1) / ([eps_n] - 1) at Witt length m. The quotient is
/// checked against the closed form of its first coordinate and by
/// multiplying back.
inline XiResult xi_generator(int p, int n, int m, int window) {
  require(n >= 1, ErrorCode::invalid_argument, "xi_n needs n >= 1");
  require(m >= 1, ErrorCode::length_bound, "Witt length must be >= 1");
  const TiltElt e = TiltElt::epsilon(p, 0, window), en = TiltElt::epsilon(p, n, window);
  const auto num = witt_sub(teichmuller(e, p, m), witt_one(e, p, m));
  const auto den = witt_sub(teichmuller(en, p, m), witt_one(en, p, m));
  auto res = witt_divide_exact(num, den);
  require(res.quotient[0] == xi_first_coordinate(p, n, window), ErrorCode::not_divisible,
          "xi_n first coordinate differs from the geometric sum");
  const auto back = witt_mul(res.quotient, den);
  for (int i = 0; i < m; ++i)
    require(back[i] == num[i], ErrorCode::not_divisible, "xi_n does not multiply back at coordinate " + std::to_string(i));
  return {std::move(res.quotient), std::move(res.loss)};
}

/// Outcome of the roots-of-unity classification. On failure `coordinate`
/// is the first Witt coordinate that breaks Teichmuller form.
struct RootCheck {
  bool ok = false;
  ErrorCode code = ErrorCode::not_root_of_unity;
  int coordinate = -1;
  CycElt zeta;
};

/// Roots of unity of order p^m in W_n(V), p odd, follow the induction of
/// the classification: a^{p^m} = 1 is read on ghost components (w_j only
/// involves a_0..a_j, so the first failing component locates the bad
/// coordinate), a_0 must be a p^m-th root of unity, and every higher
/// coordinate must vanish.
inline RootCheck check_root_of_unity(const WittVec<CycElt>& a, int m) {
  require(a.p % 2 == 1, ErrorCode::invalid_argument, "the classification needs p odd");
  require(a.len() >= 1, ErrorCode::length_bound, "empty Witt vector");
  require(m >= 0, ErrorCode::invalid_argument, "m must be >= 0");
  const auto order = static_cast<std::uint64_t>(ipow(a.p, m));
  const GhostVec<CycElt> w = ghost(a);
  for (int i = 0; i < w.len(); ++i) {
    const CycElt wi = w[i].pow(order);
    if (!(wi == CycElt::constant(a.p, wi.depth(), wi.prec(), 1))) return {false, ErrorCode::not_root_of_unity, i, {}};
  }
  for (int i = 1; i < a.len(); ++i)
    if (!a[i].is_zero()) return {false, ErrorCode::no_teichmuller_form, i, {}};
  return {true, ErrorCode::not_root_of_unity, -1, a[0]};
}

/// Returns zeta with a = [zeta]_n, or throws the classification failure.
inline CycElt classify_root_of_unity(const WittVec<CycElt>& a, int m) {
  const RootCheck r = check_root_of_unity(a, m);
  if (r.ok) return r.zeta;
  if (r.code == ErrorCode::not_root_of_unity)
    fail(r.code, "not a root of unity: coordinate " + std::to_string(r.coordinate) + " breaks a^{p^m} = 1");
  fail(r.code, "no Teichmuller form: coordinate " + std::to_string(r.coordinate) + " is non-zero");
}

/// One rung of the kernel ladder for theta'_n.
struct LadderRung {
  Rational valuation;
  bool predicted_zero = false;
  bool observed_zero = false;
};

/// Elements x = (zeta_{p^depth} - 1)^k, k = 0 .. kmax, graded by v(x) =
/// k / e; theta'_n(x) = 0 is predicted iff v(x) >= the kernel bound and
/// observed by division by p in W_n. The precision is chosen so that
/// v(x^{p^n}) is resolved past the threshold.
inline std::vector<LadderRung> kernel_ladder(int p, int n, int depth, int kmax) {
  const Rational bound = theta_prime_kernel_bound(p, n);
  const int prec = static_cast<int>((ipow(p, n) - 1) / (p - 1)) + 2 * n + 2;
  const CycElt pi = CycElt::zeta(p, depth, prec) - CycElt::constant(p, depth, prec, 1);
  const std::int64_t e = ramification(p, depth);
  std::vector<LadderRung> out;
  CycElt x = CycElt::constant(p, depth, prec, 1);
  for (int k = 0; k <= kmax; ++k) {
    const Rational v(k, e);
    out.push_back({v, v >= bound, in_p_witt(theta_prime(x, n))});
    x = x * pi;
  }
  return out;
}

}  // namespace wittlab
