#pragma once

#include "wittlab/precision.hpp"
#include "wittlab/ring_traits.hpp"
#include "wittlab/witt_poly.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <climits>
#include <string>
#include <type_traits>
#include <vector>

namespace wittlab {

enum class Backend { automatic, ghost_lift, universal };

struct WittConfig {
  Backend backend = Backend::automatic;
  int guard = -1;   // ghost-lift guard digits; negative means "exactly n - 1"
  int max_len = 0;  // upper bound on Witt length (0: unbounded)
};

/// Truncated p-typical Witt vector (a_0, ..., a_{n-1}).
template <class R>
struct WittVec {
  int p = 0;
  std::vector<R> coords;

  int len() const { return static_cast<int>(coords.size()); }
  const R& operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
  R& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }
  bool operator==(const WittVec& o) const { return p == o.p && coords == o.coords; }
};

/// Ghost components (w_0, ..., w_{n-1}).
template <class R>
struct GhostVec {
  int p = 0;
  std::vector<R> comps;

  int len() const { return static_cast<int>(comps.size()); }
  const R& operator[](int i) const { return comps[static_cast<std::size_t>(i)]; }
  bool operator==(const GhostVec& o) const { return p == o.p && comps == o.comps; }
};

/// Result of witt_divide_exact. loss[i] is the precision given up at
/// coordinate i: p-adic digits in characteristic 0, t-digits in
/// characteristic p.
template <class R>
struct DivisionResult {
  WittVec<R> quotient;
  std::vector<int> loss;
};

namespace detail {

template <class R>
R iterate_pth_power(R x, int p, int k) {
  for (int i = 0; i < k; ++i) x = RingTraits<R>::pth_power(x, p);
  return x;
}

template <class R>
R ring_zero(const R& like) {
  return RingTraits<R>::from_int(like, mpz_class(0));
}

template <class R>
int min_precision(const std::vector<R>& xs) {
  int best = INT_MAX;
  for (const auto& x : xs) best = std::min(best, RingTraits<R>::precision(x));
  return best;
}

template <class R>
std::vector<R> at_precision(std::vector<R> xs, int prec) {
  if constexpr (!RingTraits<R>::char_p) {
    for (auto& x : xs)
      if (RingTraits<R>::precision(x) != prec) x = RingTraits<R>::at_precision(x, prec);
  }
  return xs;
}

template <class R>
void check_pair(const WittVec<R>& a, const WittVec<R>& b) {
  require(a.p == b.p, ErrorCode::invalid_argument, "Witt vectors over different primes");
  require(a.len() == b.len(), ErrorCode::length_bound, "Witt length mismatch");
}

template <class R>
void check_nonempty(const WittVec<R>& a) {
  require(a.len() >= 1, ErrorCode::length_bound, "Witt length must be >= 1");
}

/// Brings the coordinates of several char-0 Witt vectors to one precision.
template <class R>
int harmonize(std::vector<WittVec<R>*> vs) {
  int prec = INT_MAX;
  for (auto* v : vs) prec = std::min(prec, min_precision(v->coords));
  for (auto* v : vs) v->coords = at_precision(std::move(v->coords), prec);
  return prec;
}

template <class R>
GhostVec<R> ghost_of(const WittVec<R>& a) {
  GhostVec<R> w{a.p, {}};
  // powers[j] holds a_j^{p^{i-j}} for the current i.
  std::vector<R> powers;
  for (int i = 0; i < a.len(); ++i) {
    for (auto& x : powers) x = RingTraits<R>::pth_power(x, a.p);
    powers.push_back(a[i]);
    R acc = powers[0];
    mpz_class pj = 1;
    for (int j = 1; j <= i; ++j) {
      pj *= a.p;
      acc = acc + RingTraits<R>::scale(powers[static_cast<std::size_t>(j)], pj);
    }
    w.comps.push_back(acc);
  }
  return w;
}

/// Ghost inversion in a p-torsion-free ring. Coordinate i is recovered to
/// precision P - i where P is the input precision; the caller decides how
/// to reduce.
template <class R>
std::vector<R> ghost_inverse_raw(const GhostVec<R>& w) {
  static_assert(!RingTraits<R>::char_p, "ghost inversion needs a p-torsion-free ring");
  const int p = w.p;
  const int prec = min_precision(w.comps);
  std::vector<R> a;
  for (int i = 0; i < w.len(); ++i) {
    require(i < prec, ErrorCode::precision_exhausted, "ghost inversion exhausts p-adic precision");
    R num = RingTraits<R>::at_precision(w[i], prec);
    mpz_class pj = 1;
    for (int j = 0; j < i; ++j) {
      const R lifted = RingTraits<R>::at_precision(a[static_cast<std::size_t>(j)], prec);
      num = num - RingTraits<R>::scale(iterate_pth_power(lifted, p, i - j), pj);
      pj *= p;
    }
    if (!RingTraits<R>::divisible_by_p_power(num, p, i))
      fail(ErrorCode::not_ghost_vector, "not a ghost vector (component " + std::to_string(i) + ")");
    a.push_back(RingTraits<R>::divide_by_p_power(num, p, i));
  }
  return a;
}

template <class R>
int resolve_guard(const WittConfig& cfg, int out_len) {
  const int needed = out_len - 1;
  const int g = cfg.guard < 0 ? needed : cfg.guard;
  require(g >= needed, ErrorCode::precision_exhausted,
          "ghost-lift needs at least n - 1 = " + std::to_string(needed) + " guard digits");
  return g;
}

/// Backend A on a characteristic-0 ring: lift to precision P + G, apply
/// `op` on ghost components, invert, and reduce back to P.
template <class R, class Op>
WittVec<R> ghost_lift_char0(std::vector<WittVec<R>> args, int out_len, const WittConfig& cfg, Op op) {
  std::vector<WittVec<R>*> ptrs;
  for (auto& a : args) ptrs.push_back(&a);
  const int prec = harmonize(ptrs);
  const int p = args.front().p;
  std::vector<GhostVec<R>> ghosts;
  if constexpr (std::is_same_v<R, mpz_class>) {
    for (const auto& a : args) ghosts.push_back(ghost_of(a));
  } else {
    const int lifted = prec + resolve_guard<R>(cfg, out_len);
    for (const auto& a : args) ghosts.push_back(ghost_of(WittVec<R>{p, at_precision(a.coords, lifted)}));
  }
  GhostVec<R> w = op(ghosts);
  WittVec<R> out{p, ghost_inverse_raw(w)};
  if constexpr (!std::is_same_v<R, mpz_class>) out.coords = at_precision(std::move(out.coords), prec);
  return out;
}

/// Backend A on a characteristic-p ring with a lift to CycElt at precision 1.
template <class R, class Op>
WittVec<R> ghost_lift_charp(const std::vector<WittVec<R>>& args, int out_len, const WittConfig& cfg, Op op) {
  std::vector<WittVec<CycElt>> lifted;
  for (const auto& a : args) {
    WittVec<CycElt> l{a.p, {}};
    for (const auto& x : a.coords) l.coords.push_back(RingTraits<R>::lift(x));
    lifted.push_back(std::move(l));
  }
  WittVec<CycElt> r = ghost_lift_char0(std::move(lifted), out_len, cfg, op);
  WittVec<R> out{r.p, {}};
  for (const auto& x : r.coords) out.coords.push_back(RingTraits<R>::lower(x));
  return out;
}

template <class R, class Op>
WittVec<R> ghost_lift(const std::vector<WittVec<R>>& args, int out_len, const WittConfig& cfg, Op op) {
  if constexpr (RingTraits<R>::char_p) {
    return ghost_lift_charp(args, out_len, cfg, op);
  } else {
    return ghost_lift_char0(args, out_len, cfg, op);
  }
}

inline constexpr int automatic_universal_max_length = 2;

template <class R>
bool use_universal(const WittConfig& cfg, int p, int n) {
  switch (cfg.backend) {
    case Backend::universal:
      require(universal_supported(p, n), ErrorCode::unsupported,
              "universal polynomials are capped at n <= 4, p <= 5");
      return true;
    case Backend::ghost_lift: return false;
    case Backend::automatic: break;
  }
  // Term counts grow quickly with n; beyond length 2 a few dozen lifted
  // multiplications are cheaper than evaluating hundreds of monomials.
  return RingTraits<R>::char_p && universal_supported(p, n) && n <= automatic_universal_max_length;
}

/// Backend B: evaluate a family of universal polynomials.
template <class R>
WittVec<R> eval_universal(const std::vector<MultiPoly>& family, std::vector<R> vars, int p) {
  if constexpr (!RingTraits<R>::char_p) vars = at_precision(std::move(vars), min_precision(vars));
  std::vector<const MultiPoly*> ptrs;
  for (const auto& f : family) ptrs.push_back(&f);
  PowerTable<R> table(ptrs, vars);
  const R like = vars.front();
  auto constant = [&](const mpz_class& c) { return RingTraits<R>::from_int(like, c); };
  auto scale = [&](const R& x, const mpz_class& c) { return RingTraits<R>::scale(x, c); };
  WittVec<R> out{p, {}};
  for (const auto& f : family) out.coords.push_back(table.evaluate(f, constant, scale));
  return out;
}

template <class R>
std::vector<R> concat(const WittVec<R>& a, const WittVec<R>& b) {
  std::vector<R> v = a.coords;
  v.insert(v.end(), b.coords.begin(), b.coords.end());
  return v;
}

template <class R, class F>
GhostVec<R> pointwise(const std::vector<GhostVec<R>>& g, F f) {
  GhostVec<R> out{g[0].p, {}};
  for (int i = 0; i < g[0].len(); ++i) out.comps.push_back(f(g[0][i], g[1][i]));
  return out;
}

}  // namespace detail

/// Ring operations that depend on the coefficient ring. The primary
/// template covers every ring with RingTraits; other coefficient rings
/// (the tilt) specialize it.
template <class R>
struct WittArith {
  static WittVec<R> add(const WittVec<R>& a, const WittVec<R>& b, const WittConfig& cfg) {
    if (detail::use_universal<R>(cfg, a.p, a.len()))
      return detail::eval_universal(universal_polys(a.p, a.len()).sum, detail::concat(a, b), a.p);
    return detail::ghost_lift<R>({a, b}, a.len(), cfg, [](const auto& g) {
      return detail::pointwise(g, [](const auto& x, const auto& y) { return x + y; });
    });
  }

  static WittVec<R> mul(const WittVec<R>& a, const WittVec<R>& b, const WittConfig& cfg) {
    if (detail::use_universal<R>(cfg, a.p, a.len()))
      return detail::eval_universal(universal_polys(a.p, a.len()).prod, detail::concat(a, b), a.p);
    return detail::ghost_lift<R>({a, b}, a.len(), cfg, [](const auto& g) {
      return detail::pointwise(g, [](const auto& x, const auto& y) { return x * y; });
    });
  }

  /// F: W_n -> W_{n-1}.
  static WittVec<R> frobenius(const WittVec<R>& a, const WittConfig& cfg) {
    const int n = a.len();
    if constexpr (RingTraits<R>::char_p) {
      if (cfg.backend != Backend::universal && cfg.backend != Backend::ghost_lift) {
        WittVec<R> out{a.p, {}};
        for (int i = 0; i + 1 < n; ++i) out.coords.push_back(RingTraits<R>::pth_power(a[i], a.p));
        return out;
      }
    }
    if (detail::use_universal<R>(cfg, a.p, n)) return detail::eval_universal(universal_polys(a.p, n).frob, a.coords, a.p);
    return detail::ghost_lift<R>({a}, n - 1, cfg, [n](const auto& g) {
      std::decay_t<decltype(g[0])> out{g[0].p, {}};
      for (int i = 1; i < n; ++i) out.comps.push_back(g[0][i]);
      return out;
    });
  }
};

template <class R>
GhostVec<R> ghost(const WittVec<R>& a) {
  return detail::ghost_of(a);
}

/// Inverse of the ghost map over a p-torsion-free ring. Over a ring of
/// precision N the result is reported at precision N - (n - 1).
template <class R>
WittVec<R> ghost_inverse(const GhostVec<R>& w) {
  require(w.len() >= 1, ErrorCode::length_bound, "ghost vector must have length >= 1");
  WittVec<R> out{w.p, detail::ghost_inverse_raw(w)};
  if constexpr (!std::is_same_v<R, mpz_class>) {
    const int prec = detail::min_precision(w.comps) - (w.len() - 1);
    out.coords = detail::at_precision(std::move(out.coords), prec);
  }
  return out;
}

/// Ghost congruence criterion: w is in the image of ghost.
template <class R>
bool is_ghost_vector(const GhostVec<R>& w) {
  try {
    detail::ghost_inverse_raw(w);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::not_ghost_vector) return false;
    throw;
  }
}

/// Ghost inversion after inverting p: the least k <= n - 1 with p^k w in
/// the ghost image, together with the preimage x (ghost(x) = p^k w).
template <class R>
struct LocalizedPreimage {
  WittVec<R> value;
  int k = 0;
};

template <class R>
LocalizedPreimage<R> ghost_inverse_localized(const GhostVec<R>& w) {
  GhostVec<R> scaled = w;
  for (int k = 0; k < w.len(); ++k) {
    if (is_ghost_vector(scaled)) return {ghost_inverse(scaled), k};
    for (auto& c : scaled.comps) c = RingTraits<R>::scale(c, mpz_class(w.p));
  }
  fail(ErrorCode::not_ghost_vector, "p^{n-1} w is not a ghost vector");
}

template <class R>
WittVec<R> witt_add(const WittVec<R>& a, const WittVec<R>& b, const WittConfig& cfg = {}) {
  detail::check_pair(a, b);
  detail::check_nonempty(a);
  return WittArith<R>::add(a, b, cfg);
}

template <class R>
WittVec<R> witt_mul(const WittVec<R>& a, const WittVec<R>& b, const WittConfig& cfg = {}) {
  detail::check_pair(a, b);
  detail::check_nonempty(a);
  return WittArith<R>::mul(a, b, cfg);
}

/// Negation is coordinatewise for odd p since -1 = [-1].
template <class R>
WittVec<R> witt_neg(const WittVec<R>& a) {
  require(a.p % 2 == 1, ErrorCode::invalid_argument, "Witt negation is coordinatewise only for odd p");
  WittVec<R> out = a;
  for (auto& x : out.coords) x = -x;
  return out;
}

template <class R>
WittVec<R> witt_sub(const WittVec<R>& a, const WittVec<R>& b, const WittConfig& cfg = {}) {
  return witt_add(a, witt_neg(b), cfg);
}

template <class R>
WittVec<R> teichmuller(const R& x, int p, int n) {
  require(n >= 1, ErrorCode::length_bound, "Witt length must be >= 1");
  WittVec<R> out{p, std::vector<R>(static_cast<std::size_t>(n), detail::ring_zero(x))};
  out[0] = x;
  return out;
}

/// Image of the integer k under Z -> W_n(Z) -> W_n(A).
template <class R>
WittVec<R> witt_from_int(const R& like, int p, int n, const mpz_class& k) {
  require(n >= 1, ErrorCode::length_bound, "Witt length must be >= 1");
  const auto z = detail::ghost_inverse_raw(GhostVec<mpz_class>{p, std::vector<mpz_class>(static_cast<std::size_t>(n), k)});
  WittVec<R> out{p, {}};
  for (const auto& c : z) out.coords.push_back(RingTraits<R>::from_int(like, c));
  return out;
}

template <class R>
WittVec<R> witt_zero(const R& like, int p, int n) {
  return witt_from_int(like, p, n, mpz_class(0));
}

template <class R>
WittVec<R> witt_one(const R& like, int p, int n) {
  return teichmuller(RingTraits<R>::from_int(like, mpz_class(1)), p, n);
}

template <class R>
WittVec<R> witt_pow(const WittVec<R>& a, std::uint64_t k, const WittConfig& cfg = {}) {
  detail::check_nonempty(a);
  WittVec<R> r = witt_one(a[0], a.p, a.len());
  WittVec<R> base = a;
  while (k) {
    if (k & 1) r = witt_mul(r, base, cfg);
    k >>= 1;
    if (k) base = witt_mul(base, base, cfg);
  }
  return r;
}

/// W(f) for a ring map f applied coordinatewise.
template <class R, class F>
auto witt_map(const WittVec<R>& a, F f) {
  using S = std::decay_t<decltype(f(a[0]))>;
  WittVec<S> out{a.p, {}};
  for (const auto& x : a.coords) out.coords.push_back(f(x));
  return out;
}

template <class R>
bool witt_is_zero(const WittVec<R>& a) {
  return std::all_of(a.coords.begin(), a.coords.end(), [](const R& x) { return RingTraits<R>::is_zero(x); });
}

template <class R>
WittVec<R> frobenius(const WittVec<R>& a, const WittConfig& cfg = {}) {
  require(a.len() >= 2, ErrorCode::length_bound, "Frobenius needs Witt length >= 2");
  return WittArith<R>::frobenius(a, cfg);
}

template <class R>
WittVec<R> verschiebung(const WittVec<R>& a, const WittConfig& cfg = {}) {
  detail::check_nonempty(a);
  require(cfg.max_len == 0 || a.len() + 1 <= cfg.max_len, ErrorCode::length_bound,
          "Verschiebung exceeds the maximal Witt length");
  WittVec<R> out{a.p, {detail::ring_zero(a[0])}};
  out.coords.insert(out.coords.end(), a.coords.begin(), a.coords.end());
  return out;
}

/// R: W_n -> W_{n-1}.
template <class R>
WittVec<R> restrict(const WittVec<R>& a, int to_len = -1) {
  if (to_len < 0) to_len = a.len() - 1;
  require(to_len >= 1 && to_len <= a.len(), ErrorCode::length_bound, "restriction needs target length in [1, n]");
  return WittVec<R>{a.p, std::vector<R>(a.coords.begin(), a.coords.begin() + to_len)};
}

/// Exact-division hook. The primary template solves coordinatewise using
/// the fact that the product coordinate m_i(c, b) is affine in c_i with
/// slope w_i(b).
template <class R>
struct WittDivision {
  static DivisionResult<R> divide(const WittVec<R>& d_in, const WittVec<R>& b_in, const WittConfig& cfg) {
    WittVec<R> d = d_in, b = b_in;
    const int n = d.len();
    DivisionResult<R> res{{d.p, {}}, {}};
    for (int i = 0; i < n; ++i) {
      WittVec<R> trial = res.quotient;
      trial.coords.push_back(detail::ring_zero(d[0]));
      WittVec<R> bi = restrict(b, i + 1);
      WittVec<R> di{d.p, {d[i]}};
      if constexpr (!RingTraits<R>::char_p) detail::harmonize<R>({&trial, &bi, &di});
      const WittVec<R> prod = witt_mul(trial, bi, cfg);
      const R num = di[0] - prod[i];
      const R den = ghost(bi)[i];
      try {
        auto [q, loss] = RingTraits<R>::divide(num, den);
        res.quotient.coords.push_back(q);
        res.loss.push_back(loss);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::not_divisible) throw;
        fail(ErrorCode::not_divisible, "not divisible at coordinate " + std::to_string(i) + ": " + e.what());
      }
      if constexpr (!RingTraits<R>::char_p) {
        const int prec = detail::min_precision(res.quotient.coords);
        res.quotient.coords = detail::at_precision(std::move(res.quotient.coords), prec);
      }
    }
    return res;
  }
};

/// The unique c with c * b = d (the caller claims divisibility).
template <class R>
DivisionResult<R> witt_divide_exact(const WittVec<R>& d, const WittVec<R>& b, const WittConfig& cfg = {}) {
  detail::check_pair(d, b);
  detail::check_nonempty(d);
  return WittDivision<R>::divide(d, b, cfg);
}

/// Membership in p * W_n(A) for p-torsion-free A, certified by exact
/// division by p * 1.
template <class R>
bool in_p_witt(const WittVec<R>& a, const WittConfig& cfg = {}) {
  static_assert(!RingTraits<R>::char_p, "p * W_n(A) membership is tested over p-torsion-free rings");
  const WittVec<R> p1 = witt_from_int(a[0], a.p, a.len(), mpz_class(a.p));
  try {
    witt_divide_exact(a, p1, cfg);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::not_divisible) return false;
    throw;
  }
}

}  // namespace wittlab
