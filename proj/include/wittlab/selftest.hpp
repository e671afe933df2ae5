#pragma once

#include "wittlab/sampling.hpp"
#include "wittlab/wittlab.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

namespace wittlab {

/// Parameter sets for the acceptance suite. Each context fixes p, N, D, L.
struct Profile {
  std::string name;
  std::vector<PrecisionCtx> contexts;

  static Profile small() { return {"small", {{3, 4, 5, 4, 4}, {5, 4, 3, 4, 4}}}; }
  /// p = 5 runs at D = 4: one level deeper the residue rings have 62500
  /// coefficients and the TR checks no longer fit the time budget.
  static Profile full() { return {"full", {{3, 6, 6, 4, 4}, {5, 6, 4, 4, 4}}}; }

  static Profile named(const std::string& name) {
    if (name == "small") return small();
    if (name == "full") return full();
    fail(ErrorCode::invalid_argument, "unknown profile '" + name + "' (expected small or full)");
  }

  const PrecisionCtx& for_prime(int p) const {
    for (const auto& c : contexts)
      if (c.p == p) return c;
    fail(ErrorCode::invalid_argument, "profile has no context for p = " + std::to_string(p));
  }
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  int effective_precision = 0;
  int checks = 0;
  std::string detail;
  double seconds = 0;
};

namespace selftest_detail {

using sampling::Rng;

/// Collects assertions of one criterion; the first failure is kept.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failure_.empty()) failure_ = what;
  }
  void precision(int digits) { precision_ = std::min(precision_, digits); }

  bool passed() const { return failure_.empty(); }
  int count() const { return count_; }
  const std::string& failure() const { return failure_; }
  int effective_precision() const { return precision_ == INT_MAX ? 0 : precision_; }

 private:
  int count_ = 0;
  int precision_ = INT_MAX;
  std::string failure_;
};

inline std::string tag(int p, int n) { return "p=" + std::to_string(p) + " n=" + std::to_string(n); }

/// Coordinatewise equality modulo p^prec across tower depths.
inline bool equal_at(const WittVec<CycElt>& a, const WittVec<CycElt>& b, int prec) {
  if (a.len() != b.len()) return false;
  for (int i = 0; i < a.len(); ++i)
    if (!same_value(a[i].with_precision(prec), b[i].with_precision(prec))) return false;
  return true;
}

inline WittVec<CycElt> embed_all(const WittVec<CycElt>& v, int depth) {
  return witt_map(v, [depth](const CycElt& x) { return x.embed(depth); });
}

inline int max_depth(const WittVec<CycElt>& v) {
  int d = 1;
  for (const auto& x : v.coords) d = std::max(d, x.depth());
  return d;
}

template <class R>
WittVec<R> with_backend(const WittVec<R>& a, const WittVec<R>& b, bool mul, Backend backend) {
  WittConfig cfg;
  cfg.backend = backend;
  return mul ? witt_mul(a, b, cfg) : witt_add(a, b, cfg);
}

// 1. Backend A and Backend B agree on add and mul.
inline void backends(const Profile& prof, Check& c) {
  Rng rng(101);
  for (int p : {3, 5}) {
    const int N = prof.for_prime(p).N;
    for (int s = 0; s < 100; ++s) {
      const int n = 1 + s % 4;
      const bool mul = s % 2 == 0;
      const auto a = sampling::random_witt_residue(rng, p, n, 1 + s % 2);
      const auto b = sampling::random_witt_residue(rng, p, n, 1 + s % 2);
      c.expect(with_backend(a, b, mul, Backend::ghost_lift) == with_backend(a, b, mul, Backend::universal),
               "residue backends differ, " + tag(p, n));
      const auto x = sampling::random_witt_cyc(rng, p, n, 1, N), y = sampling::random_witt_cyc(rng, p, n, 1, N);
      c.expect(with_backend(x, y, mul, Backend::ghost_lift) == with_backend(x, y, mul, Backend::universal),
               "cyclotomic backends differ, " + tag(p, n));
    }
    c.precision(N);
  }
}

// 2. Ghost map is a ring homomorphism and ghost_inverse inverts it over Z.
inline void ghost_roundtrip(const Profile& prof, Check& c) {
  Rng rng(102);
  for (const auto& ctx : prof.contexts) {
    for (int s = 0; s < 200; ++s) {
      const int n = 1 + s % ctx.L;
      const auto a = sampling::random_witt_int(rng, ctx.p, n), b = sampling::random_witt_int(rng, ctx.p, n);
      const auto ga = ghost(a), gb = ghost(b), gs = ghost(witt_add(a, b)), gm = ghost(witt_mul(a, b));
      for (int i = 0; i < n; ++i) {
        c.expect(gs[i] == ga[i] + gb[i], "ghost(a + b) differs, " + tag(ctx.p, n));
        c.expect(gm[i] == ga[i] * gb[i], "ghost(a * b) differs, " + tag(ctx.p, n));
      }
      c.expect(ghost_inverse(ga) == a, "ghost_inverse(ghost(a)) != a, " + tag(ctx.p, n));
    }
  }
}

// 3. theta'_n identities modulo p W_n and the kernel ladder.
inline void theta_prime_identities(const Profile&, Check& c) {
  Rng rng(103);
  const int prec = 8;
  for (int p : {3, 5}) {
    for (int n = 1; n <= 4; ++n) {
      const auto like = CycElt::constant(p, 1, prec, 0);
      const auto v1 = n >= 2 ? verschiebung(witt_one(like, p, n - 1)) : witt_zero(like, p, 1);
      c.expect(in_p_witt(witt_sub(v1, teichmuller(CycElt::constant(p, 1, prec, -p), p, n))),
               "V(1) != [-p] mod p, " + tag(p, n));
      for (int s = 0; s < 30; ++s) {
        const auto x = sampling::random_cyc(rng, p, 2, prec), y = sampling::random_cyc(rng, p, 2, prec);
        c.expect(congruent_mod_p(witt_add(theta_prime(x, n), theta_prime(y, n)), theta_prime(x + y, n)),
                 "[x]^p + [y]^p != [x + y]^p mod p, " + tag(p, n));
        if (n < 2) continue;
        c.expect(congruent_mod_p(frobenius(frobenius_mod_p_section(x, n)), theta_prime(x.pow(static_cast<std::uint64_t>(p)), n - 1)),
                 "F(theta'_n(x)) != theta'_{n-1}(x^p), " + tag(p, n));
        c.expect(restrict(theta_prime(x, n)) == theta_prime(x, n - 1), "R(theta'_n(x)) != theta'_{n-1}(x), " + tag(p, n));
        // y = (zeta_{p^2} - 1)^k u with k >= p - 1 has v(y^p) >= 1; x = -y^p / p.
        const auto pi = CycElt::zeta(p, 2, prec) - CycElt::constant(p, 2, prec, 1);
        const auto unit = CycElt::zeta_power(p, 2, prec, 1 + s % (p * p - 1));
        const auto yy = pi.pow(static_cast<std::uint64_t>(p - 1 + s % 5)) * unit;
        const auto xx = (-yy.pow(static_cast<std::uint64_t>(p))).divide_by_p_power(1);
        c.expect(congruent_mod_p(verschiebung(theta_prime(xx, n - 1)), theta_prime(yy.with_precision(xx.prec()), n)),
                 "V(theta'_{n-1}(x)) != theta'_n((-px)^{1/p}), " + tag(p, n));
      }
    }
  }
  for (auto [p, n, depth] : {std::tuple{3, 1, 2}, {3, 2, 2}, {3, 3, 3}, {5, 1, 2}, {5, 2, 2}}) {
    for (const auto& r : kernel_ladder(p, n, depth, static_cast<int>(ramification(p, depth))))
      c.expect(r.predicted_zero == r.observed_zero, "kernel ladder misclassifies v = " +
                                                       std::to_string(r.valuation.numerator()) + "/" +
                                                       std::to_string(r.valuation.denominator()) + ", " + tag(p, n));
  }
  c.precision(prec - 4);
}

// 4. Exact valuation table.
inline void valuation_table(const Profile&, Check& c) {
  for (int p : {3, 5}) {
    const auto one = [p](int shift, int m) { return TiltElt::constant(p, shift, m, 1); };
    c.expect((TiltElt::epsilon(p, 0, 3) - one(1, 3)).valuation() == Valuation::exact(Rational(p, p - 1)),
             "v_R(eps - 1) != p/(p-1), p=" + std::to_string(p));
    for (int n = 1; n <= 4; ++n)
      c.expect((TiltElt::epsilon(p, n, 2) - one(n, 2)).valuation() ==
                   Valuation::exact(Rational(1, ipow(p, n - 1) * (p - 1))),
               "v_R(eps_n - 1) wrong, " + tag(p, n));
    for (int n = 1; n <= 3; ++n) {
      const Rational expect = (Rational(1) - Rational(1, ipow(p, n))) / (Rational(1) - Rational(1, p));
      c.expect(xi_first_coordinate(p, n, 2).valuation() == Valuation::exact(expect), "v_R(xi_{n,1}) wrong, " + tag(p, n));
    }
  }
}

// 5. theta_n: homomorphism, oracle, R and F compatibility, kernel generator.
inline void theta_correctness(const Profile& prof, Check& c) {
  Rng rng(105);
  for (const auto& ctx : prof.contexts) {
    const int p = ctx.p;
    const int N = 3, n = 2, L = n + N - 1;
    WittConfig lift;
    lift.backend = Backend::ghost_lift;
    for (int s = 0; s < 100; ++s) {
      const auto a = sampling::random_witt_tilt(rng, p, L, N), b = sampling::random_witt_tilt(rng, p, L, N);
      const auto ta = theta_n(a, n, N), tb = theta_n(b, n, N);
      c.precision(std::min(ta.effective_precision, tb.effective_precision));
      const int d = std::max(max_depth(ta.value), max_depth(tb.value));
      const auto x = embed_all(ta.value, d), y = embed_all(tb.value, d);
      c.expect(equal_at(theta_n(witt_add(a, b), n, N).value, witt_add(x, y, lift), N), "theta_n(a + b) differs, p=" + std::to_string(p));
      c.expect(equal_at(theta_n(witt_mul(a, b), n, N).value, witt_mul(x, y, lift), N), "theta_n(a b) differs, p=" + std::to_string(p));
    }
    for (int s = 0; s < 20; ++s) {
      const auto x = sampling::random_tilt(rng, p, N);
      for (int k = 1; k <= 3; ++k)
        c.expect(equal_at(theta_n(teichmuller(x, p, k + N - 1), k, N).value, theta_teichmuller(x, k, N).value, N),
                 "theta_n([x]) differs from [sharp(x)]_n, " + tag(p, k));
      for (int k = 2; k <= 3; ++k) {
        const auto a = sampling::random_witt_tilt(rng, p, k + N - 1, N);
        const auto tk = theta_n(a, k, N).value;
        c.expect(equal_at(restrict(tk), theta_n(a, k - 1, N).value, N), "R theta_n != theta_{n-1}, " + tag(p, k));
        const auto rhs = theta_n(frobenius(a), k - 1, N);
        c.expect(equal_at(frobenius(tk), rhs.value, rhs.effective_precision), "F theta_n != theta_{n-1} F, " + tag(p, k));
      }
    }
    for (int k = 1; k <= 3; ++k) {
      const int m = 3;
      const int eff = std::min(N, m - k + 1);
      const auto xi = xi_generator(p, k, m, eff + 1);  // checks xi (eps_n - 1) = eps - 1 exactly
      const auto t = theta_n(xi.value, k, N);
      c.expect(witt_is_zero(t.value), "theta_n(xi_n) != 0, " + tag(p, k));
    }
  }
}

// 6. Roots of unity: every Teichmuller root classifies, perturbations fail
// at the perturbed coordinate.
inline void roots_of_unity(const Profile&, Check& c) {
  const int p = 3, prec = 6;
  for (int m = 0; m <= 2; ++m)
    for (int n = 1; n <= 3; ++n)
      for (std::int64_t k = 0; k < ipow(p, m); ++k) {
        const auto z = CycElt::zeta_power(p, std::max(m, 1), prec, k);
        const auto r = check_root_of_unity(teichmuller(z, p, n), m);
        c.expect(r.ok && r.zeta == z, "[zeta]_n not classified, m=" + std::to_string(m) + " n=" + std::to_string(n));
      }
  Rng rng(106);
  std::uniform_int_distribution<int> pick_m(0, 2), pick_n(1, 3), pick_c(1, p - 1);
  for (int s = 0; s < 50; ++s) {
    const int m = pick_m(rng), n = pick_n(rng);
    const int depth = std::max(m, 1);
    const auto z = CycElt::zeta_power(p, depth, prec, static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(ipow(p, m))));
    auto a = teichmuller(z, p, n);
    const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    // bump by a unit c + p * noise: a_0 leaves the residue class of 1
    const auto noise = sampling::random_cyc(rng, p, depth, prec).scaled(mpz_class(p));
    a[i] = a[i] + CycElt::constant(p, depth, prec, pick_c(rng)) + noise;
    const auto r = check_root_of_unity(a, m);
    c.expect(!r.ok && r.coordinate == i, "perturbation at coordinate " + std::to_string(i) + " reported at " +
                                             std::to_string(r.coordinate) + ", m=" + std::to_string(m));
  }
  c.precision(prec);
}

// 7. TR operators: R, F and Galois on beta, composition, cocycle, and the
// consistency of R with beta.
inline void tr_operators(const Profile& prof, Check& c) {
  Rng rng(107);
  for (const auto& ctx : prof.contexts) {
    const int p = ctx.p;
    const TRModel tr(ctx);
    for (int n = 1; n <= 3; ++n) {
      const auto b = tr.beta(n);
      c.precision(b.precision());
      c.expect(!b.is_zero(), "beta vanishes, " + tag(p, n));
      if (n >= 2) {
        const auto below = tr.beta(n - 1);
        c.expect(TRModel::equal(tr.restriction(b), below), "R(beta) != beta, " + tag(p, n));
        c.expect(TRModel::equal(tr.frobenius(b), below), "F(beta) != beta, " + tag(p, n));
        const int np = tr.theta_precision(n);
        const auto lhs = detail::cyc_mul(
            theta_n(detail::teich_minus_one(TiltElt::epsilon(p, n, np), n + np - 2), n - 1, np).value, tr.lambda(n));
        const auto rhs = theta_n(detail::teich_minus_one(TiltElt::epsilon(p, n - 1, np), n + np - 2), n - 1, np).value;
        c.expect(TRModel::equal(tr.make(n - 1, 0, lhs), tr.make(n - 1, 0, rhs)), "theta_{n-1}([eps_n]-1) lambda != theta_{n-1}([eps_{n-1}]-1), " + tag(p, n));
      }
      for (std::int64_t u : {std::int64_t{2}, std::int64_t{1 + p}, std::int64_t{p - 1}}) {
        const auto ub = detail::cyc_mul(b.coeff, detail::witt_unit(b.coeff[0], p, n, mpz_class(static_cast<long>(u))));
        c.expect(TRModel::equal(tr.galois(b, u), tr.make(n, 2, ub)), "sigma(beta) != chi beta, " + tag(p, n) + " u=" + std::to_string(u));
      }
    }
    const std::int64_t u1 = 2, u2 = p - 1;
    for (int s = 0; s < 20; ++s) {
      const int n = 1 + s % 3, m = s % 3;
      const auto cls = tr.make(n, 2 * m, sampling::random_witt_cyc(rng, p, n, 2, tr.theta_precision(n)));
      c.expect(TRModel::equal(tr.galois(tr.galois(cls, u2), u1), tr.galois(cls, u1 * u2)), "sigma_u sigma_u' != sigma_uu', " + tag(p, n));
    }
    for (int n = 1; n <= 3; ++n) {
      const auto s1mu2 = witt_map(tr.mu(n, u2), [u1](const CycElt& x) { return x.galois(u1); });
      c.expect(TRModel::equal(tr.make(n, 0, detail::cyc_mul(tr.mu(n, u1), s1mu2)), tr.make(n, 0, tr.mu(n, u1 * u2))),
               "mu cocycle fails, " + tag(p, n));
    }
  }
}

// 8. TC kernel half for p = 3.
inline void tc_kernel(const Profile&, Check& c) {
  const int p = 3, window = 4;
  for (int q = 0; q <= 3; ++q) {
    c.expect(tc_kernel_check(q, prime_field_witt(p, {1}, window), window), "tc kernel fails on (1), q=" + std::to_string(q));
    c.expect(tc_kernel_check(q, prime_field_witt(p, {1, 0}, window), window), "tc kernel fails on (1,0), q=" + std::to_string(q));
    c.expect(tc_kernel_check(q, prime_field_witt(p, {0, 1}, window), window), "tc kernel fails on (0,1), q=" + std::to_string(q));
  }
  const auto e1 = TiltElt::epsilon(p, 1, window), e2 = TiltElt::epsilon(p, 2, window);
  const auto zero = TiltElt::constant(p, 1, window, 0), one = TiltElt::constant(p, 1, window, 1);
  const std::vector<WittVec<TiltElt>> bad = {
      {p, {e1, zero}}, {p, {e2, zero}}, {p, {zero, e1}}, {p, {e1 * e1, zero}}, {p, {one, e1}},
  };
  for (int q = 1; q <= 2; ++q)
    for (const auto& x : bad) c.expect(!tc_kernel_check(q, x, window), "tc kernel accepts a non-kernel input, q=" + std::to_string(q));
}

// 9. Tilt integrity.
inline void tilt_integrity(const Profile& prof, Check& c) {
  Rng rng(109);
  for (const auto& ctx : prof.contexts) {
    const int p = ctx.p;
    const int Ns = std::min(ctx.N, ctx.D - 1);
    std::vector<TiltElt> pool;
    for (int i = 0; i < 6; ++i) pool.push_back(sampling::random_tilt(rng, p, 3));
    for (int s = 0; s < 500; ++s) {
      const auto& a = pool[rng() % pool.size()];
      const auto& b = pool[rng() % pool.size()];
      const TiltElt r = s % 3 == 0 ? a + b : s % 3 == 1 ? a * b : a - b;
      c.expect(r.is_compatible(), "compatibility lost under ring operations, p=" + std::to_string(p));
      pool[rng() % pool.size()] = r;
    }
    for (int s = 0; s < 30; ++s) {
      const auto a = sampling::random_tilt(rng, p, Ns);
      c.expect(a.frobenius().frobenius_inverse() == a && a.frobenius_inverse().frobenius() == a, "phi^{-1} phi != id");
      c.expect(sharp(a, 1, Ns, &rng) == sharp(a, 1, Ns, &rng), "sharp depends on the lift, p=" + std::to_string(p));
      const auto vt = a.valuation(), vc = sharp(a, 1, Ns).valuation();
      if (vt.is_exact() && vc.is_exact()) c.expect(vt.value == vc.value, "v_R differs from v(sharp), p=" + std::to_string(p));
    }
    c.precision(Ns);
  }
}

// 10. Ghost map after inverting p, and non-vanishing ghost coordinates.
inline void ghost_localized(const Profile& prof, Check& c) {
  Rng rng(110);
  for (const auto& ctx : prof.contexts) {
    const int p = ctx.p;
    for (int s = 0; s < 50; ++s) {
      const int n = 1 + s % ctx.L;
      GhostVec<mpz_class> w{p, {}};
      for (int i = 0; i < n; ++i) w.comps.push_back(sampling::random_int(rng, 1000));
      const auto pre = ghost_inverse_localized(w);
      mpz_class pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(pre.k));
      const auto g = ghost(pre.value);
      bool ok = pre.k <= n - 1;
      for (int i = 0; i < n; ++i) ok = ok && g[i] == pk * w[i];
      c.expect(ok, "localized ghost preimage wrong, " + tag(p, n));
      c.expect(ghost_inverse(g) == pre.value, "ghost is not injective, " + tag(p, n));
    }
    for (int n = 1; n <= 3; ++n) {
      const auto z = CycElt::zeta(p, n, ctx.N);
      const auto g = ghost(witt_sub(teichmuller(z, p, n), witt_one(z, p, n)));
      for (int i = 0; i < n; ++i) c.expect(!g[i].is_zero(), "ghost coordinate of [zeta]_n - 1 vanishes, " + tag(p, n));
    }
    c.precision(ctx.N);
  }
}

struct Entry {
  int id;
  const char* name;
  void (*run)(const Profile&, Check&);
};

inline const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {1, "witt backends agree", backends},
      {2, "ghost homomorphism and round trip", ghost_roundtrip},
      {3, "theta' identities and kernel bound", theta_prime_identities},
      {4, "valuation table", valuation_table},
      {5, "theta_n correctness", theta_correctness},
      {6, "roots of unity classification", roots_of_unity},
      {7, "TR operator consistency", tr_operators},
      {8, "TC kernel", tc_kernel},
      {9, "tilt integrity", tilt_integrity},
      {10, "ghost after inverting p", ghost_localized},
  };
  return table;
}

inline CriterionResult run_entry(const Entry& e, const Profile& prof) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  CriterionResult r{e.id, e.name, false, 0, 0, "", 0};
  try {
    e.run(prof, c);
    r.passed = c.passed();
    r.detail = c.failure();
  } catch (const Error& err) {
    r.detail = std::string(to_string(err.code())) + ": " + err.what();
  } catch (const std::exception& err) {
    r.detail = err.what();
  }
  r.effective_precision = c.effective_precision();
  r.checks = c.count();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace selftest_detail

/// Runs the acceptance criteria (all of them when `only` is empty). The
/// criteria share no mutable state and may run concurrently.
inline std::vector<CriterionResult> run_selftest(const Profile& prof, bool parallel = true,
                                                 const std::vector<int>& only = {}) {
  std::vector<const selftest_detail::Entry*> chosen;
  for (const auto& e : selftest_detail::entries())
    if (only.empty() || std::find(only.begin(), only.end(), e.id) != only.end()) chosen.push_back(&e);
  std::vector<CriterionResult> out;
  if (parallel) {
    std::vector<std::future<CriterionResult>> jobs;
    for (const auto* e : chosen)
      jobs.push_back(std::async(std::launch::async, [e, &prof] { return selftest_detail::run_entry(*e, prof); }));
    for (auto& j : jobs) out.push_back(j.get());
  } else {
    for (const auto* e : chosen) out.push_back(selftest_detail::run_entry(*e, prof));
  }
  return out;
}

}  // namespace wittlab
