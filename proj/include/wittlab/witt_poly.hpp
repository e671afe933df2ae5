#pragma once

#include "wittlab/precision.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wittlab {

/// Sparse polynomial over Z in at most 8 variables. A monomial is packed
/// into a uint64 with 8 bits of exponent per variable.
class MultiPoly {
 public:
  static constexpr int max_vars = 8;
  static constexpr int max_exponent = 255;
  using Monomial = std::uint64_t;

  static Monomial pack(const std::array<int, max_vars>& exps) {
    Monomial m = 0;
    for (int v = 0; v < max_vars; ++v) {
      require(exps[v] >= 0 && exps[v] <= max_exponent, ErrorCode::unsupported, "monomial exponent out of range");
      m |= static_cast<Monomial>(exps[v]) << (8 * v);
    }
    return m;
  }
  static int exponent(Monomial m, int var) { return static_cast<int>((m >> (8 * var)) & 0xff); }

  static MultiPoly variable(int var) {
    MultiPoly r;
    std::array<int, max_vars> e{};
    e[var] = 1;
    r.terms_.emplace(pack(e), mpz_class(1));
    return r;
  }
  static MultiPoly constant(const mpz_class& c) {
    MultiPoly r;
    if (c != 0) r.terms_.emplace(0, c);
    return r;
  }

  std::size_t size() const { return terms_.size(); }
  const std::unordered_map<Monomial, mpz_class>& terms() const { return terms_; }

  MultiPoly& operator+=(const MultiPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    std::unordered_map<Monomial, mpz_class> acc;
    acc.reserve(a.size() * b.size() / 2 + 1);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        const Monomial m = add_exponents(ma, mb);
        mpz_class& slot = acc[m];
        mpz_addmul(slot.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
      }
    }
    MultiPoly r;
    for (auto& [m, c] : acc)
      if (c != 0) r.terms_.emplace(m, std::move(c));
    return r;
  }

  MultiPoly pow(unsigned k) const {
    MultiPoly r = constant(1), base = *this;
    while (k) {
      if (k & 1) r = r * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return r;
  }

  MultiPoly scaled(const mpz_class& s) const {
    MultiPoly r;
    if (s == 0) return r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, c * s);
    return r;
  }

  /// Exact division of every coefficient; throws if any is not divisible.
  MultiPoly divided_exact(const mpz_class& d) const {
    MultiPoly r;
    for (const auto& [m, c] : terms_) {
      require(mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t()) != 0, ErrorCode::not_divisible,
              "universal polynomial coefficient not divisible");
      mpz_class q;
      mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
      r.terms_.emplace(m, std::move(q));
    }
    return r;
  }

  int max_exponent_of(int var) const {
    int best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, exponent(m, var));
    return best;
  }

 private:
  static Monomial add_exponents(Monomial a, Monomial b) {
    Monomial r = 0;
    for (int v = 0; v < max_vars; ++v) {
      const int e = exponent(a, v) + exponent(b, v);
      require(e <= max_exponent, ErrorCode::unsupported, "monomial exponent overflow");
      r |= static_cast<Monomial>(e) << (8 * v);
    }
    return r;
  }

  void add_term(Monomial m, const mpz_class& c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (c != 0) terms_.emplace(m, c);
      return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  std::unordered_map<Monomial, mpz_class> terms_;
};

/// The universal Witt polynomials for W_n: sum[i], prod[i] in
/// Z[a_0..a_{n-1}, b_0..b_{n-1}] (a_j is variable j, b_j is variable n+j)
/// and frob[i] in Z[a_0..a_{n-1}] (i < n-1). Each family is obtained by
/// ghost inversion over the polynomial ring.
struct UniversalPolys {
  int p = 0;
  int n = 0;
  std::vector<MultiPoly> sum, prod, frob;
};

inline constexpr int universal_max_length = 4;
inline constexpr int universal_max_prime = 5;

inline bool universal_supported(int p, int n) { return n <= universal_max_length && p <= universal_max_prime; }

namespace detail {

inline MultiPoly ghost_component(const std::vector<MultiPoly>& x, int p, int i) {
  MultiPoly w;
  mpz_class pj = 1;
  for (int j = 0; j <= i; ++j) {
    w += x[static_cast<std::size_t>(j)].pow(static_cast<unsigned>(ipow(p, i - j))).scaled(pj);
    pj *= p;
  }
  return w;
}

/// Solves sum_{j<=i} p^j X_j^{p^{i-j}} = target_i for i < count.
template <class Target>
std::vector<MultiPoly> invert_ghost(int p, int count, Target target) {
  std::vector<MultiPoly> out;
  // powers[j][k] = out[j]^{p^k}
  std::vector<std::vector<MultiPoly>> powers;
  for (int i = 0; i < count; ++i) {
    MultiPoly num = target(i);
    mpz_class pj = 1;
    for (int j = 0; j < i; ++j) {
      auto& pw = powers[static_cast<std::size_t>(j)];
      while (static_cast<int>(pw.size()) <= i - j) pw.push_back(pw.back().pow(static_cast<unsigned>(p)));
      num -= pw[static_cast<std::size_t>(i - j)].scaled(pj);
      pj *= p;
    }
    out.push_back(num.divided_exact(pj));
    powers.push_back({out.back()});
  }
  return out;
}

inline std::unique_ptr<UniversalPolys> build_universal(int p, int n) {
  auto u = std::make_unique<UniversalPolys>();
  u->p = p;
  u->n = n;
  std::vector<MultiPoly> a, b;
  for (int i = 0; i < n; ++i) {
    a.push_back(MultiPoly::variable(i));
    b.push_back(MultiPoly::variable(n + i));
  }
  u->sum = invert_ghost(p, n, [&](int i) {
    MultiPoly w = ghost_component(a, p, i);
    w += ghost_component(b, p, i);
    return w;
  });
  u->prod = invert_ghost(p, n, [&](int i) { return ghost_component(a, p, i) * ghost_component(b, p, i); });
  u->frob = invert_ghost(p, n - 1, [&](int i) { return ghost_component(a, p, i + 1); });
  return u;
}

}  // namespace detail

/// Cached universal polynomials. Each (p, n) entry is built exactly once;
/// concurrent readers block only while that entry is being built.
inline const UniversalPolys& universal_polys(int p, int n) {
  require(universal_supported(p, n), ErrorCode::unsupported,
          "universal polynomials are capped at n <= 4, p <= 5");
  require(n >= 1, ErrorCode::length_bound, "Witt length must be >= 1");
  struct Entry {
    std::once_flag once;
    std::unique_ptr<UniversalPolys> polys;
  };
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Entry>> cache;
  Entry* entry = nullptr;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{p, n}];
    if (!slot) slot = std::make_unique<Entry>();
    entry = slot.get();
  }
  std::call_once(entry->once, [&] { entry->polys = detail::build_universal(p, n); });
  return *entry->polys;
}

/// Power tables for the variables of a polynomial family, shared across
/// evaluations of every member of the family.
template <class R>
class PowerTable {
 public:
  PowerTable(const std::vector<const MultiPoly*>& family, const std::vector<R>& vars) {
    table_.resize(vars.size());
    for (std::size_t v = 0; v < vars.size(); ++v) {
      int top = 0;
      for (const auto* poly : family) top = std::max(top, poly->max_exponent_of(static_cast<int>(v)));
      table_[v].reserve(static_cast<std::size_t>(top) + 1);
      if (top >= 1) table_[v].push_back(vars[v]);
      for (int e = 2; e <= top; ++e) table_[v].push_back(table_[v].back() * vars[v]);
    }
  }

  /// `constant(c)` builds the ring constant c, `scale(x, c)` computes c*x.
  template <class Constant, class Scale>
  R evaluate(const MultiPoly& poly, Constant constant, Scale scale) const {
    R acc = constant(mpz_class(0));
    for (const auto& [m, c] : poly.terms()) {
      const R* first = nullptr;
      R prod;
      for (std::size_t v = 0; v < table_.size(); ++v) {
        const int e = MultiPoly::exponent(m, static_cast<int>(v));
        if (!e) continue;
        const R& f = table_[v][static_cast<std::size_t>(e - 1)];
        if (!first) {
          first = &f;
        } else if (first != &prod) {
          prod = *first * f;
          first = &prod;
        } else {
          prod = prod * f;
        }
      }
      acc = acc + (first ? scale(*first, c) : constant(c));
    }
    return acc;
  }

 private:
  std::vector<std::vector<R>> table_;
};

}  // namespace wittlab
