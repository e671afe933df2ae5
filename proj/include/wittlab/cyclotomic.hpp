#pragma once

#include "wittlab/precision.hpp"
#include "wittlab/residue.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace wittlab {

/// Element of O_{K_v}/p^N = (Z/p^N)[x]/Phi_{p^v}(x), x = zeta_{p^v}.
/// Coefficients are little-endian in x and reduced into [0, p^N).
class CycElt {
 public:
  CycElt() = default;

  CycElt(int p, int depth, int prec) : p_(p), depth_(depth), prec_(prec) {
    require(depth >= 1, ErrorCode::invalid_argument, "cyclotomic depth must be >= 1");
    require(prec >= 1, ErrorCode::precision_exhausted, "cyclotomic precision must be >= 1");
    modulus_ = checked_modulus(p, prec);
    coeffs_.assign(static_cast<std::size_t>(ramification(p, depth)), 0);
  }

  CycElt(int p, int depth, int prec, const std::vector<std::int64_t>& coeffs) : CycElt(p, depth, prec) {
    require(coeffs.size() <= coeffs_.size(), ErrorCode::invalid_argument,
            "cyclotomic coefficient array longer than phi(p^v)");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs_[i] = reduce_signed(coeffs[i]);
  }

  static CycElt constant(int p, int depth, int prec, const mpz_class& c) {
    CycElt r(p, depth, prec);
    r.coeffs_[0] = r.reduce_mpz(c);
    return r;
  }

  /// zeta_{p^v} (the class of x).
  static CycElt zeta(int p, int depth, int prec) {
    CycElt r(p, depth, prec);
    if (r.coeffs_.size() > 1) {
      r.coeffs_[1] = 1;
    } else {
      // p = 2 never occurs; phi(p) >= 2 for odd p.
      fail(ErrorCode::invalid_argument, "degenerate cyclotomic ring");
    }
    return r;
  }

  /// zeta_{p^v}^k reduced modulo Phi.
  static CycElt zeta_power(int p, int depth, int prec, std::int64_t k) {
    CycElt r(p, depth, prec);
    const std::int64_t order = ipow(p, depth);
    std::vector<std::uint64_t> full(static_cast<std::size_t>(order), 0);
    full[static_cast<std::size_t>(((k % order) + order) % order)] = 1;
    r.coeffs_ = r.reduce_full(std::move(full));
    return r;
  }

  int p() const { return p_; }
  int depth() const { return depth_; }
  int prec() const { return prec_; }
  std::uint64_t modulus() const { return modulus_; }
  std::int64_t e() const { return static_cast<std::int64_t>(coeffs_.size()); }
  const std::vector<std::uint64_t>& coeffs() const { return coeffs_; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](std::uint64_t c) { return c == 0; });
  }

  bool operator==(const CycElt& o) const {
    return p_ == o.p_ && depth_ == o.depth_ && prec_ == o.prec_ && coeffs_ == o.coeffs_;
  }

  CycElt operator-() const {
    CycElt r = *this;
    for (auto& c : r.coeffs_) c = c ? modulus_ - c : 0;
    return r;
  }

  CycElt& operator+=(const CycElt& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      std::uint64_t s = coeffs_[i] + o.coeffs_[i];
      coeffs_[i] = s >= modulus_ ? s - modulus_ : s;
    }
    return *this;
  }

  CycElt& operator-=(const CycElt& o) { return *this += -o; }
  friend CycElt operator+(CycElt a, const CycElt& b) { return a += b; }
  friend CycElt operator-(CycElt a, const CycElt& b) { return a -= b; }

  friend CycElt operator*(const CycElt& a, const CycElt& b) {
    a.check_compatible(b);
    CycElt r(a.p_, a.depth_, a.prec_);
    const std::size_t order = static_cast<std::size_t>(ipow(a.p_, a.depth_));
    const std::size_t n = a.coeffs_.size();
    const double bound = static_cast<double>(a.modulus_) * static_cast<double>(a.modulus_) * static_cast<double>(2 * n);
    std::vector<std::uint64_t> full(order, 0);
    if (bound < 1.8e19) {
      std::vector<std::uint64_t> acc(2 * n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t ai = a.coeffs_[i];
        if (!ai) continue;
        const std::uint64_t* bj = b.coeffs_.data();
        std::uint64_t* dst = acc.data() + i;
        for (std::size_t j = 0; j < n; ++j) dst[j] += ai * bj[j];
      }
      for (std::size_t k = 0; k < acc.size(); ++k) {
        auto& slot = full[k >= order ? k - order : k];
        slot = (slot + acc[k] % a.modulus_) % a.modulus_;
      }
    } else {
      std::vector<unsigned __int128> acc(2 * n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t ai = a.coeffs_[i];
        if (!ai) continue;
        for (std::size_t j = 0; j < n; ++j) acc[i + j] += static_cast<unsigned __int128>(ai) * b.coeffs_[j];
      }
      for (std::size_t k = 0; k < acc.size(); ++k) {
        auto& slot = full[k >= order ? k - order : k];
        slot = static_cast<std::uint64_t>((slot + acc[k] % a.modulus_) % a.modulus_);
      }
    }
    r.coeffs_ = r.reduce_full(std::move(full));
    return r;
  }

  CycElt& operator*=(const CycElt& o) { return *this = *this * o; }

  CycElt pow(mpz_class k) const {
    require(k >= 0, ErrorCode::invalid_argument, "negative exponent");
    CycElt r = constant(p_, depth_, prec_, 1);
    CycElt base = *this;
    while (k > 0) {
      if (mpz_odd_p(k.get_mpz_t())) r *= base;
      k >>= 1;
      if (k > 0) base *= base;
    }
    return r;
  }

  CycElt pow(std::uint64_t k) const { return pow(mpz_class(static_cast<unsigned long>(k))); }

  CycElt scaled(const mpz_class& c) const {
    CycElt r = *this;
    const std::uint64_t m = reduce_mpz(c);
    for (auto& x : r.coeffs_) x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * m % modulus_);
    return r;
  }

  /// Same residues read modulo p^{prec'} (prec' <= prec drops digits;
  /// prec' > prec picks the canonical lift of each coefficient).
  CycElt with_precision(int prec) const {
    CycElt r(p_, depth_, prec);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = coeffs_[i] % r.modulus_;
    return r;
  }

  /// Tower inclusion x -> x^{p^{v'-v}}.
  CycElt embed(int target_depth) const {
    require(target_depth >= depth_, ErrorCode::depth_mismatch, "cannot embed into a shallower depth");
    CycElt r(p_, target_depth, prec_);
    const std::int64_t step = ipow(p_, target_depth - depth_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[static_cast<std::size_t>(i * step)] = coeffs_[i];
    return r;
  }

  /// The same element at the smallest depth containing it: coefficients
  /// supported on multiples of p come from the subfield one level down.
  CycElt descended() const {
    CycElt cur = *this;
    while (cur.depth_ > 1) {
      bool sub = true;
      for (std::size_t i = 0; i < cur.coeffs_.size() && sub; ++i)
        if (cur.coeffs_[i] && i % static_cast<std::size_t>(p_) != 0) sub = false;
      if (!sub) break;
      CycElt down(p_, cur.depth_ - 1, prec_);
      for (std::size_t i = 0; i < down.coeffs_.size(); ++i) down.coeffs_[i] = cur.coeffs_[i * static_cast<std::size_t>(p_)];
      cur = down;
    }
    return cur;
  }

  /// x -> x^u.
  CycElt galois(std::int64_t u) const {
    require(u % p_ != 0, ErrorCode::invalid_argument, "Galois parameter must be a unit");
    const std::int64_t order = ipow(p_, depth_);
    const std::int64_t uu = ((u % order) + order) % order;
    std::vector<std::uint64_t> full(static_cast<std::size_t>(order), 0);
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (!coeffs_[j]) continue;
      auto& slot = full[static_cast<std::size_t>((static_cast<std::int64_t>(j) * uu) % order)];
      slot = (slot + coeffs_[j]) % modulus_;
    }
    CycElt r(p_, depth_, prec_);
    r.coeffs_ = r.reduce_full(std::move(full));
    return r;
  }

  /// Coordinates in the basis pi^i, pi = x - 1 (Horner substitution x = pi + 1).
  std::vector<std::uint64_t> pi_basis() const {
    const std::size_t n = coeffs_.size();
    std::vector<std::uint64_t> r(n, 0);
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = n - 1; j > 0; --j) r[j] = (r[j] + r[j - 1]) % modulus_;
      r[0] = (r[0] + coeffs_[i]) % modulus_;
    }
    return r;
  }

  /// Normalized valuation. Terms b_i pi^i have pairwise distinct
  /// valuations v_p(b_i) + i/e, so the minimum is the valuation; it equals
  /// the largest k with pi^k | a, divided by e. Zero modulo p^N is
  /// reported as the lower bound N.
  Valuation valuation() const {
    const auto b = pi_basis();
    const std::int64_t e_ = e();
    std::int64_t best = -1;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!b[i]) continue;
      std::int64_t vp = 0;
      for (std::uint64_t c = b[i]; c % p_ == 0; c /= p_) ++vp;
      const std::int64_t k = vp * e_ + static_cast<std::int64_t>(i);
      if (best < 0 || k < best) best = k;
    }
    if (best < 0) return Valuation::at_least(Rational(prec_));
    return Valuation::exact(Rational(best, e_));
  }

  /// Largest j with p^j dividing every coefficient (prec when zero).
  int p_content() const {
    int best = prec_;
    for (auto c : coeffs_) {
      if (!c) continue;
      int vp = 0;
      for (; c % p_ == 0; c /= p_) ++vp;
      best = std::min(best, vp);
    }
    return best;
  }

  /// Exact division by p^k; the result lives at precision prec - k.
  CycElt divide_by_p_power(int k) const {
    require(k <= prec_ - 1 || (k == 0), ErrorCode::precision_exhausted, "division by p exhausts precision");
    require(p_content() >= k, ErrorCode::not_divisible, "element not divisible by p^" + std::to_string(k));
    const std::uint64_t pk = static_cast<std::uint64_t>(ipow(p_, k));
    CycElt r(p_, depth_, prec_ - k);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = (coeffs_[i] / pk) % r.modulus_;
    return r;
  }

  bool is_unit() const { return to_residue().coeffs()[0] != 0; }

  /// Inverse of a unit by Newton iteration from the residue-ring inverse.
  CycElt inverse() const {
    require(is_unit(), ErrorCode::not_divisible, "cyclotomic element is not a unit");
    CycElt y = from_residue(to_residue().inverse(), prec_);
    const CycElt two = constant(p_, depth_, prec_, 2);
    for (int known = 1; known < prec_; known *= 2) y = y * (two - *this * y);
    return y;
  }

  /// Exact division by an element of the form p^j * unit. Loses j digits.
  CycElt divide(const CycElt& den) const {
    check_compatible(den);
    const int j = den.p_content();
    require(j < prec_, ErrorCode::not_divisible, "division by zero at working precision");
    const CycElt unit = den.divide_by_p_power(j);
    require(unit.is_unit(), ErrorCode::unsupported,
            "cyclotomic division supports only divisors of the form p^j * unit");
    return divide_by_p_power(j) * unit.inverse();
  }

  /// Reduction mod p with x - 1 -> t.
  ResidueElt to_residue() const {
    std::vector<std::uint32_t> xs(coeffs_.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<std::uint32_t>(coeffs_[i] % p_);
    return ResidueElt::from_x_basis(p_, depth_, xs);
  }

  /// Coefficient lift {0..p-1} of a residue element, t -> x - 1.
  static CycElt from_residue(const ResidueElt& r, int prec) { return from_t_coeffs(r.p(), r.depth(), prec, r.coeffs()); }

  template <class Coeff>
  static CycElt from_t_coeffs(int p, int depth, int prec, const std::vector<Coeff>& ts) {
    CycElt out(p, depth, prec);
    const std::size_t n = out.coeffs_.size();
    const std::uint64_t M = out.modulus_;
    for (std::size_t i = n; i-- > 0;) {
      // out <- out * (x - 1) + t_i
      for (std::size_t j = n - 1; j > 0; --j) out.coeffs_[j] = (out.coeffs_[j - 1] + M - out.coeffs_[j]) % M;
      out.coeffs_[0] = (M - out.coeffs_[0] + static_cast<std::uint64_t>(ts[i]) % M) % M;
    }
    return out;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (!coeffs_[i]) continue;
      if (!s.empty()) s += " + ";
      s += std::to_string(coeffs_[i]);
      if (i) s += "*x^" + std::to_string(i);
    }
    return (s.empty() ? "0" : s) + " (mod " + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
  }

  static std::uint64_t checked_modulus(int p, int prec) {
    std::uint64_t m = 1;
    for (int i = 0; i < prec; ++i) {
      require(m < (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(p), ErrorCode::precision_exhausted,
              "p^N exceeds the 62-bit coefficient range");
      m *= static_cast<std::uint64_t>(p);
    }
    return m;
  }

 private:
  std::uint64_t reduce_signed(std::int64_t c) const {
    const auto m = static_cast<std::int64_t>(modulus_);
    return static_cast<std::uint64_t>(((c % m) + m) % m);
  }

  std::uint64_t reduce_mpz(const mpz_class& c) const {
    static_assert(sizeof(unsigned long) == 8, "mpz_fdiv_ui needs 64-bit unsigned long");
    return mpz_fdiv_ui(c.get_mpz_t(), modulus_);
  }

  void check_compatible(const CycElt& o) const {
    require(p_ == o.p_, ErrorCode::invalid_argument, "prime mismatch");
    require(depth_ == o.depth_, ErrorCode::depth_mismatch, "depth mismatch");
    require(prec_ == o.prec_, ErrorCode::modulus_mismatch, "modulus mismatch");
  }

  /// Reduces a length-p^v array modulo Phi_{p^v}: x^{phi+j} = -sum_{i<p-1} x^{j+i m}.
  std::vector<std::uint64_t> reduce_full(std::vector<std::uint64_t> full) const {
    const std::size_t m = static_cast<std::size_t>(ipow(p_, depth_ - 1));
    const std::size_t phi = m * (p_ - 1);
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint64_t top = full[phi + j] % modulus_;
      if (!top) continue;
      for (int i = 0; i < p_ - 1; ++i) {
        auto& c = full[j + i * m];
        c = (c % modulus_ + modulus_ - top) % modulus_;
      }
    }
    full.resize(phi);
    return full;
  }

  int p_ = 3;
  int depth_ = 1;
  int prec_ = 1;
  std::uint64_t modulus_ = 3;
  std::vector<std::uint64_t> coeffs_;
};

}  // namespace wittlab
