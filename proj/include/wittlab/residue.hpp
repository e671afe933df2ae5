#pragma once

#include "wittlab/precision.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace wittlab {

/// Element of O_{K_v}/p = F_p[t]/(t^{e_v}) with t = zeta_{p^v} - 1 and
/// e_v = p^{v-1}(p-1). Coefficients are little-endian in t.
class ResidueElt {
 public:
  ResidueElt() = default;

  ResidueElt(int p, int depth) : p_(p), depth_(depth) {
    require(depth >= 1, ErrorCode::invalid_argument, "residue depth must be >= 1");
    coeffs_.assign(static_cast<std::size_t>(ramification(p, depth)), 0);
  }

  ResidueElt(int p, int depth, std::vector<std::int64_t> coeffs) : ResidueElt(p, depth) {
    require(coeffs.size() <= coeffs_.size(), ErrorCode::invalid_argument,
            "residue coefficient array longer than e_v");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs_[i] = static_cast<std::uint32_t>(mod(coeffs[i]));
  }

  static ResidueElt constant(int p, int depth, std::int64_t c) {
    ResidueElt r(p, depth);
    r.coeffs_[0] = static_cast<std::uint32_t>(r.mod(c));
    return r;
  }

  /// t_v itself.
  static ResidueElt uniformizer(int p, int depth) { return monomial(p, depth, 1); }

  static ResidueElt monomial(int p, int depth, std::int64_t k, std::int64_t c = 1) {
    ResidueElt r(p, depth);
    if (k < r.e()) r.coeffs_[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(r.mod(c));
    return r;
  }

  int p() const { return p_; }
  int depth() const { return depth_; }
  std::int64_t e() const { return static_cast<std::int64_t>(coeffs_.size()); }
  const std::vector<std::uint32_t>& coeffs() const { return coeffs_; }
  std::uint32_t operator[](std::size_t i) const { return coeffs_[i]; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](std::uint32_t c) { return c == 0; });
  }

  /// t-adic order; e() when zero.
  std::int64_t order() const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) return static_cast<std::int64_t>(i);
    return e();
  }

  bool operator==(const ResidueElt& o) const {
    return p_ == o.p_ && depth_ == o.depth_ && coeffs_ == o.coeffs_;
  }

  ResidueElt operator-() const {
    ResidueElt r = *this;
    for (auto& c : r.coeffs_) c = c ? static_cast<std::uint32_t>(p_) - c : 0;
    return r;
  }

  ResidueElt& operator+=(const ResidueElt& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      std::uint32_t s = coeffs_[i] + o.coeffs_[i];
      coeffs_[i] = s >= static_cast<std::uint32_t>(p_) ? s - static_cast<std::uint32_t>(p_) : s;
    }
    return *this;
  }

  ResidueElt& operator-=(const ResidueElt& o) { return *this += -o; }

  friend ResidueElt operator+(ResidueElt a, const ResidueElt& b) { return a += b; }
  friend ResidueElt operator-(ResidueElt a, const ResidueElt& b) { return a -= b; }

  friend ResidueElt operator*(const ResidueElt& a, const ResidueElt& b) {
    a.check_compatible(b);
    const std::size_t n = a.coeffs_.size();
    std::vector<std::uint64_t> acc(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t ai = a.coeffs_[i];
      if (ai == 0) continue;
      for (std::size_t j = 0; i + j < n; ++j) acc[i + j] += ai * b.coeffs_[j];
    }
    ResidueElt r(a.p_, a.depth_);
    for (std::size_t i = 0; i < n; ++i) r.coeffs_[i] = static_cast<std::uint32_t>(acc[i] % a.p_);
    return r;
  }

  ResidueElt& operator*=(const ResidueElt& o) { return *this = *this * o; }

  /// a^p computed by the freshman's dream: coefficients spread to t^{ip}.
  ResidueElt pth_power() const {
    ResidueElt r(p_, depth_);
    const auto n = coeffs_.size();
    for (std::size_t i = 0; i * p_ < n; ++i) r.coeffs_[i * p_] = coeffs_[i];
    return r;
  }

  ResidueElt pow(std::uint64_t k) const {
    ResidueElt base = *this;
    while (k > 0 && k % p_ == 0) {
      base = base.pth_power();
      k /= p_;
    }
    ResidueElt r = constant(p_, depth_, 1);
    while (k > 0) {
      if (k & 1) r *= base;
      k >>= 1;
      if (k) base *= base;
    }
    return r;
  }

  /// Normalized valuation ord_t / e_v; +inf for the literal zero.
  Valuation valuation() const {
    if (is_zero()) return Valuation::infinite();
    return Valuation::exact(Rational(order(), e()));
  }

  /// Tower inclusion O_{K_v}/p -> O_{K_v'}/p, t_v -> t_{v'}^{p^{v'-v}}.
  ResidueElt embed(int target_depth) const {
    require(target_depth >= depth_, ErrorCode::depth_mismatch, "cannot embed into a shallower depth");
    ResidueElt r(p_, target_depth);
    const std::int64_t step = ipow(p_, target_depth - depth_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i]) r.coeffs_[static_cast<std::size_t>(i * step)] = coeffs_[i];
    return r;
  }

  /// a^p viewed at depth v-1. Well defined because a^p lies in the image
  /// of O_{K_{v-1}}/p: the coefficients are kept and truncated to e_{v-1}.
  ResidueElt frobenius_descend() const {
    require(depth_ >= 2, ErrorCode::depth_mismatch, "Frobenius descent needs depth >= 2");
    ResidueElt r(p_, depth_ - 1);
    std::copy_n(coeffs_.begin(), r.coeffs_.size(), r.coeffs_.begin());
    return r;
  }

  /// The p-th root at depth v+1 with the same coefficients (t_v -> t_{v+1});
  /// positions e_v .. e_{v+1}-1 are filled with zero.
  ResidueElt extend_by_zero() const {
    ResidueElt r(p_, depth_ + 1);
    std::copy(coeffs_.begin(), coeffs_.end(), r.coeffs_.begin());
    return r;
  }

  /// Coefficients truncated to t^{len}, i.e. zero above position len.
  ResidueElt truncated(std::int64_t len) const {
    ResidueElt r = *this;
    for (std::int64_t i = std::max<std::int64_t>(len, 0); i < e(); ++i) r.coeffs_[static_cast<std::size_t>(i)] = 0;
    return r;
  }

  /// Inverse of a unit (non-zero constant term).
  ResidueElt inverse() const {
    require(coeffs_[0] != 0, ErrorCode::not_divisible, "residue element is not a unit");
    const std::size_t n = coeffs_.size();
    ResidueElt r(p_, depth_);
    const std::uint64_t inv0 = inv_mod(coeffs_[0]);
    r.coeffs_[0] = static_cast<std::uint32_t>(inv0);
    for (std::size_t k = 1; k < n; ++k) {
      std::uint64_t s = 0;
      for (std::size_t j = 1; j <= k; ++j)
        if (coeffs_[j]) s += static_cast<std::uint64_t>(coeffs_[j]) * r.coeffs_[k - j];
      s %= p_;
      r.coeffs_[k] = static_cast<std::uint32_t>((p_ - s) % p_ * inv0 % p_);
    }
    return r;
  }

  struct Quotient;
  /// Partial division; see Quotient.
  Quotient divide(const ResidueElt& den) const;

  /// Coefficients in the basis x^j with x = 1 + t.
  std::vector<std::uint32_t> to_x_basis() const {
    // Horner in x: P(t) = P(x - 1).
    const std::size_t n = coeffs_.size();
    std::vector<std::uint32_t> r(n, 0);
    for (std::size_t i = n; i-- > 0;) {
      // r <- r * (x - 1) + c_i; degree never reaches n because deg P < n.
      for (std::size_t j = n - 1; j > 0; --j) r[j] = static_cast<std::uint32_t>((r[j - 1] + p_ - r[j]) % p_);
      r[0] = static_cast<std::uint32_t>((p_ - r[0] + coeffs_[i]) % p_);
    }
    return r;
  }

  static ResidueElt from_x_basis(int p, int depth, const std::vector<std::uint32_t>& xs) {
    ResidueElt r(p, depth);
    const std::size_t n = r.coeffs_.size();
    require(xs.size() == n, ErrorCode::invalid_argument, "x-basis length mismatch");
    for (std::size_t i = n; i-- > 0;) {
      // r <- r * (t + 1) + x_i
      for (std::size_t j = n - 1; j > 0; --j) r.coeffs_[j] = static_cast<std::uint32_t>((r.coeffs_[j] + r.coeffs_[j - 1]) % p);
      r.coeffs_[0] = static_cast<std::uint32_t>((r.coeffs_[0] + xs[i]) % p);
    }
    return r;
  }

  /// zeta_{p^v} -> zeta_{p^v}^u, u coprime to p.
  ResidueElt galois(std::int64_t u) const {
    require(u % p_ != 0, ErrorCode::invalid_argument, "Galois parameter must be a unit");
    const std::int64_t order = ipow(p_, depth_);
    const std::int64_t uu = ((u % order) + order) % order;
    const auto xs = to_x_basis();
    std::vector<std::uint32_t> full(static_cast<std::size_t>(order), 0);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (!xs[j]) continue;
      auto k = static_cast<std::size_t>((static_cast<std::int64_t>(j) * uu) % order);
      full[k] = static_cast<std::uint32_t>((full[k] + xs[j]) % p_);
    }
    return from_x_basis(p_, depth_, reduce_cyclotomic(full));
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (!coeffs_[i]) continue;
      if (!s.empty()) s += " + ";
      s += std::to_string(coeffs_[i]);
      if (i) s += "*t^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::int64_t mod(std::int64_t c) const { return ((c % p_) + p_) % p_; }

  std::uint64_t inv_mod(std::uint64_t a) const {
    std::uint64_t r = 1, b = a % p_;
    for (int k = p_ - 2; k > 0; k >>= 1) {
      if (k & 1) r = r * b % p_;
      b = b * b % p_;
    }
    return r;
  }

  void check_compatible(const ResidueElt& o) const {
    require(p_ == o.p_, ErrorCode::invalid_argument, "prime mismatch");
    require(depth_ == o.depth_, ErrorCode::depth_mismatch, "depth mismatch");
  }

  /// Reduces a length-p^v array in the x-basis modulo Phi_{p^v} (mod p).
  std::vector<std::uint32_t> reduce_cyclotomic(std::vector<std::uint32_t> full) const {
    const std::size_t m = static_cast<std::size_t>(ipow(p_, depth_ - 1));
    const std::size_t phi = m * (p_ - 1);
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint32_t top = full[phi + j];
      if (!top) continue;
      for (int i = 0; i < p_ - 1; ++i) {
        auto& c = full[j + i * m];
        c = static_cast<std::uint32_t>((c + p_ - top) % p_);
      }
    }
    full.resize(phi);
    return full;
  }

  int p_ = 3;
  int depth_ = 1;
  std::vector<std::uint32_t> coeffs_;
};

/// Result of dividing by an element of t-order k: the quotient is only
/// determined modulo t^{e-k}. `known` is that prefix length; coefficients
/// at and above it are zero in `value`.
struct ResidueElt::Quotient {
  ResidueElt value;
  std::int64_t known = 0;
};

inline ResidueElt::Quotient ResidueElt::divide(const ResidueElt& den) const {
  check_compatible(den);
  const std::int64_t k = den.order();
  require(k < e(), ErrorCode::not_divisible, "division by zero in residue ring");
  require(order() >= k, ErrorCode::not_divisible, "residue element not divisible");
  const std::int64_t known = e() - k;
  ResidueElt num(p_, depth_), unit(p_, depth_);
  for (std::int64_t i = 0; i < known; ++i) {
    num.coeffs_[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(i + k)];
    unit.coeffs_[static_cast<std::size_t>(i)] = den.coeffs_[static_cast<std::size_t>(i + k)];
  }
  return {(num * unit.inverse()).truncated(known), known};
}

}  // namespace wittlab
