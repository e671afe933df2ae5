#pragma once

#include "wittlab/cyclotomic.hpp"
#include "wittlab/precision.hpp"
#include "wittlab/residue.hpp"
#include "wittlab/ring_traits.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace wittlab {

/// Element of the tilt R = lim V/p (along Frobenius) on the level window
/// [1..m]. Level v is a residue element at tower depth v + shift - 1;
/// deeper levels refine shallower ones: level v is the p-th power of
/// level v + 1, which in coefficients means level v is the prefix of
/// level v + 1 of length e_{depth(v)}.
class TiltElt {
 public:
  TiltElt() = default;

  TiltElt(int p, int shift, std::vector<ResidueElt> levels) : p_(p), shift_(shift), levels_(std::move(levels)) {
    require(shift_ >= 1, ErrorCode::invalid_argument, "tilt shift must be >= 1");
    require(!levels_.empty(), ErrorCode::window, "empty tilt window");
    for (int v = 1; v <= window(); ++v) {
      require(level(v).p() == p_, ErrorCode::invalid_argument, "prime mismatch in tilt level");
      require(level(v).depth() == depth_of(v), ErrorCode::depth_mismatch, "tilt level at the wrong tower depth");
    }
  }

  /// The constant c in F_p.
  static TiltElt constant(int p, int shift, int window, std::int64_t c) {
    std::vector<ResidueElt> lv;
    for (int v = 1; v <= window; ++v) lv.push_back(ResidueElt::constant(p, v + shift - 1, c));
    return TiltElt(p, shift, std::move(lv));
  }

  /// Tower constant: level 1 is r, and each deeper level is the p-th root
  /// with the same coefficients (t_d -> t_{d+1}).
  static TiltElt from_residue(const ResidueElt& r, int window) {
    std::vector<ResidueElt> lv{r};
    for (int v = 2; v <= window; ++v) lv.push_back(lv.back().extend_by_zero());
    return TiltElt(r.p(), r.depth(), std::move(lv));
  }

  /// epsilon_k: level v is zeta_{p^{v+k-1}}. For k = 0 (epsilon itself)
  /// level v is zeta_{p^{v-1}} = (1 + t_v)^p. `max_depth` (if positive)
  /// enforces m + k <= D.
  static TiltElt epsilon(int p, int k, int window, int max_depth = 0) {
    require(k >= 0, ErrorCode::invalid_argument, "epsilon shift must be >= 0");
    require(window >= 1, ErrorCode::window, "tilt window must be >= 1");
    require(max_depth <= 0 || window + k <= max_depth, ErrorCode::window, "epsilon window exceeds the maximal depth");
    std::vector<ResidueElt> lv;
    for (int v = 1; v <= window; ++v) {
      if (k == 0) {
        lv.push_back(ResidueElt::constant(p, v, 1) + ResidueElt::monomial(p, v, p));
      } else {
        lv.push_back(ResidueElt::constant(p, v + k - 1, 1) + ResidueElt::uniformizer(p, v + k - 1));
      }
    }
    return TiltElt(p, std::max(k, 1), std::move(lv));
  }

  int p() const { return p_; }
  int shift() const { return shift_; }
  int window() const { return static_cast<int>(levels_.size()); }
  int depth_of(int v) const { return v + shift_ - 1; }
  int max_depth() const { return depth_of(window()); }
  const ResidueElt& level(int v) const {
    require(v >= 1 && v <= window(), ErrorCode::window, "tilt level " + std::to_string(v) + " outside the window");
    return levels_[static_cast<std::size_t>(v - 1)];
  }
  const std::vector<ResidueElt>& levels() const { return levels_; }

  /// level(v) == level(v + 1)^p for every v < m.
  bool is_compatible() const {
    for (int v = 1; v < window(); ++v)
      if (!(level(v + 1).frobenius_descend() == level(v))) return false;
    return true;
  }

  /// Same element re-expressed with a larger shift and a smaller window.
  TiltElt aligned(int shift, int window) const {
    require(shift >= shift_, ErrorCode::depth_mismatch, "cannot align to a smaller shift");
    require(window >= 1 && window <= this->window(), ErrorCode::window, "alignment window outside the valid window");
    std::vector<ResidueElt> lv;
    for (int v = 1; v <= window; ++v) lv.push_back(level(v).embed(v + shift - 1));
    return TiltElt(p_, shift, std::move(lv));
  }

  TiltElt restricted(int window) const { return aligned(shift_, window); }

  friend std::pair<TiltElt, TiltElt> align(const TiltElt& a, const TiltElt& b) {
    require(a.p_ == b.p_, ErrorCode::invalid_argument, "prime mismatch");
    const int s = std::max(a.shift_, b.shift_);
    const int m = std::min(a.window(), b.window());
    return {a.aligned(s, m), b.aligned(s, m)};
  }

  bool operator==(const TiltElt& o) const {
    const auto [a, b] = align(*this, o);
    return a.levels_ == b.levels_;
  }

  bool is_zero() const {
    return std::all_of(levels_.begin(), levels_.end(), [](const ResidueElt& x) { return x.is_zero(); });
  }

  TiltElt operator-() const {
    TiltElt r = *this;
    for (auto& x : r.levels_) x = -x;
    return r;
  }

  friend TiltElt operator+(const TiltElt& a, const TiltElt& b) {
    return combine(a, b, [](const ResidueElt& x, const ResidueElt& y) { return x + y; });
  }
  friend TiltElt operator-(const TiltElt& a, const TiltElt& b) {
    return combine(a, b, [](const ResidueElt& x, const ResidueElt& y) { return x - y; });
  }
  friend TiltElt operator*(const TiltElt& a, const TiltElt& b) {
    return combine(a, b, [](const ResidueElt& x, const ResidueElt& y) { return x * y; });
  }

  TiltElt pow(std::uint64_t k) const {
    TiltElt r = *this;
    for (auto& x : r.levels_) x = x.pow(k);
    return r;
  }

  /// v_R(x) = p^{v-1} v(x^{(v)}) at the deepest non-zero level; when every
  /// level vanishes only the bound p^{m-1} is known.
  Valuation valuation() const {
    for (int v = window(); v >= 1; --v) {
      const auto& x = level(v);
      if (x.is_zero()) continue;
      return Valuation::exact(Rational(ipow(p_, v - 1) * x.order(), x.e()));
    }
    return Valuation::at_least(Rational(ipow(p_, window() - 1)));
  }

  /// phi(x)^{(v)} = (x^{(v)})^p = x^{(v-1)}. Lossless: with shift >= 2 the
  /// levels move one step down the tower, otherwise every level is raised
  /// to the p-th power in place.
  TiltElt frobenius() const {
    std::vector<ResidueElt> lv;
    if (shift_ >= 2) {
      lv.push_back(level(1).frobenius_descend());
      for (int v = 2; v <= window(); ++v) lv.push_back(level(v - 1));
      return TiltElt(p_, shift_ - 1, std::move(lv));
    }
    for (const auto& x : levels_) lv.push_back(x.pth_power());
    return TiltElt(p_, shift_, std::move(lv));
  }

  /// phi^{-1}(x)^{(v)} = x^{(v+1)}. Exact, at the cost of one level. With
  /// `extend_deepest` the window is kept by taking the coefficientwise
  /// p-th root of the deepest level, which is exact for tower constants
  /// and epsilon shifts.
  TiltElt frobenius_inverse(bool extend_deepest = false) const {
    std::vector<ResidueElt> lv(levels_.begin() + 1, levels_.end());
    if (extend_deepest) lv.push_back(levels_.back().extend_by_zero());
    require(!lv.empty(), ErrorCode::window, "inverse Frobenius needs a window of at least 2 levels");
    return TiltElt(p_, shift_ + 1, std::move(lv));
  }

  TiltElt pth_root(bool extend_deepest = false) const { return frobenius_inverse(extend_deepest); }

  /// phi^k for any integer k.
  TiltElt frobenius_power(int k, bool extend_deepest = false) const {
    TiltElt r = *this;
    for (; k > 0; --k) r = r.frobenius();
    for (; k < 0; ++k) r = r.frobenius_inverse(extend_deepest);
    return r;
  }

  /// zeta_{p^w} -> zeta_{p^w}^u on every level.
  TiltElt galois(std::int64_t u) const {
    require(u % p_ != 0, ErrorCode::invalid_argument, "Galois parameter must be a unit mod p");
    TiltElt r = *this;
    for (auto& x : r.levels_) x = x.galois(u);
    return r;
  }

  std::string str() const {
    std::string s = "{shift " + std::to_string(shift_) + ":";
    for (int v = 1; v <= window(); ++v) s += " [" + level(v).str() + "]";
    return s + "}";
  }

 private:
  template <class Op>
  static TiltElt combine(const TiltElt& a, const TiltElt& b, Op op) {
    auto [x, y] = align(a, b);
    for (std::size_t i = 0; i < x.levels_.size(); ++i) x.levels_[i] = op(x.levels_[i], y.levels_[i]);
    return x;
  }

  int p_ = 3;
  int shift_ = 1;
  std::vector<ResidueElt> levels_;
};

/// The canonical lift of level v to characteristic 0 at precision N:
/// (arbitrary lift of x^{(v+N-1)})^{p^{N-1}}. With an rng the lift of
/// each coefficient is randomized, which must not change the result.
/// The value lives at tower depth depth(v + N - 1); it is returned at
/// the smallest depth containing it.
inline CycElt sharp(const TiltElt& a, int v, int N, std::mt19937_64* rng = nullptr) {
  require(N >= 1, ErrorCode::invalid_argument, "precision must be >= 1");
  require(v >= 1, ErrorCode::window, "level must be >= 1");
  require(v + N - 1 <= a.window(), ErrorCode::precision_exhausted,
          "sharp needs the window to reach level v + N - 1");
  const ResidueElt& x = a.level(v + N - 1);
  CycElt lift = CycElt::from_residue(x, N);
  if (rng && N > 1) {
    std::uniform_int_distribution<std::int64_t> d(0, static_cast<std::int64_t>(CycElt::checked_modulus(a.p(), N - 1)) - 1);
    std::vector<std::int64_t> noise(static_cast<std::size_t>(lift.e()));
    for (auto& c : noise) c = d(*rng) * a.p();
    lift = lift + CycElt(a.p(), lift.depth(), N, noise);
  }
  return lift.pow(static_cast<std::uint64_t>(ipow(a.p(), N - 1))).descended();
}

/// Compares two cyclotomic elements after embedding to a common depth.
inline bool same_value(const CycElt& a, const CycElt& b) {
  const int d = std::max(a.depth(), b.depth());
  return a.embed(d) == b.embed(d);
}

template <>
struct RingTraits<TiltElt> {
  static constexpr bool char_p = true;
  static constexpr const char* name = "tilt";

  static TiltElt from_int(const TiltElt& like, const mpz_class& c) {
    const long r = static_cast<long>(mpz_fdiv_ui(c.get_mpz_t(), static_cast<unsigned long>(like.p())));
    return TiltElt::constant(like.p(), like.shift(), like.window(), r);
  }
  static bool is_zero(const TiltElt& x) { return x.is_zero(); }
  static TiltElt pow(const TiltElt& x, const mpz_class& k) { return x.pow(k.get_ui()); }
  static TiltElt scale(const TiltElt& x, const mpz_class& c) { return from_int(x, c) * x; }
  /// Levelwise p-th power, keeping shift and window.
  static TiltElt pth_power(const TiltElt& x, int) { return x.pow(static_cast<std::uint64_t>(x.p())); }
  static int precision(const TiltElt&) { return INT_MAX; }
};

}  // namespace wittlab
