#pragma once

#include "wittlab/tilt.hpp"
#include "wittlab/witt.hpp"

#include <algorithm>
#include <climits>
#include <string>
#include <vector>

namespace wittlab {

namespace detail {

struct TiltFrame {
  int shift = 1;
  int window = INT_MAX;
};

inline TiltFrame common_frame(const std::vector<const WittVec<TiltElt>*>& vs) {
  TiltFrame f;
  for (const auto* v : vs)
    for (const auto& x : v->coords) {
      f.shift = std::max(f.shift, x.shift());
      f.window = std::min(f.window, x.window());
    }
  return f;
}

inline WittVec<ResidueElt> project(const WittVec<TiltElt>& a, const TiltFrame& f, int v) {
  return witt_map(a, [&](const TiltElt& x) { return x.aligned(f.shift, f.window).level(v); });
}

/// Reassembles tilt coordinates from per-level Witt vectors.
inline WittVec<TiltElt> assemble(int p, const TiltFrame& f, const std::vector<WittVec<ResidueElt>>& per_level) {
  WittVec<TiltElt> out{p, {}};
  const int n = per_level.front().len();
  for (int i = 0; i < n; ++i) {
    std::vector<ResidueElt> lv;
    for (const auto& w : per_level) lv.push_back(w[i]);
    out.coords.emplace_back(p, f.shift, std::move(lv));
  }
  return out;
}

/// Applies a Witt operation level by level through the projections
/// W(R) -> W(V/p) onto each level of the window.
template <class Op>
WittVec<TiltElt> levelwise(const std::vector<const WittVec<TiltElt>*>& args, Op op) {
  const TiltFrame f = common_frame(args);
  std::vector<WittVec<ResidueElt>> per_level;
  for (int v = 1; v <= f.window; ++v) {
    std::vector<WittVec<ResidueElt>> proj;
    for (const auto* a : args) proj.push_back(project(*a, f, v));
    per_level.push_back(op(proj));
  }
  return assemble(args.front()->p, f, per_level);
}

/// Largest level v of a frame whose coefficient array fits in `known`
/// t-digits of the deepest level (0 when none does).
inline int exact_window(int p, const TiltFrame& f, std::int64_t known) {
  int best = 0;
  for (int v = 1; v <= f.window; ++v)
    if (ramification(p, v + f.shift - 1) <= known) best = v;
  return best;
}

}  // namespace detail

/// Witt arithmetic over the tilt is computed on every level of the common
/// window with residue-ring Witt arithmetic.
template <>
struct WittArith<TiltElt> {
  static WittVec<TiltElt> add(const WittVec<TiltElt>& a, const WittVec<TiltElt>& b, const WittConfig& cfg) {
    return detail::levelwise({&a, &b}, [&](const auto& w) { return witt_add(w[0], w[1], cfg); });
  }
  static WittVec<TiltElt> mul(const WittVec<TiltElt>& a, const WittVec<TiltElt>& b, const WittConfig& cfg) {
    return detail::levelwise({&a, &b}, [&](const auto& w) { return witt_mul(w[0], w[1], cfg); });
  }
  static WittVec<TiltElt> frobenius(const WittVec<TiltElt>& a, const WittConfig& cfg) {
    return detail::levelwise({&a}, [&](const auto& w) { return wittlab::frobenius(w[0], cfg); });
  }
};

/// Exact division in W(R). The quotient is solved on the deepest common
/// level only, where the t-adic precision is tracked: a quotient
/// coordinate known modulo t^K determines exactly the levels whose
/// coefficient arrays fit in K digits (shallower levels are prefixes of
/// deeper ones). Later coordinates use the working value padded with
/// zeros; those digits only disturb t-orders >= K.
template <>
struct WittDivision<TiltElt> {
  static DivisionResult<TiltElt> divide(const WittVec<TiltElt>& d, const WittVec<TiltElt>& b, const WittConfig& cfg) {
    const int p = d.p;
    const int n = d.len();
    const detail::TiltFrame f = detail::common_frame({&d, &b});
    const auto dd = detail::project(d, f, f.window);
    const auto bb = detail::project(b, f, f.window);
    const std::int64_t e = dd[0].e();

    DivisionResult<TiltElt> res{{p, {}}, {}};
    WittVec<ResidueElt> work{p, {}};
    std::int64_t known_in = e;
    for (int i = 0; i < n; ++i) {
      WittVec<ResidueElt> trial = work;
      trial.coords.push_back(ResidueElt(p, dd[0].depth()));
      const auto prod = witt_mul(trial, restrict(bb, i + 1), cfg);
      const ResidueElt num = (dd[i] - prod[i]).truncated(known_in);
      const ResidueElt den = detail::iterate_pth_power(bb[0], p, i);
      const std::int64_t k = den.order();
      const std::string where = "coordinate " + std::to_string(i);
      require(k < known_in, ErrorCode::precision_exhausted, "tilt division exhausts the window at " + where);
      if (num.order() < k) fail(ErrorCode::not_divisible, "not divisible at " + where);
      const std::int64_t known = known_in - k;
      const ResidueElt q = num.divide(den).value.truncated(known);
      work.coords.push_back(q);

      const int w = detail::exact_window(p, f, known);
      require(w >= 1, ErrorCode::precision_exhausted, "tilt division leaves no exact level at " + where);
      std::vector<ResidueElt> lv{q};
      for (int v = f.window; v > w; --v) lv.front() = lv.front().frobenius_descend();
      for (int v = w; v > 1; --v) lv.insert(lv.begin(), lv.front().frobenius_descend());
      res.quotient.coords.emplace_back(p, f.shift, std::move(lv));
      res.loss.push_back(static_cast<int>(e - known));
      known_in = known;
    }
    return res;
  }
};

}  // namespace wittlab
