#pragma once

// JSON encodings of ring elements, Witt vectors, tilt elements and TR
// classes. Decoders validate against a PrecisionCtx: the prime must match,
// cyclotomic depth is bounded by D and Witt length by L.

#include "wittlab/precision.hpp"
#include "wittlab/tr_model.hpp"
#include "wittlab/wittlab.hpp"

#include <gmpxx.h>
#include <json.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace wittlab::json_io {

using Json = nlohmann::json;

/// Raised on malformed input; the CLI reports it under code "schema".
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void schema_fail(const std::string& what) { throw SchemaError(what); }

inline void expect(bool cond, const std::string& what) {
  if (!cond) schema_fail(what);
}

inline const Json& field(const Json& j, const char* key) {
  expect(j.is_object(), std::string("expected an object with field \"") + key + "\"");
  auto it = j.find(key);
  expect(it != j.end(), std::string("missing field \"") + key + "\"");
  return *it;
}

inline std::int64_t get_int(const Json& j, const std::string& what) {
  expect(j.is_number_integer(), what + " must be an integer");
  return j.get<std::int64_t>();
}

inline int get_small_int(const Json& j, const std::string& what) {
  const std::int64_t v = get_int(j, what);
  expect(v >= std::numeric_limits<int>::min() && v <= std::numeric_limits<int>::max(), what + " is out of range");
  return static_cast<int>(v);
}

// Integers: JSON numbers, or decimal strings once they leave int64.

inline Json encode(const mpz_class& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

inline mpz_class decode_mpz(const Json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<std::int64_t>()));
  expect(j.is_string(), "integer must be a JSON integer or a decimal string");
  mpz_class x;
  expect(x.set_str(j.get<std::string>(), 10) == 0, "malformed decimal integer \"" + j.get<std::string>() + "\"");
  return x;
}

inline Json encode(const ResidueElt& x) {
  return {{"ring", "residue"}, {"p", x.p()}, {"depth", x.depth()}, {"coeffs", x.coeffs()}};
}

inline Json encode(const CycElt& x) {
  // Coefficients below p^prec < 2^62 always fit a JSON integer.
  return {{"ring", "cyc"}, {"p", x.p()}, {"depth", x.depth()}, {"prec", x.prec()}, {"coeffs", x.coeffs()}};
}

inline void check_prime_depth(const Json& j, const PrecisionCtx& ctx, int& depth) {
  expect(get_int(field(j, "p"), "p") == ctx.p, "element prime differs from the context prime " + std::to_string(ctx.p));
  depth = get_small_int(field(j, "depth"), "depth");
  require(depth >= 1, ErrorCode::invalid_argument, "depth must be >= 1");
  require(depth <= ctx.D, ErrorCode::precision_exhausted,
          "depth " + std::to_string(depth) + " exceeds D = " + std::to_string(ctx.D));
}

inline ResidueElt decode_residue(const Json& j, const PrecisionCtx& ctx) {
  expect(j.is_object() && j.value("ring", "") == "residue", "expected a residue element");
  int depth = 0;
  check_prime_depth(j, ctx, depth);
  const Json& cs = field(j, "coeffs");
  expect(cs.is_array(), "coeffs must be an array");
  std::vector<std::int64_t> v;
  for (const auto& c : cs) v.push_back(mpz_class(decode_mpz(c) % ctx.p).get_si());
  return ResidueElt(ctx.p, depth, std::move(v));
}

inline CycElt decode_cyc(const Json& j, const PrecisionCtx& ctx) {
  expect(j.is_object() && j.value("ring", "") == "cyc", "expected a cyclotomic element");
  int depth = 0;
  check_prime_depth(j, ctx, depth);
  const int prec = get_small_int(field(j, "prec"), "prec");
  require(prec >= 1, ErrorCode::precision_exhausted, "prec must be >= 1");
  const Json& cs = field(j, "coeffs");
  expect(cs.is_array(), "coeffs must be an array");
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(ctx.p), static_cast<unsigned long>(prec));
  std::vector<std::int64_t> v;
  for (const auto& c : cs) {
    mpz_class r = decode_mpz(c) % mod;
    if (r < 0) r += mod;
    require(r.fits_slong_p(), ErrorCode::precision_exhausted, "p^prec exceeds the word modulus");
    v.push_back(r.get_si());
  }
  return CycElt(ctx.p, depth, prec, v);
}

// Tilt elements: the explicit form {"tilt":{"window":[1,m],"shift":s,
// "coords":[...]}} lists level 1..m, level v at depth v + s - 1 (s defaults
// to 1). Expression forms build elements from epsilon and constants.

inline Json encode(const TiltElt& x) {
  Json coords = Json::array();
  for (const auto& r : x.levels()) coords.push_back(encode(r));
  Json t{{"window", {1, x.window()}}, {"coords", coords}};
  if (x.shift() != 1) t["shift"] = x.shift();
  return {{"tilt", t}};
}

inline TiltElt decode_tilt(const Json& j, const PrecisionCtx& ctx);

namespace detail {

inline int tilt_window(const Json& j, const PrecisionCtx& ctx) {
  const int m = j.contains("window") ? get_small_int(j["window"], "window") : ctx.N;
  require(m >= 1, ErrorCode::window, "tilt window must be >= 1");
  return m;
}

inline std::pair<TiltElt, TiltElt> tilt_pair(const Json& j, const PrecisionCtx& ctx) {
  expect(j.is_array() && j.size() == 2, "binary tilt expression needs two operands");
  return {decode_tilt(j[0], ctx), decode_tilt(j[1], ctx)};
}

}  // namespace detail

inline TiltElt decode_tilt(const Json& j, const PrecisionCtx& ctx) {
  expect(j.is_object(), "tilt element must be an object");
  if (j.contains("tilt")) {
    const Json& t = j["tilt"];
    const Json& w = field(t, "window");
    expect(w.is_array() && w.size() == 2 && get_int(w[0], "window start") == 1, "tilt window must be [1, m]");
    const int m = get_small_int(w[1], "window end");
    const int shift = t.contains("shift") ? get_small_int(t["shift"], "shift") : 1;
    const Json& cs = field(t, "coords");
    expect(cs.is_array() && static_cast<int>(cs.size()) == m, "tilt coords must list levels 1..m");
    std::vector<ResidueElt> levels;
    for (const auto& c : cs) levels.push_back(decode_residue(c, ctx));
    TiltElt x(ctx.p, shift, std::move(levels));
    require(x.is_compatible(), ErrorCode::invalid_argument, "tilt levels are not Frobenius-compatible");
    return x;
  }
  if (j.contains("epsilon")) {
    const int k = get_small_int(j["epsilon"], "epsilon");
    require(k >= 0, ErrorCode::invalid_argument, "epsilon index must be >= 0");
    const TiltElt e = TiltElt::epsilon(ctx.p, k, detail::tilt_window(j, ctx));
    require(e.max_depth() <= ctx.D, ErrorCode::precision_exhausted,
            "epsilon_" + std::to_string(k) + " needs depth " + std::to_string(e.max_depth()) + " > D");
    return e;
  }
  if (j.contains("const")) {
    const mpz_class c = decode_mpz(j["const"]) % ctx.p;
    return TiltElt::constant(ctx.p, 1, detail::tilt_window(j, ctx), c.get_si());
  }
  if (j.contains("add")) {
    auto [a, b] = detail::tilt_pair(j["add"], ctx);
    return a + b;
  }
  if (j.contains("sub")) {
    auto [a, b] = detail::tilt_pair(j["sub"], ctx);
    return a - b;
  }
  if (j.contains("mul")) {
    auto [a, b] = detail::tilt_pair(j["mul"], ctx);
    return a * b;
  }
  if (j.contains("pow")) {
    const Json& a = j["pow"];
    expect(a.is_array() && a.size() == 2, "pow needs [base, exponent]");
    const std::int64_t k = get_int(a[1], "exponent");
    require(k >= 0, ErrorCode::invalid_argument, "exponent must be >= 0");
    return decode_tilt(a[0], ctx).pow(static_cast<std::uint64_t>(k));
  }
  schema_fail("unrecognised tilt element; expected tilt, epsilon, const, add, sub, mul or pow");
}

// Witt vectors: {"witt":{"len":n,"coords":[...]}}.

template <class R>
Json encode(const WittVec<R>& a) {
  Json coords = Json::array();
  for (const auto& x : a.coords) coords.push_back(encode(x));
  return {{"witt", {{"len", a.len()}, {"coords", coords}}}};
}

template <class R>
Json encode(const GhostVec<R>& w) {
  Json out = Json::array();
  for (const auto& x : w.comps) out.push_back(encode(x));
  return out;
}

using AnyWitt = std::variant<WittVec<mpz_class>, WittVec<ResidueElt>, WittVec<CycElt>, WittVec<TiltElt>>;

enum class RingKind { integer, residue, cyc, tilt };

inline RingKind ring_of(const Json& x) {
  if (x.is_number_integer() || x.is_string()) return RingKind::integer;
  expect(x.is_object(), "ring element must be a number, a string or an object");
  if (x.contains("ring")) {
    const std::string r = x["ring"].is_string() ? x["ring"].get<std::string>() : "";
    if (r == "residue") return RingKind::residue;
    if (r == "cyc") return RingKind::cyc;
    schema_fail("unknown ring \"" + r + "\"");
  }
  return RingKind::tilt;
}

template <class R>
R decode_elt(const Json& j, const PrecisionCtx& ctx) {
  if constexpr (std::is_same_v<R, mpz_class>) {
    return decode_mpz(j);
  } else if constexpr (std::is_same_v<R, ResidueElt>) {
    return decode_residue(j, ctx);
  } else if constexpr (std::is_same_v<R, CycElt>) {
    return decode_cyc(j, ctx);
  } else {
    return decode_tilt(j, ctx);
  }
}

inline const Json& witt_coords(const Json& j, const PrecisionCtx& ctx) {
  const Json& w = field(j, "witt");
  const Json& cs = field(w, "coords");
  expect(cs.is_array() && !cs.empty(), "witt coords must be a non-empty array");
  if (w.contains("len"))
    expect(get_int(w["len"], "len") == static_cast<std::int64_t>(cs.size()), "witt len differs from the coords count");
  require(static_cast<int>(cs.size()) <= ctx.L, ErrorCode::length_bound,
          "Witt length " + std::to_string(cs.size()) + " exceeds L = " + std::to_string(ctx.L));
  return cs;
}

template <class R>
WittVec<R> decode_witt_as(const Json& j, const PrecisionCtx& ctx) {
  WittVec<R> a{ctx.p, {}};
  for (const auto& c : witt_coords(j, ctx)) a.coords.push_back(decode_elt<R>(c, ctx));
  if constexpr (std::is_same_v<R, CycElt>) {
    int d = 1;
    for (const auto& x : a.coords) d = std::max(d, x.depth());
    for (auto& x : a.coords) x = x.embed(d);
  }
  return a;
}

/// The ring is read off the first coordinate.
inline AnyWitt decode_witt(const Json& j, const PrecisionCtx& ctx) {
  switch (ring_of(witt_coords(j, ctx)[0])) {
    case RingKind::integer: return decode_witt_as<mpz_class>(j, ctx);
    case RingKind::residue: return decode_witt_as<ResidueElt>(j, ctx);
    case RingKind::cyc: return decode_witt_as<CycElt>(j, ctx);
    case RingKind::tilt: return decode_witt_as<TiltElt>(j, ctx);
  }
  schema_fail("unreachable ring kind");
}

inline Json encode(const TRClass& c) { return {{"tr", {{"level", c.level}, {"deg", c.deg}, {"coeff", encode(c.coeff)}}}}; }

inline TRClass decode_tr(const Json& j, const TRModel& model, const PrecisionCtx& ctx) {
  const Json& t = field(j, "tr");
  const int level = get_small_int(field(t, "level"), "level");
  const int deg = get_small_int(field(t, "deg"), "deg");
  return model.make(level, deg, decode_witt_as<CycElt>(field(t, "coeff"), ctx));
}

inline std::string encode(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

}  // namespace wittlab::json_io
