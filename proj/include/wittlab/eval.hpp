#pragma once

// Request evaluation for the batch CLI. A request is
//   {"op": name, "params": {...}, "ctx": {"p","prec","depth","len","guard"}}
// and the response is either
//   {"ok": true, "op", "value", "effective_precision", "elapsed_ms"} or
//   {"ok": false, "op", "error": {"code", "message", ...}}.

#include "wittlab/json_io.hpp"
#include "wittlab/wittlab.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace wittlab::eval {

using json_io::Json;

/// An Error that carries structured details into the error object.
class DetailedError : public Error {
 public:
  DetailedError(ErrorCode code, const std::string& what, Json details)
      : Error(code, what), details_(std::move(details)) {}
  const Json& details() const { return details_; }

 private:
  Json details_;
};

struct OpOutput {
  Json value;
  std::optional<int> precision;  // nullopt: exact
};

using OpFn = std::function<OpOutput(const Json& params, const PrecisionCtx& ctx)>;

/// Exit status for an error code: 2 usage, 3 precision exhaustion,
/// 1 for mathematical falsifiers (the input is well formed but fails the
/// property being asked about).
inline int exit_code_for(const std::string& code) {
  static const std::map<std::string, int> table = {
      {"precision_exhausted", 3}, {"not_divisible", 1},       {"not_ghost_vector", 1},
      {"not_root_of_unity", 1},   {"no_teichmuller_form", 1}, {"internal", 1},
  };
  auto it = table.find(code);
  return it == table.end() ? 2 : it->second;
}

/// "tr-R" and "tr_R" name the same op.
inline std::string normalize_op(std::string op) {
  std::replace(op.begin(), op.end(), '-', '_');
  return op;
}

namespace detail {

using json_io::AnyWitt;
using json_io::expect;
using json_io::field;
using json_io::get_int;
using json_io::get_small_int;

template <class R>
std::optional<int> precision_of(const WittVec<R>& a) {
  if constexpr (std::is_same_v<R, CycElt>) return wittlab::detail::min_precision(a.coords);
  return std::nullopt;
}

inline std::optional<int> min_opt(std::optional<int> a, std::optional<int> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

inline WittConfig config(const Json& params, const PrecisionCtx& ctx) {
  WittConfig cfg;
  cfg.guard = ctx.G;
  cfg.max_len = ctx.L;
  const std::string b = params.value("backend", "automatic");
  if (b == "ghost_lift")
    cfg.backend = Backend::ghost_lift;
  else if (b == "universal")
    cfg.backend = Backend::universal;
  else
    expect(b == "automatic", "backend must be automatic, ghost_lift or universal");
  return cfg;
}

inline int positive_param(const Json& params, const char* key, std::optional<int> fallback = std::nullopt) {
  if (!params.contains(key)) {
    expect(fallback.has_value(), std::string("missing field \"") + key + "\"");
    return *fallback;
  }
  const int v = get_small_int(params[key], key);
  require(v >= 1, ErrorCode::invalid_argument, std::string(key) + " must be >= 1");
  return v;
}

inline AnyWitt witt_param(const Json& params, const char* key, const PrecisionCtx& ctx) {
  return json_io::decode_witt(field(params, key), ctx);
}

template <class R>
OpOutput witt_result(const WittVec<R>& a) {
  return {json_io::encode(a), precision_of(a)};
}

template <class F>
OpOutput unary(const Json& params, const PrecisionCtx& ctx, F f) {
  return std::visit([&](const auto& a) { return witt_result(f(a)); }, witt_param(params, "a", ctx));
}

template <class F>
OpOutput binary(const Json& params, const PrecisionCtx& ctx, F f) {
  const AnyWitt a = witt_param(params, "a", ctx), b = witt_param(params, "b", ctx);
  expect(a.index() == b.index(), "operands a and b lie over different rings");
  return std::visit(
      [&](const auto& x) {
        using W = std::decay_t<decltype(x)>;
        return f(x, std::get<W>(b));
      },
      a);
}

template <class R>
GhostVec<R> ghost_param(const Json& w, const PrecisionCtx& ctx) {
  GhostVec<R> g{ctx.p, {}};
  for (const auto& c : w) g.comps.push_back(json_io::decode_elt<R>(c, ctx));
  return g;
}

template <class R>
OpOutput from_ghost(const GhostVec<R>& g, bool localized) {
  if (!localized) return witt_result(ghost_inverse(g));
  const auto pre = ghost_inverse_localized(g);
  return {Json{{"preimage", json_io::encode(pre.value)}, {"scale_exponent", pre.k}}, precision_of(pre.value)};
}

inline OpOutput op_ghost(const Json& params, const PrecisionCtx& ctx) {
  return std::visit(
      [](const auto& a) -> OpOutput {
        const auto w = ghost(a);
        return {json_io::encode(w), precision_of(a)};
      },
      witt_param(params, "a", ctx));
}

inline OpOutput op_from_ghost(const Json& params, const PrecisionCtx& ctx) {
  const Json& w = field(params, "w");
  expect(w.is_array() && !w.empty(), "w must be a non-empty array of ghost components");
  require(static_cast<int>(w.size()) <= ctx.L, ErrorCode::length_bound, "ghost length exceeds L");
  const bool localized = params.value("localized", false);
  switch (json_io::ring_of(w[0])) {
    case json_io::RingKind::integer: return from_ghost(ghost_param<mpz_class>(w, ctx), localized);
    case json_io::RingKind::cyc: {
      auto g = ghost_param<CycElt>(w, ctx);
      int d = 1;
      for (const auto& x : g.comps) d = std::max(d, x.depth());
      for (auto& x : g.comps) x = x.embed(d);
      return from_ghost(g, localized);
    }
    default:
      json_io::schema_fail("from_ghost takes integer or cyclotomic ghost components");
  }
}

inline OpOutput op_teich(const Json& params, const PrecisionCtx& ctx) {
  const Json& x = field(params, "x");
  const int n = positive_param(params, "len");
  require(n <= ctx.L, ErrorCode::length_bound, "Witt length exceeds L");
  switch (json_io::ring_of(x)) {
    case json_io::RingKind::integer: return witt_result(teichmuller(json_io::decode_mpz(x), ctx.p, n));
    case json_io::RingKind::residue: return witt_result(teichmuller(json_io::decode_residue(x, ctx), ctx.p, n));
    case json_io::RingKind::cyc: return witt_result(teichmuller(json_io::decode_cyc(x, ctx), ctx.p, n));
    case json_io::RingKind::tilt: return witt_result(teichmuller(json_io::decode_tilt(x, ctx), ctx.p, n));
  }
  json_io::schema_fail("unreachable ring kind");
}

inline OpOutput op_divide(const Json& params, const PrecisionCtx& ctx) {
  const WittConfig cfg = config(params, ctx);
  return binary(params, ctx, [&](const auto& a, const auto& b) -> OpOutput {
    const auto r = witt_divide_exact(a, b, cfg);
    return {Json{{"quotient", json_io::encode(r.quotient)}, {"loss", r.loss}}, precision_of(r.quotient)};
  });
}

inline WittVec<TiltElt> tilt_witt_param(const Json& params, const char* key, const PrecisionCtx& ctx) {
  AnyWitt a = witt_param(params, key, ctx);
  expect(std::holds_alternative<WittVec<TiltElt>>(a), std::string(key) + " must be a Witt vector over the tilt");
  return std::get<WittVec<TiltElt>>(std::move(a));
}

inline WittVec<CycElt> cyc_witt_param(const Json& params, const char* key, const PrecisionCtx& ctx) {
  AnyWitt a = witt_param(params, key, ctx);
  expect(std::holds_alternative<WittVec<CycElt>>(a), std::string(key) + " must be a Witt vector over a cyclotomic ring");
  return std::get<WittVec<CycElt>>(std::move(a));
}

inline OpOutput op_theta(const Json& params, const PrecisionCtx& ctx) {
  const int n = positive_param(params, "n");
  const ThetaResult r = theta_n(tilt_witt_param(params, "a", ctx), n, ctx.N);
  require(r.value.coords.empty() || r.value[0].depth() <= ctx.D, ErrorCode::precision_exhausted,
          "theta value needs depth beyond D");
  return {json_io::encode(r.value), r.effective_precision};
}

inline OpOutput op_theta_prime(const Json& params, const PrecisionCtx& ctx) {
  const int n = positive_param(params, "n");
  require(n <= ctx.L, ErrorCode::length_bound, "Witt length exceeds L");
  const CycElt x = json_io::decode_cyc(field(params, "x"), ctx);
  return witt_result(theta_prime(x, n));
}

inline OpOutput op_xi(const Json& params, const PrecisionCtx& ctx) {
  const int n = positive_param(params, "n");
  const int m = positive_param(params, "len");
  const int window = positive_param(params, "window", ctx.N);
  require(m <= ctx.L, ErrorCode::length_bound, "Witt length exceeds L");
  require(TiltElt::epsilon(ctx.p, n, window).max_depth() <= ctx.D, ErrorCode::precision_exhausted,
          "epsilon_n on this window needs depth beyond D");
  const XiResult r = xi_generator(ctx.p, n, m, window);
  return {Json{{"xi", json_io::encode(r.value)}, {"loss", r.loss}}, std::nullopt};
}

inline OpOutput op_roots(const Json& params, const PrecisionCtx& ctx) {
  const WittVec<CycElt> a = cyc_witt_param(params, "a", ctx);
  const int m = get_small_int(field(params, "m"), "m");
  const RootCheck r = check_root_of_unity(a, m);
  if (!r.ok) {
    const std::string what = r.code == ErrorCode::not_root_of_unity ? "coordinate " + std::to_string(r.coordinate) +
                                                                          " breaks a^{p^m} = 1"
                                                                    : "coordinate " + std::to_string(r.coordinate) +
                                                                          " is non-zero, so a is not [zeta]_n";
    throw DetailedError(r.code, what, Json{{"coordinate", r.coordinate}});
  }
  return {Json{{"zeta", json_io::encode(r.zeta)}}, r.zeta.prec()};
}

inline OpOutput op_tilt_valuation(const Json& params, const PrecisionCtx& ctx) {
  return {json_io::decode_tilt(field(params, "x"), ctx).valuation().str(), std::nullopt};
}

inline OpOutput op_sharp(const Json& params, const PrecisionCtx& ctx) {
  const TiltElt x = json_io::decode_tilt(field(params, "x"), ctx);
  const int v = positive_param(params, "level", 1);
  const CycElt s = sharp(x, v, ctx.N);
  return {json_io::encode(s), s.prec()};
}

inline OpOutput tr_result(const TRClass& c) { return {json_io::encode(c), c.precision()}; }

inline OpOutput op_tr_beta(const Json& params, const PrecisionCtx& ctx) {
  return tr_result(TRModel(ctx).beta(positive_param(params, "n")));
}

inline OpOutput op_tr_alpha(const Json& params, const PrecisionCtx& ctx) {
  const int m = params.contains("m") ? get_small_int(params["m"], "m") : 1;
  return tr_result(TRModel(ctx).alpha(positive_param(params, "n"), m));
}

inline OpOutput op_tr_R(const Json& params, const PrecisionCtx& ctx) {
  const TRModel model(ctx);
  return tr_result(model.restriction(json_io::decode_tr(field(params, "x"), model, ctx)));
}

inline OpOutput op_tr_F(const Json& params, const PrecisionCtx& ctx) {
  const TRModel model(ctx);
  return tr_result(model.frobenius(json_io::decode_tr(field(params, "x"), model, ctx)));
}

inline OpOutput op_tr_galois(const Json& params, const PrecisionCtx& ctx) {
  const TRModel model(ctx);
  const std::int64_t u = get_int(field(params, "u"), "u");
  return tr_result(model.galois(json_io::decode_tr(field(params, "x"), model, ctx), u));
}

inline OpOutput op_tc_check(const Json& params, const PrecisionCtx& ctx) {
  const int q = get_small_int(field(params, "q"), "q");
  const Json& c = field(params, "c");
  expect(c.is_array() && !c.empty(), "c must be a non-empty array of prime-field coordinates");
  require(static_cast<int>(c.size()) <= ctx.L, ErrorCode::length_bound, "Witt length exceeds L");
  std::vector<std::int64_t> cs;
  for (const auto& x : c) cs.push_back(get_int(x, "coordinate of c"));
  const int window = positive_param(params, "window", ctx.N);
  require(TiltElt::epsilon(ctx.p, 2, window).max_depth() <= ctx.D, ErrorCode::precision_exhausted,
          "epsilon_2 on this window needs depth beyond D");
  return {tc_kernel_check(q, prime_field_witt(ctx.p, cs, window), window), std::nullopt};
}

}  // namespace detail

/// The operation table.
inline const std::map<std::string, OpFn>& registry() {
  using namespace detail;
  static const std::map<std::string, OpFn> ops = {
      {"ghost", op_ghost},
      {"from_ghost", op_from_ghost},
      {"add",
       [](const Json& ps, const PrecisionCtx& ctx) {
         const WittConfig cfg = config(ps, ctx);
         return binary(ps, ctx, [&](const auto& a, const auto& b) { return witt_result(witt_add(a, b, cfg)); });
       }},
      {"mul",
       [](const Json& ps, const PrecisionCtx& ctx) {
         const WittConfig cfg = config(ps, ctx);
         return binary(ps, ctx, [&](const auto& a, const auto& b) { return witt_result(witt_mul(a, b, cfg)); });
       }},
      {"teich", op_teich},
      {"F",
       [](const Json& ps, const PrecisionCtx& ctx) {
         const WittConfig cfg = config(ps, ctx);
         return unary(ps, ctx, [&](const auto& a) { return frobenius(a, cfg); });
       }},
      {"V",
       [](const Json& ps, const PrecisionCtx& ctx) {
         const WittConfig cfg = config(ps, ctx);
         return unary(ps, ctx, [&](const auto& a) {
           require(a.len() < ctx.L, ErrorCode::length_bound, "V raises the Witt length beyond L");
           return verschiebung(a, cfg);
         });
       }},
      {"R", [](const Json& ps, const PrecisionCtx& ctx) { return unary(ps, ctx, [](const auto& a) { return restrict(a); }); }},
      {"divide", op_divide},
      {"tilt_valuation", op_tilt_valuation},
      {"sharp", op_sharp},
      {"theta", op_theta},
      {"theta_prime", op_theta_prime},
      {"xi", op_xi},
      {"roots", op_roots},
      {"tr_alpha", op_tr_alpha},
      {"tr_beta", op_tr_beta},
      {"tr_R", op_tr_R},
      {"tr_F", op_tr_F},
      {"tr_galois", op_tr_galois},
      {"tc_check", op_tc_check},
  };
  return ops;
}

/// Applies {"p","prec","depth","len","guard"} overrides to a context.
inline PrecisionCtx apply_overrides(PrecisionCtx ctx, const Json& o) {
  json_io::expect(o.is_object(), "ctx must be an object");
  static const std::map<std::string, int PrecisionCtx::*> keys = {
      {"p", &PrecisionCtx::p}, {"prec", &PrecisionCtx::N}, {"depth", &PrecisionCtx::D},
      {"len", &PrecisionCtx::L}, {"guard", &PrecisionCtx::G},
  };
  for (const auto& [k, v] : o.items()) {
    auto it = keys.find(k);
    json_io::expect(it != keys.end(), "unknown ctx key \"" + k + "\"");
    ctx.*(it->second) = json_io::get_small_int(v, k);
  }
  ctx.validate();
  return ctx;
}

struct Response {
  Json body;
  int exit_code = 0;
};

inline Response error_response(const std::string& op, const std::string& code, const std::string& message,
                               const Json& details = Json::object()) {
  Json err{{"code", code}, {"message", message}};
  for (const auto& [k, v] : details.items()) err[k] = v;
  Json body{{"ok", false}, {"error", err}};
  if (!op.empty()) body["op"] = op;
  return {body, exit_code_for(code)};
}

/// Evaluates one parsed request. Never throws; every failure becomes a
/// structured error object.
inline Response evaluate(const Json& request, const PrecisionCtx& base) {
  std::string op;
  try {
    json_io::expect(request.is_object(), "request must be a JSON object");
    const Json& name = json_io::field(request, "op");
    json_io::expect(name.is_string(), "op must be a string");
    op = normalize_op(name.get<std::string>());
    const auto& ops = registry();
    auto it = ops.find(op);
    if (it == ops.end()) return error_response(op, "unknown_op", "no operation named \"" + op + "\"");
    for (const auto& [k, v] : request.items())
      json_io::expect(k == "op" || k == "params" || k == "ctx", "unknown request field \"" + k + "\"");
    const PrecisionCtx ctx = request.contains("ctx") ? apply_overrides(base, request["ctx"]) : base;
    const Json params = request.value("params", Json::object());
    json_io::expect(params.is_object(), "params must be an object");

    const auto t0 = std::chrono::steady_clock::now();
    const OpOutput out = it->second(params, ctx);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    Json body{{"ok", true}, {"op", op}, {"value", out.value}};
    body["effective_precision"] = out.precision ? Json(*out.precision) : Json("exact");
    body["elapsed_ms"] = ms;
    return {body, 0};
  } catch (const DetailedError& e) {
    return error_response(op, to_string(e.code()), e.what(), e.details());
  } catch (const Error& e) {
    return error_response(op, to_string(e.code()), e.what());
  } catch (const json_io::SchemaError& e) {
    return error_response(op, "schema", e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_response(op, "schema", e.what());
  } catch (const std::exception& e) {
    return error_response(op, "internal", e.what());
  }
}

/// Parses and evaluates one request line.
inline Response evaluate_text(const std::string& text, const PrecisionCtx& base) {
  Json request;
  try {
    request = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    return error_response("", "parse_error", e.what());
  }
  return evaluate(request, base);
}

}  // namespace wittlab::eval
