#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace wittlab {

/// Machine-readable error categories. The CLI maps these onto exit codes
/// and the "code" field of structured error objects.
enum class ErrorCode {
  invalid_argument,
  depth_mismatch,
  modulus_mismatch,
  length_bound,
  precision_exhausted,
  not_ghost_vector,
  not_divisible,
  window,
  not_root_of_unity,
  no_teichmuller_form,
  unsupported,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::depth_mismatch: return "depth_mismatch";
    case ErrorCode::modulus_mismatch: return "modulus_mismatch";
    case ErrorCode::length_bound: return "length_bound";
    case ErrorCode::precision_exhausted: return "precision_exhausted";
    case ErrorCode::not_ghost_vector: return "not_ghost_vector";
    case ErrorCode::not_divisible: return "not_divisible";
    case ErrorCode::window: return "window";
    case ErrorCode::not_root_of_unity: return "not_root_of_unity";
    case ErrorCode::no_teichmuller_form: return "no_teichmuller_form";
    case ErrorCode::unsupported: return "unsupported";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

using Rational = boost::rational<std::int64_t>;

/// A normalized valuation (v(p) = 1). Three states: an exact rational,
/// +infinity (only for the literal zero of a characteristic-p residue
/// ring), or a lower bound when the element vanishes at the working
/// truncation.
struct Valuation {
  enum class Kind { exact, infinite, lower_bound };
  Kind kind = Kind::exact;
  Rational value{0};

  static Valuation exact(Rational v) { return {Kind::exact, v}; }
  static Valuation infinite() { return {Kind::infinite, Rational{0}}; }
  static Valuation at_least(Rational v) { return {Kind::lower_bound, v}; }

  bool is_exact() const { return kind == Kind::exact; }
  bool operator==(const Valuation&) const = default;

  std::string str() const {
    if (kind == Kind::infinite) return "inf";
    std::string s = std::to_string(value.numerator());
    if (value.denominator() != 1) s += "/" + std::to_string(value.denominator());
    return kind == Kind::lower_bound ? ">=" + s : s;
  }
};

inline std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.str(); }

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Checked integer power; throws when the result leaves int64.
inline std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    require(r <= std::numeric_limits<std::int64_t>::max() / base, ErrorCode::precision_exhausted,
            "integer power overflows 64 bits");
    r *= base;
  }
  return r;
}

/// Ramification index of Q_p(zeta_{p^v}) over Q_p, i.e. phi(p^v).
inline std::int64_t ramification(std::int64_t p, int depth) { return ipow(p, depth - 1) * (p - 1); }

/// Global truncation parameters.
struct PrecisionCtx {
  int p = 3;      // odd prime
  int N = 6;      // p-adic digits
  int D = 6;      // max cyclotomic depth
  int L = 4;      // max Witt length
  int G = 4;      // guard digits for ghost inversion

  void validate() const {
    require(p >= 3 && is_prime(p), ErrorCode::invalid_argument, "p must be an odd prime");
    require(N >= 1, ErrorCode::invalid_argument, "N must be >= 1");
    require(D >= 1, ErrorCode::invalid_argument, "D must be >= 1");
    require(L >= 1, ErrorCode::invalid_argument, "L must be >= 1");
    require(G >= L, ErrorCode::invalid_argument, "guard digits G must be >= L");
  }
};

}  // namespace wittlab
