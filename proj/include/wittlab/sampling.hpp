#pragma once

#include "wittlab/cyclotomic.hpp"
#include "wittlab/residue.hpp"
#include "wittlab/tilt.hpp"
#include "wittlab/witt.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <vector>

// Random element generators shared by the self-test and the test suite.
namespace wittlab::sampling {

using Rng = std::mt19937_64;

inline ResidueElt random_residue(Rng& rng, int p, int depth) {
  const auto e = ramification(p, depth);
  std::vector<std::int64_t> c(static_cast<std::size_t>(e));
  std::uniform_int_distribution<std::int64_t> d(0, p - 1);
  for (auto& x : c) x = d(rng);
  return ResidueElt(p, depth, c);
}

inline CycElt random_cyc(Rng& rng, int p, int depth, int prec) {
  const auto e = ramification(p, depth);
  const auto m = static_cast<std::int64_t>(CycElt::checked_modulus(p, prec));
  std::vector<std::int64_t> c(static_cast<std::size_t>(e));
  std::uniform_int_distribution<std::int64_t> d(0, m - 1);
  for (auto& x : c) x = d(rng);
  return CycElt(p, depth, prec, c);
}

inline mpz_class random_int(Rng& rng, std::int64_t bound) {
  std::uniform_int_distribution<std::int64_t> d(-bound, bound);
  return mpz_class(static_cast<long>(d(rng)));
}

inline WittVec<mpz_class> random_witt_int(Rng& rng, int p, int n, std::int64_t bound = 50) {
  WittVec<mpz_class> a{p, {}};
  for (int i = 0; i < n; ++i) a.coords.push_back(random_int(rng, bound));
  return a;
}

inline WittVec<CycElt> random_witt_cyc(Rng& rng, int p, int n, int depth, int prec) {
  WittVec<CycElt> a{p, {}};
  for (int i = 0; i < n; ++i) a.coords.push_back(random_cyc(rng, p, depth, prec));
  return a;
}

inline WittVec<ResidueElt> random_witt_residue(Rng& rng, int p, int n, int depth) {
  WittVec<ResidueElt> a{p, {}};
  for (int i = 0; i < n; ++i) a.coords.push_back(random_residue(rng, p, depth));
  return a;
}

/// Random ring combination of epsilon shifts and tower constants, shift
/// at most `max_shift`, window m.
inline TiltElt random_tilt(Rng& rng, int p, int m, int max_shift = 2) {
  std::uniform_int_distribution<int> shift(0, max_shift), coeff(0, p - 1), expo(0, 2 * p);
  TiltElt acc = TiltElt::constant(p, 1, m, coeff(rng));
  for (int term = 0; term < 3; ++term) {
    const int k = shift(rng);
    TiltElt x = TiltElt::epsilon(p, k, m).pow(static_cast<std::uint64_t>(expo(rng)));
    if (coeff(rng) == 0) x = x * TiltElt::from_residue(random_residue(rng, p, 1), m);
    acc = acc + TiltElt::constant(p, 1, m, coeff(rng)) * x;
  }
  return acc;
}

inline WittVec<TiltElt> random_witt_tilt(Rng& rng, int p, int n, int m, int max_shift = 2) {
  WittVec<TiltElt> a{p, {}};
  for (int i = 0; i < n; ++i) a.coords.push_back(random_tilt(rng, p, m, max_shift));
  return a;
}

}  // namespace wittlab::sampling
