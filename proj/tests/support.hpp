#pragma once

#include "wittlab/sampling.hpp"
#include "wittlab/wittlab.hpp"

#include <gmpxx.h>

#include <initializer_list>

namespace wittlab::testing {

using namespace wittlab::sampling;

inline WittVec<mpz_class> witt_int(int p, std::initializer_list<long> cs) {
  WittVec<mpz_class> a{p, {}};
  for (long c : cs) a.coords.emplace_back(c);
  return a;
}

}  // namespace wittlab::testing
