#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "abt/types.hpp"

namespace abt::testing {

// Deterministic uniform double in [lo, hi); avoids distribution objects whose
// output may differ across standard library implementations.
inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline Complex random_unit_phase(std::mt19937_64& gen) {
  const double t = uniform(gen, 0.0, 2.0 * M_PI);
  return {std::cos(t), std::sin(t)};
}

// Poisson tail mass at and beyond the first discarded Fock level, accumulated
// in long double via the term recurrence; independent of the library code.
inline long double poisson_tail_oracle(double mean, int cutoff, int horizon = 4096) {
  if (mean <= 0.0) return 0.0L;
  const long double m = static_cast<long double>(mean);
  long double term = std::exp(-m);
  for (int n = 1; n <= cutoff; ++n) term *= m / n;
  long double tail = 0.0L;
  for (int n = cutoff; n < cutoff + horizon; ++n) {
    tail += term;
    term *= m / (n + 1);
  }
  return tail;
}

}  // namespace abt::testing
