#pragma once

#include <cmath>
#include <cstdint>

#include "evrisk/rng.hpp"

namespace evrisk {

namespace detail {

// Sequential inversion; expected cost O(mean).
inline std::uint64_t poisson_small(Rng& rng, double mean) {
  const double limit = std::exp(-mean);
  double prod = rng.uniform_open();
  std::uint64_t k = 0;
  while (prod > limit) {
    prod *= rng.uniform_open();
    ++k;
  }
  return k;
}

// Hormann's transformed rejection with squeeze (PTRS); O(1) for mean >= 10.
inline std::uint64_t poisson_ptrs(Rng& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double log_mean = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform_open() - 0.5;
    const double v = rng.uniform_open();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = -mean + kf * log_mean - std::lgamma(kf + 1.0);
    if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
  }
}

}  // namespace detail

inline std::uint64_t poisson(Rng& rng, double mean) {
  return mean < 10.0 ? detail::poisson_small(rng, mean) : detail::poisson_ptrs(rng, mean);
}

}  // namespace evrisk
