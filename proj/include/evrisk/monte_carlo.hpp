#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "evrisk/asymptotics.hpp"

namespace evrisk {

struct PuSimConfig {
  RedGreenModel model;
  std::uint64_t S;            // strategy-space size
  std::size_t R = 100000;     // Monte Carlo replicates
  std::uint64_t seed = 1;

  // m = round(eta S), n = S - m; both must be >= 1.
  std::uint64_t red_count() const;
  std::uint64_t green_count() const { return S - red_count(); }

  void validate() const;
};

enum class PuMethod { kAntithetic, kDirect };

// Which side of p_u the reported odds ratio bounds when the estimate hits
// 0 or 1 at finite R.
enum class OddsBound { kNone, kLower, kUpper };

struct PuEstimate {
  double p_u;
  double upsilon;          // odds_ratio(p_u, eta); a bound when flagged
  double std_error;
  PuMethod method;
  OddsBound upsilon_bound = OddsBound::kNone;
  std::uint64_t m = 0, n = 0;  // realized red/green counts after rounding
};

// Antithetic inversion estimator of p_U = Pr(M_R > M_G):
// draw U, set M* = F^{-1}(U^{1/m}), average F(delta + (1+gamma) M*)^n,
// repeat with 1-U, return the pair mean. F^n is evaluated as
// exp(n log F). Deterministic given cfg.seed for any jobs value.
PuEstimate pu_antithetic(const PuSimConfig& cfg, int jobs = 1);

// Brute-force oracle: simulate all S returns per replicate and test
// whether the largest is red. Keep S * replicates at desk scale.
PuEstimate pu_direct(const PuSimConfig& cfg, std::size_t replicates, int jobs = 1);

// One antithetic estimate per S (ascending grid).
std::vector<std::pair<std::uint64_t, PuEstimate>> pu_sweep(
    const RedGreenModel& model, std::span<const std::uint64_t> S_grid,
    std::size_t R, std::uint64_t seed, int jobs = 1);

}  // namespace evrisk
