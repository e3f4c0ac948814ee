#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace evrisk {

// Pointwise extremal-dependence estimates chi_k over a lag grid, with
// stationary-block-bootstrap confidence intervals.
struct ExtremogramEstimate {
  double u;                     // quantile level
  double domain_length;         // length of the sampled domain
  std::vector<double> lags;     // k * grid step, starting at 0
  std::vector<double> chi;      // chi at lag 0 is exactly 1
  std::vector<double> ci_low;   // pointwise 2.5% bootstrap percentile
  std::vector<double> ci_high;  // pointwise 97.5% bootstrap percentile
  std::vector<std::size_t> pair_counts;
};

// Continuous surrogate return surface: piecewise-linear interpolation of
// iid Gaussian values at the integer sites 0..knots-1.
struct InterpolatedProcess {
  std::vector<double> knot_values;
  double delta = 0.1;  // evaluation grid spacing

  double domain_length() const { return static_cast<double>(knot_values.size()) - 1.0; }
  double value(double s) const;  // exact at knots, linear between
};

InterpolatedProcess make_interpolated_process(std::size_t knot_count, std::uint64_t seed,
                                              double delta = 0.1);

// Rank-based estimate of chi(u) = Pr(U > u | V > u) from paired data.
// Both margins are reduced to normalized ranks, so the estimate is
// invariant under strictly increasing marginal transformations; the copula
// diagonal and the level are evaluated at the attained empirical rank
// level, which makes perfectly dependent pairs give exactly 1.
double chi_at_level(std::span<const std::pair<double, double>> pairs, double u);

// Evaluates the process on its grid (random initial offset within one
// step), then estimates chi at lags 0..max_lag with bootstrap intervals.
ExtremogramEstimate extremogram(const InterpolatedProcess& process, double u,
                                std::size_t max_lag, std::uint64_t seed, int jobs = 1,
                                std::size_t bootstrap_resamples = 500);

// Same on an already-sampled equally spaced series.
ExtremogramEstimate extremogram_series(std::span<const double> series, double grid_delta,
                                       double u, std::size_t max_lag, std::uint64_t seed,
                                       int jobs = 1, std::size_t bootstrap_resamples = 500);

struct EffectiveCount {
  double decorrelation_distance;  // smallest lag whose CI covers the baseline
  double effective_count;         // domain_length / decorrelation_distance
};

// Smallest positive lag at which chi is statistically indistinguishable
// from `baseline` (the independence value 1-u), and the implied number of
// effectively independent strategies. Throws NumericError when chi never
// reaches the baseline within the estimated lags.
EffectiveCount effective_independent_count(const ExtremogramEstimate& estimate,
                                           double baseline);

}  // namespace evrisk
