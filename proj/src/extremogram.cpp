#include "evrisk/extremogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "evrisk/errors.hpp"
#include "evrisk/parallel.hpp"
#include "evrisk/rng.hpp"
#include "evrisk/special.hpp"

namespace evrisk {

namespace {

constexpr std::uint64_t kKnotStream = 0x58a;
constexpr std::uint64_t kOffsetStream = 0x0ff;
constexpr std::uint64_t kBootStream = 0xb00;

// Normalized average ranks r_i/(n+1); ties get the average rank.
std::vector<double> normalized_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  const double denom = static_cast<double>(n) + 1.0;
  for (double& r : ranks) r /= denom;
  return ranks;
}

double chi_from_ranks(std::span<const double> ra, std::span<const double> rb, double u) {
  const auto n = static_cast<double>(ra.size());
  std::size_t below_a = 0, below_b = 0, joint = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const bool a = ra[i] <= u;
    const bool b = rb[i] <= u;
    below_a += a;
    below_b += b;
    joint += a && b;
  }
  const double fa = static_cast<double>(below_a) / n;
  const double fb = static_cast<double>(below_b) / n;
  const double c = static_cast<double>(joint) / n;
  const double level = 0.5 * (fa + fb);  // attained empirical level
  if (level >= 1.0)
    throw DataError("chi_at_level: no exceedances at level u for this sample size");
  return (1.0 - 2.0 * level + c) / (1.0 - level);
}

// chi at lag k from a rank-transformed series (bootstrap fast path; the
// margins reuse whole-series ranks, exact up to O(k/N) edge effects).
double chi_series_at_lag(std::span<const double> ranks, double u, std::size_t k) {
  const std::size_t n = ranks.size() - k;
  std::size_t below_a = 0, below_b = 0, joint = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool a = ranks[i] <= u;
    const bool b = ranks[i + k] <= u;
    below_a += a;
    below_b += b;
    joint += a && b;
  }
  const auto nd = static_cast<double>(n);
  const double level = 0.5 * (below_a + below_b) / nd;
  if (level >= 1.0) return 1.0;
  return (1.0 - 2.0 * level + static_cast<double>(joint) / nd) / (1.0 - level);
}

void check_not_degenerate(std::span<const double> x, const char* what) {
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  if (*mn == *mx)
    throw DataError(std::string(what) + ": series is constant, ranks are degenerate");
}

}  // namespace

double chi_at_level(std::span<const std::pair<double, double>> pairs, double u) {
  if (pairs.size() < 50) throw DataError("chi_at_level: need at least 50 pairs");
  if (!(u > 0.5 && u < 1.0))
    throw std::domain_error("chi_at_level: u must lie in (0.5, 1)");
  std::vector<double> a(pairs.size()), b(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    a[i] = pairs[i].first;
    b[i] = pairs[i].second;
  }
  check_not_degenerate(a, "chi_at_level");
  check_not_degenerate(b, "chi_at_level");
  const auto ra = normalized_ranks(a);
  const auto rb = normalized_ranks(b);
  return chi_from_ranks(ra, rb, u);
}

double InterpolatedProcess::value(double s) const {
  if (!(s >= 0.0 && s <= domain_length()))
    throw std::domain_error("InterpolatedProcess: s outside the domain");
  const auto i = static_cast<std::size_t>(s);
  if (i + 1 >= knot_values.size()) return knot_values.back();
  const double frac = s - static_cast<double>(i);
  return knot_values[i] * (1.0 - frac) + knot_values[i + 1] * frac;
}

InterpolatedProcess make_interpolated_process(std::size_t knot_count, std::uint64_t seed,
                                              double delta) {
  if (knot_count < 2)
    throw std::domain_error("make_interpolated_process: need at least 2 knots");
  if (!(delta > 0.0))
    throw std::domain_error("make_interpolated_process: delta must be > 0");
  InterpolatedProcess process;
  process.delta = delta;
  process.knot_values.resize(knot_count);
  Rng rng(substream(seed, kKnotStream));
  for (auto& v : process.knot_values) v = special::norm_quantile(rng.uniform_open());
  return process;
}

ExtremogramEstimate extremogram_series(std::span<const double> series, double grid_delta,
                                       double u, std::size_t max_lag, std::uint64_t seed,
                                       int jobs, std::size_t bootstrap_resamples) {
  const std::size_t n = series.size();
  if (n < 100) throw DataError("extremogram: need at least 100 grid values");
  if (max_lag + max_lag >= n)
    throw std::domain_error("extremogram: max_lag must be below half the series length");
  if (!(u > 0.5 && u < 1.0))
    throw std::domain_error("extremogram: u must lie in (0.5, 1)");
  check_not_degenerate(series, "extremogram");

  ExtremogramEstimate est;
  est.u = u;
  est.domain_length = grid_delta * static_cast<double>(n - 1);
  est.lags.resize(max_lag + 1);
  est.chi.resize(max_lag + 1);
  est.ci_low.resize(max_lag + 1);
  est.ci_high.resize(max_lag + 1);
  est.pair_counts.resize(max_lag + 1);

  est.lags[0] = 0.0;
  est.chi[0] = 1.0;  // every pair (x, x) exceeds jointly
  est.ci_low[0] = 1.0;
  est.ci_high[0] = 1.0;
  est.pair_counts[0] = n;

  for (std::size_t k = 1; k <= max_lag; ++k) {
    std::vector<std::pair<double, double>> pairs(n - k);
    for (std::size_t i = 0; i + k < n; ++i) pairs[i] = {series[i], series[i + k]};
    est.lags[k] = grid_delta * static_cast<double>(k);
    est.chi[k] = chi_at_level(pairs, u);
    est.pair_counts[k] = n - k;
  }

  // Stationary block bootstrap over grid positions, mean block length of
  // ten grid steps, wrap-around continuation.
  if (bootstrap_resamples > 0) {
    const double continue_prob = 1.0 - 1.0 / 10.0;
    std::vector<std::vector<double>> boot(bootstrap_resamples);
    parallel_for(bootstrap_resamples, jobs, [&](std::size_t b) {
      Rng rng(substream(seed, kBootStream, b));
      std::vector<double> resampled(n);
      std::size_t cur = static_cast<std::size_t>(rng.uniform_open() * n) % n;
      for (std::size_t t = 0; t < n; ++t) {
        resampled[t] = series[cur];
        if (rng.uniform_open() < continue_prob)
          cur = (cur + 1) % n;
        else
          cur = static_cast<std::size_t>(rng.uniform_open() * n) % n;
      }
      const auto ranks = normalized_ranks(resampled);
      std::vector<double> chis(max_lag + 1);
      chis[0] = 1.0;
      for (std::size_t k = 1; k <= max_lag; ++k) chis[k] = chi_series_at_lag(ranks, u, k);
      boot[b] = std::move(chis);
    });

    std::vector<double> column(bootstrap_resamples);
    for (std::size_t k = 1; k <= max_lag; ++k) {
      for (std::size_t b = 0; b < bootstrap_resamples; ++b) column[b] = boot[b][k];
      std::sort(column.begin(), column.end());
      const auto B = static_cast<double>(bootstrap_resamples);
      const auto lo_idx = static_cast<std::size_t>(std::floor(0.025 * (B - 1.0)));
      const auto hi_idx = static_cast<std::size_t>(std::ceil(0.975 * (B - 1.0)));
      est.ci_low[k] = column[lo_idx];
      est.ci_high[k] = column[hi_idx];
    }
  } else {
    for (std::size_t k = 1; k <= max_lag; ++k) {
      est.ci_low[k] = est.chi[k];
      est.ci_high[k] = est.chi[k];
    }
  }
  return est;
}

ExtremogramEstimate extremogram(const InterpolatedProcess& process, double u,
                                std::size_t max_lag, std::uint64_t seed, int jobs,
                                std::size_t bootstrap_resamples) {
  const double L = process.domain_length();
  if (!(process.delta > 0.0) || process.delta >= L)
    throw std::domain_error("extremogram: grid spacing must lie in (0, L)");
  Rng offset_rng(substream(seed, kOffsetStream));
  const double offset = offset_rng.uniform_open() * process.delta;
  std::vector<double> series;
  series.reserve(static_cast<std::size_t>(L / process.delta) + 2);
  for (double s = offset; s <= L; s += process.delta) series.push_back(process.value(s));
  return extremogram_series(series, process.delta, u, max_lag, seed, jobs,
                            bootstrap_resamples);
}

EffectiveCount effective_independent_count(const ExtremogramEstimate& estimate,
                                           double baseline) {
  if (estimate.lags.size() != estimate.chi.size() ||
      estimate.lags.size() != estimate.ci_low.size() ||
      estimate.lags.size() != estimate.ci_high.size())
    throw DataError("effective_independent_count: ragged estimate");
  for (std::size_t k = 1; k < estimate.lags.size(); ++k) {
    if (estimate.ci_low[k] <= baseline && baseline <= estimate.ci_high[k]) {
      const double d = estimate.lags[k];
      return {d, estimate.domain_length / d};
    }
  }
  throw NumericError(
      "effective_independent_count: chi never reaches the independence baseline "
      "within the estimated lags");
}

}  // namespace evrisk
