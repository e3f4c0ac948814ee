#include "evrisk/monte_carlo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "evrisk/errors.hpp"
#include "evrisk/parallel.hpp"
#include "evrisk/rng.hpp"

namespace evrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream tags keep the two estimators decorrelated under a shared seed.
constexpr std::uint64_t kAntitheticStream = 0xA17;
constexpr std::uint64_t kDirectStream = 0xD12;

// Kahan-compensated mean and standard error of the mean.
struct MeanSe {
  double mean;
  double se;
};

MeanSe compensated_mean_se(const std::vector<double>& v) {
  double sum = 0.0, comp = 0.0;
  for (double x : v) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0, comp2 = 0.0;
  for (double x : v) {
    const double d = (x - mean) * (x - mean) - comp2;
    const double t = ss + d;
    comp2 = (t - ss) - d;
    ss = t;
  }
  const auto n = static_cast<double>(v.size());
  const double var = n > 1.0 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

// Max of m iid draws by inversion: F^{-1}(u^{1/m}), switching to the
// complementary quantile when u^{1/m} lands near 1.
double max_from_uniform(const ReturnDistribution& dist, double u, std::uint64_t m) {
  const double log_u = std::log(u);
  const double p = std::exp(log_u / static_cast<double>(m));
  if (p < 0.75) return dist.quantile(p);
  const double q = -std::expm1(log_u / static_cast<double>(m));
  return dist.upper_quantile(q);
}

PuEstimate finalize_estimate(const MeanSe& ms, const PuSimConfig& cfg, PuMethod method,
                             std::size_t replicates) {
  PuEstimate est;
  est.method = method;
  est.std_error = ms.se;
  est.m = cfg.red_count();
  est.n = cfg.green_count();
  est.p_u = ms.mean;
  est.upsilon_bound = OddsBound::kNone;
  if (est.p_u >= 1.0) {
    // All replicates saturated; report the odds at 1 - 1/R as a lower bound.
    est.p_u = 1.0;
    est.upsilon = odds_ratio(1.0 - 1.0 / static_cast<double>(replicates), cfg.model.eta);
    est.upsilon_bound = OddsBound::kLower;
  } else if (est.p_u <= 0.0) {
    est.p_u = 0.0;
    est.upsilon = odds_ratio(1.0 / static_cast<double>(replicates), cfg.model.eta);
    est.upsilon_bound = OddsBound::kUpper;
  } else {
    est.upsilon = odds_ratio(est.p_u, cfg.model.eta);
  }
  return est;
}

}  // namespace

std::uint64_t PuSimConfig::red_count() const {
  auto m = static_cast<std::uint64_t>(
      std::llround(model.eta * static_cast<double>(S)));
  return m;
}

void PuSimConfig::validate() const {
  if (S < 2) throw std::domain_error("PuSimConfig: S must be >= 2");
  const std::uint64_t m = red_count();
  if (m < 1 || S - m < 1)
    throw std::domain_error("PuSimConfig: round(eta*S) and S - round(eta*S) must be >= 1");
  if (R < 2) throw std::domain_error("PuSimConfig: R must be >= 2 (antithetic pairing)");
}

PuEstimate pu_antithetic(const PuSimConfig& cfg, int jobs) {
  cfg.validate();
  const std::uint64_t m = cfg.red_count();
  const std::uint64_t n = cfg.green_count();
  const auto n_d = static_cast<double>(n);
  const ReturnDistribution& base = cfg.model.base;
  const double delta = cfg.model.delta;
  const double scale = 1.0 + cfg.model.gamma;

  auto green_below = [&](double u) {
    const double red_max = delta + scale * max_from_uniform(base, u, m);
    const double log_cdf = base.log_cdf(red_max);
    if (std::isnan(log_cdf) || log_cdf == -kInf)
      throw NumericError("pu_antithetic: log F underflowed at the simulated red maximum");
    return std::exp(n_d * log_cdf);
  };

  std::vector<double> pair_means(cfg.R);
  parallel_for(cfg.R, jobs, [&](std::size_t r) {
    Rng rng(substream(cfg.seed, kAntitheticStream, r));
    const double u = rng.uniform_open();
    pair_means[r] = 0.5 * (green_below(u) + green_below(1.0 - u));
  });

  return finalize_estimate(compensated_mean_se(pair_means), cfg, PuMethod::kAntithetic,
                           cfg.R);
}

PuEstimate pu_direct(const PuSimConfig& cfg, std::size_t replicates, int jobs) {
  cfg.validate();
  if (replicates < 2) throw std::domain_error("pu_direct: replicates must be >= 2");
  const std::uint64_t m = cfg.red_count();
  const std::uint64_t n = cfg.green_count();
  const ReturnDistribution& base = cfg.model.base;
  const double delta = cfg.model.delta;
  const double scale = 1.0 + cfg.model.gamma;

  std::vector<std::uint8_t> red_wins(replicates);
  parallel_for(replicates, jobs, [&](std::size_t r) {
    Rng rng(substream(cfg.seed, kDirectStream, r));
    double red_max = -kInf;
    for (std::uint64_t i = 0; i < m; ++i)
      red_max = std::max(red_max, delta + scale * base.quantile(rng.uniform_open()));
    double green_max = -kInf;
    for (std::uint64_t i = 0; i < n; ++i)
      green_max = std::max(green_max, base.quantile(rng.uniform_open()));
    red_wins[r] = red_max > green_max ? 1 : 0;
  });

  std::size_t wins = 0;
  for (std::uint8_t w : red_wins) wins += w;
  const auto reps = static_cast<double>(replicates);
  const double p = static_cast<double>(wins) / reps;
  MeanSe ms{p, std::sqrt(p * (1.0 - p) / reps)};
  return finalize_estimate(ms, cfg, PuMethod::kDirect, replicates);
}

std::vector<std::pair<std::uint64_t, PuEstimate>> pu_sweep(
    const RedGreenModel& model, std::span<const std::uint64_t> S_grid, std::size_t R,
    std::uint64_t seed, int jobs) {
  for (std::size_t i = 1; i < S_grid.size(); ++i)
    if (S_grid[i] <= S_grid[i - 1])
      throw std::domain_error("pu_sweep: S grid must be strictly ascending");
  std::vector<std::pair<std::uint64_t, PuEstimate>> out;
  out.reserve(S_grid.size());
  for (std::size_t i = 0; i < S_grid.size(); ++i) {
    PuSimConfig cfg{model, S_grid[i], R, substream(seed, i)};
    out.emplace_back(S_grid[i], pu_antithetic(cfg, jobs));
  }
  return out;
}

}  // namespace evrisk
