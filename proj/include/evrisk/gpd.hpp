#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace evrisk {

// Threshold excesses of the k largest audited returns, split by label.
// `threshold` is the largest return not among the top k.
struct TopKSample {
  double threshold;
  std::vector<double> red_excesses;    // r_j - threshold, all > 0
  std::vector<double> green_excesses;  // g_i - threshold, all > 0

  std::size_t k() const { return red_excesses.size() + green_excesses.size(); }
  std::size_t k_red() const { return red_excesses.size(); }
  std::size_t k_green() const { return green_excesses.size(); }
};

// Maximum-likelihood fit of generalized Pareto tails with one shape shared
// across the red and green excesses, plus the likelihood-ratio test of a
// common scale.
struct GpdFit {
  double xi_hat;       // shared shape of the two-scale model
  double tau_r_hat;    // red scale
  double tau_g_hat;    // green scale
  double loglik_full;  // (xi, tau_R, tau_G)
  double loglik_null;  // (xi, tau) with tau_R = tau_G
  double lr_stat;      // 2 (loglik_full - loglik_null)
  double p_value;      // chi^2_1 upper tail
  bool xi_at_boundary = false;  // xi_hat pinned at the search range edge
};

// GPD distribution functions (scale tau > 0, shape xi, excesses x >= 0).
double gpd_cdf(double xi, double tau, double x);
double gpd_sf(double xi, double tau, double x);
double gpd_quantile(double xi, double tau, double p);
double gpd_loglik(double xi, double tau, std::span<const double> excesses);

// Profile-likelihood fit over xi in [-0.49, 2.0] with the scales maximized
// per xi by bounded one-dimensional search. Requires at least 5 excesses
// on each side.
GpdFit fit_gpd_shared_shape(const TopKSample& sample);

struct PuGpdResult {
  double p_u_hat;
  std::size_t zero_count_redraws;  // Poisson draws of 0 that were rejected
};

// Monte Carlo estimate of p_U from a fitted audit sample: simulate the red
// maximum from a Poisson(k_R) number of red-GPD exceedances by inversion,
// then average exp(-k_G * (1 - F_G(M*))) over R replicates.
PuGpdResult estimate_pu_gpd(const GpdFit& fit, const TopKSample& sample, std::size_t R,
                            std::uint64_t seed, int jobs = 1);

// eta_hat = p/((1-p) upsilon + p).
double estimate_eta(double p_u_k, double upsilon);

// Summary estimates an auditor can compute from the labeled top-k sample.
struct AuditEstimates {
  double p_u_prime;     // k_R / k
  double p_u_hat;       // GPD Monte Carlo estimate
  double upsilon_used;  // odds ratio used in the eta estimate
  double eta_hat;
};

// upsilon defaults to the tail-ratio estimate (tau_R/tau_G)^(1/xi) when
// xi_hat > 0.01, and to 1 otherwise; pass a positive override to use a
// known odds ratio instead.
AuditEstimates audit_estimates(const GpdFit& fit, const TopKSample& sample,
                               double p_u_hat, double upsilon_override = 0.0);

}  // namespace evrisk
