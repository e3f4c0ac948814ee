#include "evrisk/gpd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "evrisk/errors.hpp"
#include "evrisk/parallel.hpp"
#include "evrisk/rng.hpp"
#include "evrisk/sampling.hpp"
#include "evrisk/special.hpp"

namespace evrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kXiLo = -0.49;  // MLE regularity fails below -1/2
constexpr double kXiHi = 2.0;
constexpr std::uint64_t kGpdStream = 0x6bd;

// Golden-section / parabolic minimizer on [lo, hi] (Brent).
template <typename F>
double brent_min(F f, double lo, double hi, double tol, int max_iter = 200) {
  const double gold = 0.3819660112501051;
  double a = lo, b = hi;
  double x = a + gold * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (a + b);
    const double tol1 = tol * std::fabs(x) + 1e-12;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - mid) <= tol2 - 0.5 * (b - a)) break;
    bool use_golden = true;
    if (std::fabs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double e_prev = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = mid > x ? tol1 : -tol1;
        use_golden = false;
      }
    }
    if (use_golden) {
      e = (x >= mid ? a : b) - x;
      d = gold * e;
    }
    const double u = std::fabs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

struct ProfileResult {
  double tau;
  double loglik;
};

// Maximizes the GPD log-likelihood over tau for fixed xi.
ProfileResult profile_tau(double xi, std::span<const double> x) {
  double mean = 0.0, max_x = 0.0;
  for (double e : x) {
    mean += e;
    max_x = std::max(max_x, e);
  }
  mean /= static_cast<double>(x.size());
  double lo = std::log(mean) - 8.0;
  const double hi = std::log(mean) + 8.0;
  if (xi < 0.0) lo = std::max(lo, std::log(-xi * max_x) + 1e-10);
  if (!(lo < hi)) lo = hi - 1e-6;
  auto neg = [&](double log_tau) { return -gpd_loglik(xi, std::exp(log_tau), x); };
  const double log_tau = brent_min(neg, lo, hi, 1e-11);
  return {std::exp(log_tau), gpd_loglik(xi, std::exp(log_tau), x)};
}

}  // namespace

double gpd_loglik(double xi, double tau, std::span<const double> x) {
  if (!(tau > 0.0)) return -kInf;
  const auto k = static_cast<double>(x.size());
  if (std::fabs(xi) < 1e-12) {
    double s = 0.0;
    for (double e : x) s += e;
    return -k * std::log(tau) - s / tau;
  }
  double s = 0.0;
  for (double e : x) {
    const double z = xi * e / tau;
    if (z <= -1.0) return -kInf;
    s += std::log1p(z);
  }
  return -k * std::log(tau) - (1.0 + 1.0 / xi) * s;
}

double gpd_sf(double xi, double tau, double x) {
  if (!(tau > 0.0)) throw std::domain_error("gpd_sf: tau must be > 0");
  if (x <= 0.0) return 1.0;
  if (std::fabs(xi) < 1e-12) return std::exp(-x / tau);
  const double z = xi * x / tau;
  if (z <= -1.0) return 0.0;  // beyond the upper endpoint -tau/xi
  return std::exp(-std::log1p(z) / xi);
}

double gpd_cdf(double xi, double tau, double x) { return 1.0 - gpd_sf(xi, tau, x); }

double gpd_quantile(double xi, double tau, double p) {
  if (!(tau > 0.0)) throw std::domain_error("gpd_quantile: tau must be > 0");
  if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("gpd_quantile: p must lie in [0,1)");
  if (std::fabs(xi) < 1e-12) return -tau * std::log1p(-p);
  return tau * std::expm1(-xi * std::log1p(-p)) / xi;
}

GpdFit fit_gpd_shared_shape(const TopKSample& sample) {
  if (sample.k_red() < 5 || sample.k_green() < 5)
    throw DataError("fit_gpd_shared_shape: need at least 5 excesses per label");
  for (double e : sample.red_excesses)
    if (!(e >= 0.0) || !std::isfinite(e))
      throw DataError("fit_gpd_shared_shape: excesses must be nonnegative finite");
  for (double e : sample.green_excesses)
    if (!(e >= 0.0) || !std::isfinite(e))
      throw DataError("fit_gpd_shared_shape: excesses must be nonnegative finite");

  std::vector<double> pooled(sample.red_excesses);
  pooled.insert(pooled.end(), sample.green_excesses.begin(), sample.green_excesses.end());

  auto profile_full = [&](double xi) {
    return profile_tau(xi, sample.red_excesses).loglik +
           profile_tau(xi, sample.green_excesses).loglik;
  };
  auto profile_null = [&](double xi) { return profile_tau(xi, pooled).loglik; };

  auto maximize_xi = [&](auto&& profile) {
    constexpr int kGridPoints = 51;
    double best_xi = kXiLo, best_ll = -kInf;
    for (int i = 0; i < kGridPoints; ++i) {
      const double xi = kXiLo + (kXiHi - kXiLo) * i / (kGridPoints - 1);
      const double ll = profile(xi);
      if (ll > best_ll) {
        best_ll = ll;
        best_xi = xi;
      }
    }
    if (!std::isfinite(best_ll))
      throw FitError("fit_gpd_shared_shape: profile likelihood degenerate on the grid");
    const double step = (kXiHi - kXiLo) / (kGridPoints - 1);
    const double lo = std::max(kXiLo, best_xi - step);
    const double hi = std::min(kXiHi, best_xi + step);
    const double xi = brent_min([&](double v) { return -profile(v); }, lo, hi, 1e-10);
    return std::pair<double, double>(xi, profile(xi));
  };

  GpdFit fit;
  auto [xi_full, ll_full] = maximize_xi(profile_full);
  auto [xi_null, ll_null] = maximize_xi(profile_null);
  fit.xi_hat = xi_full;
  fit.tau_r_hat = profile_tau(xi_full, sample.red_excesses).tau;
  fit.tau_g_hat = profile_tau(xi_full, sample.green_excesses).tau;
  fit.loglik_full = ll_full;
  fit.loglik_null = ll_null;
  fit.xi_at_boundary = xi_full <= kXiLo + 1e-6 || xi_full >= kXiHi - 1e-6;

  double lr = 2.0 * (ll_full - ll_null);
  if (lr < -1e-6)
    throw FitError("fit_gpd_shared_shape: null likelihood exceeded full (lr = " +
                   std::to_string(lr) + "), optimization failed");
  lr = std::max(lr, 0.0);
  fit.lr_stat = lr;
  fit.p_value = special::chi2_sf_1df(lr);

  if (!(fit.tau_r_hat > 0.0) || !(fit.tau_g_hat > 0.0) ||
      !std::isfinite(fit.loglik_full) || !std::isfinite(fit.loglik_null))
    throw FitError("fit_gpd_shared_shape: fit did not converge");
  (void)xi_null;
  return fit;
}

PuGpdResult estimate_pu_gpd(const GpdFit& fit, const TopKSample& sample, std::size_t R,
                            std::uint64_t seed, int jobs) {
  if (R < 1) throw std::domain_error("estimate_pu_gpd: R must be >= 1");
  if (sample.k_red() < 1 || sample.k_green() < 1)
    throw DataError("estimate_pu_gpd: need at least one excess per label");
  const auto mean_red = static_cast<double>(sample.k_red());
  const auto k_green = static_cast<double>(sample.k_green());
  const double xi = fit.xi_hat;
  const double tau_r = fit.tau_r_hat;
  const double tau_g = fit.tau_g_hat;

  std::vector<double> terms(R);
  std::vector<std::uint32_t> redraws(R, 0);
  parallel_for(R, jobs, [&](std::size_t r) {
    Rng rng(substream(seed, kGpdStream, r));
    std::uint64_t n_red = poisson(rng, mean_red);
    std::uint32_t rejected = 0;
    while (n_red == 0) {
      // a maximum over zero points is undefined; redraw and count
      if (++rejected > 100000)
        throw NumericError("estimate_pu_gpd: Poisson rejection loop stuck at zero");
      n_red = poisson(rng, mean_red);
    }
    redraws[r] = rejected;
    const double u = rng.uniform_open();
    // level of the red maximum among n_red excesses: q = 1 - u^(1/N)
    const double q = -std::expm1(std::log(u) / static_cast<double>(n_red));
    const double red_max = std::fabs(xi) < 1e-8
                               ? -tau_r * std::log(q)
                               : tau_r * std::expm1(-xi * std::log(q)) / xi;
    terms[r] = std::exp(-k_green * gpd_sf(xi, tau_g, red_max));
  });

  double sum = 0.0, comp = 0.0;
  std::size_t total_redraws = 0;
  for (std::size_t r = 0; r < R; ++r) {
    const double y = terms[r] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    total_redraws += redraws[r];
  }
  return {sum / static_cast<double>(R), total_redraws};
}

double estimate_eta(double p_u_k, double upsilon) {
  if (!(p_u_k >= 0.0 && p_u_k <= 1.0))
    throw std::domain_error("estimate_eta: p must lie in [0,1]");
  if (!(upsilon > 0.0)) throw std::domain_error("estimate_eta: upsilon must be > 0");
  return p_u_k / ((1.0 - p_u_k) * upsilon + p_u_k);
}

AuditEstimates audit_estimates(const GpdFit& fit, const TopKSample& sample,
                               double p_u_hat, double upsilon_override) {
  AuditEstimates out;
  out.p_u_prime = static_cast<double>(sample.k_red()) / static_cast<double>(sample.k());
  out.p_u_hat = p_u_hat;
  if (upsilon_override > 0.0) {
    out.upsilon_used = upsilon_override;
  } else if (fit.xi_hat > 0.01) {
    // Pareto-type tails: scale ratio tau_R/tau_G maps to odds (ratio)^(1/xi).
    out.upsilon_used = std::pow(fit.tau_r_hat / fit.tau_g_hat, 1.0 / fit.xi_hat);
  } else {
    out.upsilon_used = 1.0;
  }
  out.eta_hat = estimate_eta(out.p_u_prime, out.upsilon_used);
  return out;
}

}  // namespace evrisk
