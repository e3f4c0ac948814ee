// Independent reference implementations used only by tests. These
// deliberately take different code paths (boost.math, quadrature, grid
// search) from the library under test.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace oracles {

// Student t quantile by bisection on the incomplete-beta CDF (boost ibeta).
inline double student_t_quantile(double nu, double p) {
  auto cdf = [nu](double x) {
    const double z = nu / (nu + x * x);
    const double half = 0.5 * boost::math::ibeta(0.5 * nu, 0.5, z);
    return x >= 0.0 ? 1.0 - half : half;
  };
  double lo = -1.0, hi = 1.0;
  while (cdf(lo) > p) lo *= 2.0;
  while (cdf(hi) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14 * (std::fabs(mid) + 1e-14)) break;
  }
  return 0.5 * (lo + hi);
}

// Mills ratio (1 - Phi(x)) / phi(x) by adaptive quadrature of the tail.
inline double mills_ratio(double x) {
  auto phi = [](double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * 3.14159265358979323846);
  };
  const double tail = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      phi, x, x + 60.0, 10, 1e-13);
  return tail / phi(x);
}

// p_U = Pr(M_R > M_G) by quadrature: with t = F(x)^m,
// p_U = int_0^1 F(delta + (1+gamma) F^{-1}(t^{1/m}))^n dt.
template <typename Dist>
double pu_quadrature(const Dist& dist, std::uint64_t m, std::uint64_t n, double delta,
                     double gamma) {
  auto integrand = [&](double t) {
    const double x = boost::math::quantile(dist, std::pow(t, 1.0 / static_cast<double>(m)));
    const double c = boost::math::cdf(dist, delta + (1.0 + gamma) * x);
    return std::pow(c, static_cast<double>(n));
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 1e-12, 1.0 - 1e-12, 12, 1e-11);
}

// Exhaustive 2-D scan of the single-sample GPD likelihood.
struct GpdGridFit {
  double xi;
  double log_tau;
  double loglik;
};

inline double gpd_loglik_ref(double xi, double tau, std::span<const double> x) {
  if (tau <= 0.0) return -1e308;
  double ll = -static_cast<double>(x.size()) * std::log(tau);
  for (double e : x) {
    if (std::fabs(xi) < 1e-12) {
      ll -= e / tau;
    } else {
      const double z = xi * e / tau;
      if (z <= -1.0) return -1e308;
      ll -= (1.0 + 1.0 / xi) * std::log1p(z);
    }
  }
  return ll;
}

inline GpdGridFit gpd_grid_search(std::span<const double> x, double xi_lo = -0.45,
                                  double xi_hi = 1.5, int xi_steps = 80,
                                  int tau_steps = 160) {
  double mean = 0.0;
  for (double e : x) mean += e;
  mean /= static_cast<double>(x.size());
  GpdGridFit best{0.0, 0.0, -1e308};
  for (int i = 0; i <= xi_steps; ++i) {
    const double xi = xi_lo + (xi_hi - xi_lo) * i / xi_steps;
    for (int j = 0; j <= tau_steps; ++j) {
      const double lt = std::log(mean) - 3.0 + 6.0 * j / tau_steps;
      const double ll = gpd_loglik_ref(xi, std::exp(lt), x);
      if (ll > best.loglik) best = {xi, lt, ll};
    }
  }
  return best;
}

}  // namespace oracles
