#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace evrisk {

enum class Law { kGaussian, kLognormal, kExponential, kPareto, kStudentT };

// Normalizing sequence for the sample maximum: (M_n - b_n)/a_n converges
// to an extreme-value limit with tail index xi.
struct NormalizingConstants {
  double a_n;  // scale, > 0
  double b_n;  // location
  double xi;   // tail index of the limit law
};

// One of the five supported base return laws.
//
//   Gaussian     standard normal
//   Lognormal    exp(Z), Z standard normal
//   Exponential  unit rate on [0, inf)
//   Pareto(nu)   F(x) = 1 - x^-nu on x > 1
//   StudentT(nu) Student's t with nu degrees of freedom
//
// CDF/quantile evaluations use log/complement identities so that F^n stays
// computable for n up to 1e9 and beyond.
class ReturnDistribution {
 public:
  static ReturnDistribution gaussian();
  static ReturnDistribution lognormal();
  static ReturnDistribution exponential();
  static ReturnDistribution pareto(double nu);
  static ReturnDistribution student_t(double nu);

  // Parses "normal"/"gaussian", "lognormal", "exponential", "pareto",
  // "t"/"student-t"; the last two require nu > 0.
  static ReturnDistribution parse(const std::string& name, double nu);

  Law law() const { return law_; }
  double nu() const { return nu_; }
  std::string name() const;

  double cdf(double x) const;
  // Survival function 1 - F(x), accurate deep in the upper tail.
  double sf(double x) const;
  // log F(x); -inf below the support.
  double log_cdf(double x) const;
  double density(double x) const;

  // F^{-1}(p) for p in (0,1). Monotone; relative accuracy ~1e-12
  // (Student t via safeguarded Halley iteration on the CDF).
  double quantile(double p) const;
  // F^{-1}(1-q) without forming 1-q; keeps precision for tiny q.
  double upper_quantile(double q) const;

  // r(x) = (1 - F(x)) / f(x). Domain error outside the support interior.
  double reciprocal_hazard(double x) const;

  // (a_n, b_n, xi) for the maximum of n draws; n >= 2.
  // Closed forms for Gaussian/Lognormal/Exponential/Pareto; the generic
  // recipe b_n = F^{-1}(1-1/n), a_n = r(b_n) for Student t.
  NormalizingConstants normalizing_constants(std::uint64_t n) const;

  // xi of the extreme-value limit: 0 except Pareto/StudentT where 1/nu.
  double tail_index() const;

  // n iid draws by quantile inversion; deterministic given seed.
  std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

 private:
  ReturnDistribution(Law law, double nu);

  double student_tail_half(double t) const;  // sf(t) for t >= 0
  double student_quantile_tail(double q) const;

  Law law_;
  double nu_ = 0.0;
  // cached Student t constants
  double t_log_beta_ = 0.0;    // log Beta(nu/2, 1/2)
  double t_log_norm_ = 0.0;    // log of the density normalizer
  double t_log_tail_c_ = 0.0;  // sf(x) ~ exp(t_log_tail_c_) * x^-nu
};

}  // namespace evrisk
