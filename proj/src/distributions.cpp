#include "evrisk/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "evrisk/errors.hpp"
#include "evrisk/rng.hpp"
#include "evrisk/special.hpp"

namespace evrisk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrtPi = 0.5723649429247000870;
}  // namespace

ReturnDistribution::ReturnDistribution(Law law, double nu) : law_(law), nu_(nu) {
  if ((law == Law::kPareto || law == Law::kStudentT) && !(nu > 0.0))
    throw std::domain_error("ReturnDistribution: nu must be positive");
  if (law == Law::kStudentT) {
    const double a = 0.5 * nu_;
    t_log_beta_ = std::lgamma(a) + std::lgamma(0.5) - std::lgamma(a + 0.5);
    t_log_norm_ = std::lgamma(0.5 * (nu_ + 1.0)) - std::lgamma(a) -
                  0.5 * std::log(nu_) - kLogSqrtPi;
    // sf(x) ~ C x^-nu with C = Gamma((nu+1)/2) nu^(nu/2-1) / (sqrt(pi) Gamma(nu/2))
    t_log_tail_c_ = std::lgamma(0.5 * (nu_ + 1.0)) - std::lgamma(a) - kLogSqrtPi +
                    (0.5 * nu_ - 1.0) * std::log(nu_);
  }
}

ReturnDistribution ReturnDistribution::gaussian() { return {Law::kGaussian, 0.0}; }
ReturnDistribution ReturnDistribution::lognormal() { return {Law::kLognormal, 0.0}; }
ReturnDistribution ReturnDistribution::exponential() { return {Law::kExponential, 0.0}; }
ReturnDistribution ReturnDistribution::pareto(double nu) { return {Law::kPareto, nu}; }
ReturnDistribution ReturnDistribution::student_t(double nu) { return {Law::kStudentT, nu}; }

ReturnDistribution ReturnDistribution::parse(const std::string& name, double nu) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "normal" || s == "gaussian") return gaussian();
  if (s == "lognormal") return lognormal();
  if (s == "exponential") return exponential();
  if (s == "pareto") return pareto(nu);
  if (s == "t" || s == "student" || s == "student-t" || s == "studentt") return student_t(nu);
  throw std::invalid_argument("unknown distribution: " + name);
}

std::string ReturnDistribution::name() const {
  char nu_str[32] = {0};
  if (law_ == Law::kPareto || law_ == Law::kStudentT)
    std::snprintf(nu_str, sizeof(nu_str), "%g", nu_);
  switch (law_) {
    case Law::kGaussian: return "normal";
    case Law::kLognormal: return "lognormal";
    case Law::kExponential: return "exponential";
    case Law::kPareto: return std::string("pareto(") + nu_str + ")";
    case Law::kStudentT: return std::string("t(") + nu_str + ")";
  }
  return "?";
}

double ReturnDistribution::student_tail_half(double t) const {
  // sf(t) for t >= 0: 0.5 * I_z(nu/2, 1/2) with z = nu/(nu + t^2).
  // I_z has a sqrt singularity at z = 1, so near the median we evaluate
  // through the complement variable t^2/(nu + t^2), which is formed
  // without cancellation: sf = 0.5 * (1 - I_xc(1/2, nu/2)).
  const double a = 0.5 * nu_;
  const double t2 = t * t;
  const double xc = t2 / (nu_ + t2);
  if (xc < 1.5 / (a + 2.5))
    return 0.5 * (1.0 - special::incbeta_pre(0.5, a, xc, t_log_beta_));
  return 0.5 * special::incbeta_pre(a, 0.5, nu_ / (nu_ + t2), t_log_beta_);
}

double ReturnDistribution::cdf(double x) const {
  switch (law_) {
    case Law::kGaussian: return special::norm_cdf(x);
    case Law::kLognormal: return x <= 0.0 ? 0.0 : special::norm_cdf(std::log(x));
    case Law::kExponential: return x <= 0.0 ? 0.0 : -std::expm1(-x);
    case Law::kPareto: return x <= 1.0 ? 0.0 : -std::expm1(-nu_ * std::log(x));
    case Law::kStudentT:
      return x >= 0.0 ? 1.0 - student_tail_half(x) : student_tail_half(-x);
  }
  return 0.0;
}

double ReturnDistribution::sf(double x) const {
  switch (law_) {
    case Law::kGaussian: return special::norm_sf(x);
    case Law::kLognormal: return x <= 0.0 ? 1.0 : special::norm_sf(std::log(x));
    case Law::kExponential: return x <= 0.0 ? 1.0 : std::exp(-x);
    case Law::kPareto: return x <= 1.0 ? 1.0 : std::exp(-nu_ * std::log(x));
    case Law::kStudentT:
      return x >= 0.0 ? student_tail_half(x) : 1.0 - student_tail_half(-x);
  }
  return 0.0;
}

double ReturnDistribution::log_cdf(double x) const {
  const double s = sf(x);
  if (s < 0.5) return std::log1p(-s);
  const double c = cdf(x);
  return c > 0.0 ? std::log(c) : -kInf;
}

double ReturnDistribution::density(double x) const {
  switch (law_) {
    case Law::kGaussian: return special::norm_pdf(x);
    case Law::kLognormal: return x <= 0.0 ? 0.0 : special::norm_pdf(std::log(x)) / x;
    case Law::kExponential: return x < 0.0 ? 0.0 : std::exp(-x);
    case Law::kPareto:
      return x <= 1.0 ? 0.0 : nu_ * std::exp(-(nu_ + 1.0) * std::log(x));
    case Law::kStudentT:
      return std::exp(t_log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(x * x / nu_));
  }
  return 0.0;
}

double ReturnDistribution::student_quantile_tail(double q) const {
  // Solves sf(y) = q for y >= 0, q in (0, 1/2].
  if (q == 0.5) return 0.0;

  const double d = 0.5 - q;
  if (d <= 1e-4) {
    // Near the median the z = nu/(nu+y^2) parametrization flattens in
    // floating point; the series sf(y) = 1/2 - f(0)(y - (nu+1)y^3/(6nu))
    // inverted to cubic order is exact to ~1e-15 here.
    const double w = d / std::exp(t_log_norm_);
    return w * (1.0 + (nu_ + 1.0) * w * w / (6.0 * nu_));
  }

  double y;
  if (q <= 0.05) {
    // Pareto-like tail start
    const double ly = (t_log_tail_c_ - std::log(q)) / nu_;
    if (ly > 690.0) throw NumericError("student_t quantile: tail value overflows");
    y = std::exp(ly);
  } else {
    // Cornish-Fisher style expansion around the normal quantile
    const double z = special::norm_upper_quantile(q);
    const double z2 = z * z;
    const double g1 = 0.25 * (z2 + 1.0) * z;
    const double g2 = (z2 * (5.0 * z2 + 16.0) + 3.0) * z / 96.0;
    const double g3 = (z2 * (z2 * (3.0 * z2 + 19.0) + 17.0) - 15.0) * z / 384.0;
    y = z + g1 / nu_ + g2 / (nu_ * nu_) + g3 / (nu_ * nu_ * nu_);
    if (!(y > 0.0)) y = z > 0.0 ? z : 1e-8;
  }

  // Newton on log sf(y) = log q, bracketed; the log form keeps steps
  // well-scaled far into the tail.
  const double log_q = std::log(q);
  double lo = 0.0, hi = kInf;
  for (int it = 0; it < 200; ++it) {
    const double sf = student_tail_half(y);
    double ynext;
    if (sf > 0.0) {
      const double h = std::log(sf) - log_q;
      // sf matches q to evaluation precision (a few ulps through the
      // continued fraction): the remaining y-error is h * sf/f <= ~5e-15
      if (std::fabs(h) <= 4e-15) return y;
      if (h > 0.0) lo = y; else hi = y;
      const double log_dens =
          t_log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(y * y / nu_);
      const double step = h * std::exp(std::log(sf) - log_dens);
      if (std::fabs(step) <= 4e-14 * std::fabs(y) + 1e-15) return y;
      ynext = y + step;
    } else {
      hi = y;
      ynext = 0.5 * (lo + hi);
    }
    if (!(ynext > lo && ynext < hi))
      ynext = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * y + 1.0;
    if (ynext == y) return y;
    y = ynext;
  }
  throw NumericError("student_t quantile: iteration did not converge");
}

double ReturnDistribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("quantile: p must lie in (0,1)");
  switch (law_) {
    case Law::kGaussian: return special::norm_quantile(p);
    case Law::kLognormal: return std::exp(special::norm_quantile(p));
    case Law::kExponential: return -std::log1p(-p);
    case Law::kPareto: return std::exp(-std::log1p(-p) / nu_);
    case Law::kStudentT: {
      const double q = p < 0.5 ? p : 1.0 - p;
      const double y = student_quantile_tail(q);
      return p < 0.5 ? -y : y;
    }
  }
  return 0.0;
}

double ReturnDistribution::upper_quantile(double q) const {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("upper_quantile: q must lie in (0,1)");
  switch (law_) {
    case Law::kGaussian: return special::norm_upper_quantile(q);
    case Law::kLognormal: return std::exp(special::norm_upper_quantile(q));
    case Law::kExponential: return -std::log(q);
    case Law::kPareto: return std::exp(-std::log(q) / nu_);
    case Law::kStudentT:
      return q < 0.5 ? student_quantile_tail(q) : -student_quantile_tail(1.0 - q);
  }
  return 0.0;
}

double ReturnDistribution::reciprocal_hazard(double x) const {
  switch (law_) {
    case Law::kExponential:
      if (x < 0.0) throw std::domain_error("reciprocal_hazard: x outside support");
      return 1.0;  // constant hazard
    case Law::kPareto:
      if (x <= 1.0) throw std::domain_error("reciprocal_hazard: x outside support");
      return x / nu_;
    case Law::kLognormal:
      if (x <= 0.0) throw std::domain_error("reciprocal_hazard: x outside support");
      break;
    default:
      break;
  }
  const double dens = density(x);
  if (!(dens > 0.0))
    throw NumericError("reciprocal_hazard: density underflow at x");
  return sf(x) / dens;
}

double ReturnDistribution::tail_index() const {
  return (law_ == Law::kPareto || law_ == Law::kStudentT) ? 1.0 / nu_ : 0.0;
}

NormalizingConstants ReturnDistribution::normalizing_constants(std::uint64_t n) const {
  if (n < 2) throw std::domain_error("normalizing_constants: n must be >= 2");
  const double ln = std::log(static_cast<double>(n));
  switch (law_) {
    case Law::kGaussian: {
      const double b = std::sqrt(2.0 * ln);
      return {1.0 / b, b, 0.0};
    }
    case Law::kLognormal: {
      const double t = std::sqrt(2.0 * ln);
      const double b = std::exp(t);
      return {b / t, b, 0.0};
    }
    case Law::kExponential:
      return {1.0, ln, 0.0};
    case Law::kPareto: {
      const double b = std::exp(ln / nu_);
      return {b / nu_, b, 1.0 / nu_};
    }
    case Law::kStudentT: {
      const double b = upper_quantile(1.0 / static_cast<double>(n));
      const double a = (1.0 / static_cast<double>(n)) / density(b);
      return {a, b, 1.0 / nu_};
    }
  }
  return {1.0, 0.0, 0.0};
}

std::vector<double> ReturnDistribution::sample(std::size_t n, std::uint64_t seed) const {
  if (n < 1) throw std::domain_error("sample: n must be >= 1");
  std::vector<double> out(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) out[i] = quantile(rng.uniform_open());
  return out;
}

}  // namespace evrisk
