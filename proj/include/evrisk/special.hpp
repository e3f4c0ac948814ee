#pragma once

namespace evrisk::special {

double norm_pdf(double x);
double norm_cdf(double x);

// 1 - Phi(x), computed via erfc so the upper tail keeps full precision.
double norm_sf(double x);

// Phi^{-1}(p), p in (0,1). Safeguarded Halley iteration on erfc;
// relative accuracy ~1e-14 over the full double range of p.
double norm_quantile(double p);

// Solves norm_sf(y) = q, i.e. Phi^{-1}(1-q) without forming 1-q.
double norm_upper_quantile(double q);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double incbeta(double a, double b, double x);

// Same, with log(Beta(a,b)) precomputed by the caller (hot paths).
double incbeta_pre(double a, double b, double x, double log_beta);

// P(chi^2_1 > x) = erfc(sqrt(x/2)).
double chi2_sf_1df(double x);

}  // namespace evrisk::special
