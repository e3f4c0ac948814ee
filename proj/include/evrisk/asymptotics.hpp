#pragma once

#include <cstdint>
#include <string>

#include "evrisk/distributions.hpp"

namespace evrisk {

// Red/green strategy-return model. Green returns follow `base`; red returns
// are delta + (1+gamma) * Z with Z ~ base; a fraction eta of the strategy
// space is red.
struct RedGreenModel {
  ReturnDistribution base;
  double eta;    // in (0,1)
  double delta;  // mean advantage of red, >= 0
  double gamma;  // volatility inflation of red, >= 0

  RedGreenModel(ReturnDistribution base_, double eta_, double delta_, double gamma_);
};

enum class LimitRegime {
  kFiniteOdds,    // odds ratio converges to a finite value > 1
  kRedDominates,  // p_U -> 1, odds ratio unbounded
  kNeutral,       // p_U -> eta, odds ratio -> 1
};

// Large-S behaviour of the red-selection probability. pu_limit and
// upsilon_star are meaningful for kFiniteOdds and kNeutral; divergence is
// expressed by the kRedDominates tag, never by a floating-point infinity.
struct LimitClassification {
  LimitRegime regime;
  double pu_limit = 1.0;
  double upsilon_star = 1.0;
  std::string reason;
};

struct KhintchineConstants {
  double alpha;  // limit of a_m / a_n
  double beta;   // limit of (b_m - b_n) / a_n
};

// Odds of p_u relative to odds of eta.
double odds_ratio(double p_u, double eta);

// Inverse of odds_ratio in its first argument.
double pu_from_odds(double upsilon, double eta);

// alpha = w^xi, beta = (w^xi - 1)/xi with w = eta/(1-eta);
// beta = log w in the xi -> 0 limit.
KhintchineConstants khintchine_constants(double eta, double xi);

// Limiting odds ratio (1+gamma)^nu for Pareto-tailed returns.
double upsilon_star(double gamma, double nu);

// Limiting p_U = eta (1+gamma)^nu / (1 - eta + eta (1+gamma)^nu).
double limiting_pu_pareto(double eta, double gamma, double nu);

// The scaled red advantage (delta + gamma b_m)/a_n with m = round(eta S),
// n = S - m, together with its large-S behaviour.
struct AdvantageLimit {
  double value_at_S;  // evaluated at the given S
  bool diverges;      // the S -> infinity limit is +infinity
  double limit;       // finite limit when !diverges
};

AdvantageLimit advantage_limit(const RedGreenModel& model, std::uint64_t S);

LimitClassification classify_limit(const RedGreenModel& model);

}  // namespace evrisk
