#include "evrisk/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace evrisk {

RedGreenModel::RedGreenModel(ReturnDistribution base_, double eta_, double delta_,
                             double gamma_)
    : base(std::move(base_)), eta(eta_), delta(delta_), gamma(gamma_) {
  if (!(eta > 0.0 && eta < 1.0))
    throw std::domain_error("RedGreenModel: eta must lie in (0,1)");
  if (!(delta >= 0.0)) throw std::domain_error("RedGreenModel: delta must be >= 0");
  if (!(gamma >= 0.0)) throw std::domain_error("RedGreenModel: gamma must be >= 0");
}

double odds_ratio(double p_u, double eta) {
  if (!(p_u > 0.0 && p_u < 1.0))
    throw std::domain_error("odds_ratio: p_u must lie in (0,1)");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::domain_error("odds_ratio: eta must lie in (0,1)");
  return (p_u / (1.0 - p_u)) / (eta / (1.0 - eta));
}

double pu_from_odds(double upsilon, double eta) {
  if (!(upsilon > 0.0)) throw std::domain_error("pu_from_odds: upsilon must be > 0");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::domain_error("pu_from_odds: eta must lie in (0,1)");
  const double w = upsilon * eta / (1.0 - eta);
  return w / (1.0 + w);
}

KhintchineConstants khintchine_constants(double eta, double xi) {
  if (!(eta > 0.0 && eta < 1.0))
    throw std::domain_error("khintchine_constants: eta must lie in (0,1)");
  const double log_w = std::log(eta / (1.0 - eta));
  const double alpha = std::exp(xi * log_w);
  // (e^{xi L} - 1)/xi via expm1 stays exact through xi -> 0.
  const double beta = std::fabs(xi) < 1e-12 ? log_w : std::expm1(xi * log_w) / xi;
  return {alpha, beta};
}

double upsilon_star(double gamma, double nu) {
  if (!(gamma >= 0.0)) throw std::domain_error("upsilon_star: gamma must be >= 0");
  if (!(nu > 0.0)) throw std::domain_error("upsilon_star: nu must be > 0");
  return std::pow(1.0 + gamma, nu);
}

double limiting_pu_pareto(double eta, double gamma, double nu) {
  if (!(eta > 0.0 && eta < 1.0))
    throw std::domain_error("limiting_pu_pareto: eta must lie in (0,1)");
  const double up = upsilon_star(gamma, nu);
  return eta * up / (1.0 - eta + eta * up);
}

namespace {

std::uint64_t red_count(double eta, std::uint64_t S) {
  auto m = static_cast<std::uint64_t>(std::llround(eta * static_cast<double>(S)));
  if (m < 1) m = 1;
  if (m > S - 1) m = S - 1;
  return m;
}

}  // namespace

AdvantageLimit advantage_limit(const RedGreenModel& model, std::uint64_t S) {
  if (S < 10) throw std::domain_error("advantage_limit: S must be >= 10");
  const std::uint64_t m = red_count(model.eta, S);
  const std::uint64_t n = S - m;
  const NormalizingConstants cm = model.base.normalizing_constants(m < 2 ? 2 : m);
  const NormalizingConstants cn = model.base.normalizing_constants(n < 2 ? 2 : n);
  AdvantageLimit out;
  out.value_at_S = (model.delta + model.gamma * cm.b_n) / cn.a_n;

  const bool has_delta = model.delta > 0.0;
  const bool has_gamma = model.gamma > 0.0;
  switch (model.base.law()) {
    case Law::kGaussian:
      out.diverges = has_delta || has_gamma;
      out.limit = 0.0;
      break;
    case Law::kLognormal:
      // a_n -> infinity, so a pure location advantage washes out.
      out.diverges = has_gamma;
      out.limit = 0.0;
      break;
    case Law::kExponential:
      out.diverges = has_gamma;
      out.limit = model.delta;
      break;
    case Law::kPareto:
    case Law::kStudentT: {
      // delta/a_n -> 0 and gamma b_m/a_n -> gamma nu alpha_eta.
      const double nu = model.base.nu();
      const double alpha = khintchine_constants(model.eta, 1.0 / nu).alpha;
      out.diverges = false;
      out.limit = model.gamma * nu * alpha;
      break;
    }
  }
  if (out.diverges) out.limit = 0.0;
  return out;
}

LimitClassification classify_limit(const RedGreenModel& model) {
  const bool has_delta = model.delta > 0.0;
  const bool has_gamma = model.gamma > 0.0;

  if (!has_delta && !has_gamma)
    return {LimitRegime::kNeutral, model.eta, 1.0, "no red advantage: odds ratio tends to 1"};

  switch (model.base.law()) {
    case Law::kGaussian:
      return {LimitRegime::kRedDominates, 1.0, 1.0,
              "gumbel limit with a_n -> 0: any location or scale advantage dominates"};
    case Law::kLognormal:
      if (has_gamma)
        return {LimitRegime::kRedDominates, 1.0, 1.0,
                "gumbel limit with a_n -> infinity: scale advantage dominates"};
      return {LimitRegime::kNeutral, model.eta, 1.0,
              "gumbel limit with a_n -> infinity: location advantage washes out"};
    case Law::kExponential:
      if (has_gamma)
        return {LimitRegime::kRedDominates, 1.0, 1.0,
                "gumbel limit with constant a_n: scale advantage dominates"};
      else {
        // Finite advantage delta shifts Gumbel odds by exp(delta).
        const double up = std::exp(model.delta);
        return {LimitRegime::kFiniteOdds, pu_from_odds(up, model.eta), up,
                "gumbel limit with constant a_n: location advantage gives odds exp(delta)"};
      }
    case Law::kPareto:
    case Law::kStudentT: {
      const double up = upsilon_star(model.gamma, model.base.nu());
      if (!has_gamma)
        return {LimitRegime::kNeutral, model.eta, 1.0,
                "frechet limit: location advantage washes out, odds ratio tends to 1"};
      return {LimitRegime::kFiniteOdds, pu_from_odds(up, model.eta), up,
              "frechet limit: odds ratio tends to (1+gamma)^nu"};
    }
  }
  return {LimitRegime::kNeutral, model.eta, 1.0, "unreachable"};
}

}  // namespace evrisk
