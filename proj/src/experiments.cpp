#include "evrisk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evrisk/errors.hpp"
#include "evrisk/parallel.hpp"
#include "evrisk/rng.hpp"

namespace evrisk {

namespace {

constexpr std::uint64_t kRoundStream = 0x51;
constexpr std::uint64_t kPuHatStream = 0x52;
constexpr double kChi2Crit5pc = 3.841458820694124;  // chi^2_1 95% point

struct LabeledReturn {
  double value;
  bool red;
};

}  // namespace

AuditRound simulate_audit_round(const RedGreenModel& model, std::uint64_t S,
                                std::size_t k, std::uint64_t seed) {
  if (k + 1 > S) throw std::domain_error("simulate_audit_round: need S > k");
  const auto m = static_cast<std::uint64_t>(
      std::llround(model.eta * static_cast<double>(S)));
  if (m < 1 || S - m < 1)
    throw std::domain_error("simulate_audit_round: degenerate red/green split");

  Rng rng(substream(seed, kRoundStream));
  std::vector<LabeledReturn> returns(S);
  const double scale = 1.0 + model.gamma;
  for (std::uint64_t i = 0; i < S; ++i) {
    const double z = model.base.quantile(rng.uniform_open());
    if (i < m)
      returns[i] = {model.delta + scale * z, true};
    else
      returns[i] = {z, false};
  }

  auto by_value_desc = [](const LabeledReturn& a, const LabeledReturn& b) {
    return a.value > b.value;
  };
  std::nth_element(returns.begin(), returns.begin() + static_cast<std::ptrdiff_t>(k),
                   returns.end(), by_value_desc);
  const double threshold = returns[k].value;
  std::partial_sort(returns.begin(), returns.begin() + 1,
                    returns.begin() + static_cast<std::ptrdiff_t>(k), by_value_desc);

  AuditRound round;
  round.sample.threshold = threshold;
  round.max_is_red = returns[0].red;
  for (std::size_t i = 0; i < k; ++i) {
    const double excess = returns[i].value - threshold;
    if (returns[i].red)
      round.sample.red_excesses.push_back(excess);
    else
      round.sample.green_excesses.push_back(excess);
  }
  return round;
}

std::vector<Table1Row> run_table1(const Table1Config& cfg) {
  if (cfg.repeats < 1) throw std::domain_error("run_table1: repeats must be >= 1");
  struct Spec {
    const char* base;
    double delta;
    double gamma;
  };
  const Spec specs[] = {
      {"normal", 0.0, 0.0}, {"normal", 0.5, 0.0}, {"normal", 0.0, 0.2},
      {"normal", 0.5, 0.2}, {"t12", 0.0, 0.0},    {"t12", 0.5, 0.0},
      {"t12", 0.0, 0.2},    {"t12", 0.5, 0.2},
  };

  std::vector<Table1Row> rows;
  rows.reserve(8);
  for (std::size_t c = 0; c < 8; ++c) {
    const Spec& spec = specs[c];
    const ReturnDistribution base = spec.base == std::string("normal")
                                        ? ReturnDistribution::gaussian()
                                        : ReturnDistribution::student_t(12.0);
    const RedGreenModel model(base, cfg.eta, spec.delta, spec.gamma);

    struct RepeatResult {
      bool ok = false;
      bool max_red = false;
      double p_u_prime = 0.0;
      double p_u_hat = 0.0;
      bool reject = false;
    };
    std::vector<RepeatResult> results(cfg.repeats);

    parallel_for(cfg.repeats, cfg.jobs, [&](std::size_t rep) {
      const std::uint64_t rep_seed = substream(cfg.seed, c, rep);
      RepeatResult& out = results[rep];
      try {
        const AuditRound round = simulate_audit_round(model, cfg.S, cfg.k, rep_seed);
        const GpdFit fit = fit_gpd_shared_shape(round.sample);
        const PuGpdResult pu =
            estimate_pu_gpd(fit, round.sample, cfg.R_pu, substream(rep_seed, kPuHatStream));
        out.max_red = round.max_is_red;
        out.p_u_prime = static_cast<double>(round.sample.k_red()) /
                        static_cast<double>(round.sample.k());
        out.p_u_hat = pu.p_u_hat;
        out.reject = fit.lr_stat > kChi2Crit5pc;
        out.ok = true;
      } catch (const DataError&) {
        out.ok = false;  // e.g. fewer than 5 excesses on one side
      } catch (const FitError&) {
        out.ok = false;
      }
    });

    Table1Row row;
    row.base = spec.base;
    row.delta = spec.delta;
    row.gamma = spec.gamma;
    std::size_t used = 0, max_red = 0, rejects = 0;
    double sum_prime = 0.0, sum_hat = 0.0;
    for (const RepeatResult& r : results) {
      if (!r.ok) continue;
      ++used;
      max_red += r.max_red;
      rejects += r.reject;
      sum_prime += r.p_u_prime;
      sum_hat += r.p_u_hat;
    }
    if (used == 0) throw FitError("run_table1: every repeat failed to fit");
    const auto used_d = static_cast<double>(used);
    row.p_u_true = static_cast<double>(max_red) / used_d;
    row.p_u_prime_mean = sum_prime / used_d;
    row.p_u_hat_mean = sum_hat / used_d;
    row.power = static_cast<double>(rejects) / used_d;
    row.fit_failures = cfg.repeats - used;
    row.repeats_used = used;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Figure1Cell> figure1_data(std::span<const double> nu_grid,
                                      std::span<const double> gamma_grid) {
  if (nu_grid.empty() || gamma_grid.empty())
    throw std::domain_error("figure1_data: grids must be nonempty");
  std::vector<Figure1Cell> cells;
  cells.reserve(nu_grid.size() * gamma_grid.size());
  for (double nu : nu_grid)
    for (double gamma : gamma_grid)
      cells.push_back({nu, gamma, upsilon_star(gamma, nu)});
  return cells;
}

std::vector<Figure2Row> figure2_data(const Figure2Config& cfg) {
  if (cfg.S_grid.empty()) throw std::domain_error("figure2_data: S grid is empty");
  struct Spec {
    double delta;
    double gamma;
  };
  const Spec configs[] = {{0.0, 0.2}, {0.5, 0.2}, {0.5, 0.0}};
  const ReturnDistribution bases[] = {ReturnDistribution::gaussian(),
                                      ReturnDistribution::student_t(cfg.t_nu)};
  const char* names[] = {"normal", "t12"};

  std::vector<Figure2Row> rows;
  std::uint64_t point = 0;
  for (int b = 0; b < 2; ++b) {
    for (const Spec& spec : configs) {
      const RedGreenModel model(bases[b], cfg.eta, spec.delta, spec.gamma);
      for (std::uint64_t S : cfg.S_grid) {
        PuSimConfig sim{model, S, cfg.R, substream(cfg.seed, point++)};
        Figure2Row row;
        row.base = names[b];
        row.delta = spec.delta;
        row.gamma = spec.gamma;
        row.S = S;
        row.estimate = pu_antithetic(sim, cfg.jobs);
        row.has_asymptote = bases[b].tail_index() > 0.0;
        row.asymptote = row.has_asymptote
                            ? limiting_pu_pareto(cfg.eta, spec.gamma, bases[b].nu())
                            : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace evrisk
