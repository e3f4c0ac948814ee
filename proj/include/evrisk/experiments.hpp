#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "evrisk/gpd.hpp"
#include "evrisk/monte_carlo.hpp"

namespace evrisk {

// One simulated audit round: S returns (red = delta + (1+gamma) Z), the
// top-k excess sample, and whether the single best return was red.
struct AuditRound {
  TopKSample sample;
  bool max_is_red;
};

AuditRound simulate_audit_round(const RedGreenModel& model, std::uint64_t S,
                                std::size_t k, std::uint64_t seed);

struct Table1Config {
  std::size_t repeats = 10000;
  std::uint64_t S = 10000;
  double eta = 0.1;
  std::size_t k = 200;
  std::size_t R_pu = 100000;  // replicates inside each GPD p_U estimate
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct Table1Row {
  std::string base;  // "normal" or "t12"
  double delta;
  double gamma;
  double p_u_true;       // fraction of repeats where the global max was red
  double p_u_prime_mean; // mean of k_R / k
  double p_u_hat_mean;   // mean of the GPD Monte Carlo estimate
  double power;          // LR rejection rate at nominal 5%
  std::size_t fit_failures;
  std::size_t repeats_used;
};

// The eight (base, delta, gamma) configurations of the simulation study:
// {normal, t12} x {(0,0), (0.5,0), (0,0.2), (0.5,0.2)}.
std::vector<Table1Row> run_table1(const Table1Config& cfg);

struct Figure1Cell {
  double nu;
  double gamma;
  double upsilon_star;
};

std::vector<Figure1Cell> figure1_data(std::span<const double> nu_grid,
                                      std::span<const double> gamma_grid);

struct Figure2Row {
  std::string base;
  double delta;
  double gamma;
  std::uint64_t S;
  PuEstimate estimate;
  double asymptote;      // limiting p_U for Pareto-tailed bases, else NaN
  bool has_asymptote;
};

struct Figure2Config {
  std::vector<std::uint64_t> S_grid;
  double eta = 0.1;
  std::size_t R = 100000;
  std::uint64_t seed = 1;
  int jobs = 1;
  double t_nu = 12.0;
};

// p_U and the odds ratio against S for {normal, t12} under the three
// configurations (0, 0.2), (0.5, 0.2), (0.5, 0).
std::vector<Figure2Row> figure2_data(const Figure2Config& cfg);

}  // namespace evrisk
