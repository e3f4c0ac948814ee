// evrisk command-line interface.
//
// Every subcommand is a seeded, reproducible batch run: outputs land in
// --out as CSV/JSON plus a manifest.json recording the resolved
// configuration and a hash of every file written. Identical flags and seed
// give byte-identical outputs for any --jobs value.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evrisk/asymptotics.hpp"
#include "evrisk/errors.hpp"
#include "evrisk/experiments.hpp"
#include "evrisk/extremogram.hpp"
#include "evrisk/gpd.hpp"
#include "evrisk/io.hpp"
#include "evrisk/monte_carlo.hpp"
#include "evrisk/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct CommonOptions {
  std::string out_dir = "evrisk-out";
  std::string format = "csv";
  std::uint64_t seed = 1;
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", opt.format, "Output format for result records")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "Random seed; all randomness derives from it")
      ->capture_default_str();
  cmd->add_option("--jobs", opt.jobs, "Worker threads; never changes results")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

struct DistOptions {
  std::string dist = "normal";
  double nu = 12.0;
};

void add_dist(CLI::App* cmd, DistOptions& opt) {
  cmd->add_option("--dist", opt.dist,
                  "Base law: normal|lognormal|exponential|pareto|t")
      ->capture_default_str();
  cmd->add_option("--nu", opt.nu, "Tail parameter for pareto/t")->capture_default_str();
}

// Writer that collects (file, hash) pairs for the manifest.
class RunOutput {
 public:
  RunOutput(const CommonOptions& opt, std::string subcommand, json params)
      : opt_(opt), subcommand_(std::move(subcommand)), params_(std::move(params)) {
    fs::create_directories(opt_.out_dir);
  }

  fs::path dir() const { return opt_.out_dir; }

  void write_table(const std::string& stem, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
    if (opt_.format == "json") {
      json arr = json::array();
      for (const auto& row : rows) {
        json obj;
        for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
        arr.push_back(obj);
      }
      write_json(stem, arr);
    } else {
      const fs::path path = dir() / (stem + ".csv");
      evrisk::write_csv(path, header, rows);
      outputs_.push_back(path);
    }
  }

  void write_json(const std::string& stem, const json& value) {
    const fs::path path = dir() / (stem + ".json");
    std::ofstream out(path, std::ios::binary);
    out << value.dump(2) << "\n";
    if (!out) throw evrisk::DataError("write failed: " + path.string());
    outputs_.push_back(path);
  }

  // Parallelism is an execution detail, not part of the configuration
  // identity, so --jobs stays out of the manifest and outputs compare
  // byte-identical across jobs settings.
  void finish() {
    json manifest;
    manifest["tool"] = "evrisk";
    manifest["version"] = evrisk::kVersion;
    manifest["subcommand"] = subcommand_;
    manifest["seed"] = opt_.seed;
    manifest["format"] = opt_.format;
    manifest["params"] = params_;
    json files = json::array();
    for (const fs::path& p : outputs_) {
      files.push_back({{"file", p.filename().string()},
                       {"fnv1a64", evrisk::file_hash_hex(p)},
                       {"bytes", fs::file_size(p)}});
    }
    manifest["outputs"] = files;
    const fs::path path = dir() / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    out << manifest.dump(2) << "\n";
    if (!out) throw evrisk::DataError("write failed: " + path.string());
  }

 private:
  CommonOptions opt_;
  std::string subcommand_;
  json params_;
  std::vector<fs::path> outputs_;
};

std::string fmt(double x) { return evrisk::format_double(x); }

std::string bound_name(evrisk::OddsBound b) {
  switch (b) {
    case evrisk::OddsBound::kLower: return "lower";
    case evrisk::OddsBound::kUpper: return "upper";
    default: return "none";
  }
}

std::vector<std::string> estimate_row(std::uint64_t S, const evrisk::PuEstimate& e) {
  return {std::to_string(S),    std::to_string(e.m),        std::to_string(e.n),
          fmt(e.p_u),           fmt(e.upsilon),             fmt(e.std_error),
          bound_name(e.upsilon_bound)};
}

const std::vector<std::string> kEstimateHeader = {
    "S", "m", "n", "p_u", "upsilon", "std_error", "upsilon_bound"};

std::vector<std::uint64_t> parse_grid(const std::string& csv) {
  std::vector<std::uint64_t> grid;
  std::string token;
  std::stringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    grid.push_back(std::stoull(token));
  }
  if (grid.empty()) throw CLI::ValidationError("--S-grid", "grid is empty");
  return grid;
}

int run_asymptotic(const CommonOptions& common, const DistOptions& dist_opt, double eta,
                   double delta, double gamma, std::uint64_t S) {
  const auto base = evrisk::ReturnDistribution::parse(dist_opt.dist, dist_opt.nu);
  const evrisk::RedGreenModel model(base, eta, delta, gamma);
  const auto cls = evrisk::classify_limit(model);
  const auto adv = evrisk::advantage_limit(model, S);

  json result;
  result["dist"] = base.name();
  result["eta"] = eta;
  result["delta"] = delta;
  result["gamma"] = gamma;
  switch (cls.regime) {
    case evrisk::LimitRegime::kFiniteOdds: result["regime"] = "finite_odds"; break;
    case evrisk::LimitRegime::kRedDominates: result["regime"] = "red_dominates"; break;
    case evrisk::LimitRegime::kNeutral: result["regime"] = "neutral"; break;
  }
  result["reason"] = cls.reason;
  if (cls.regime != evrisk::LimitRegime::kRedDominates) {
    result["upsilon_star"] = cls.upsilon_star;
    result["pu_limit"] = cls.pu_limit;
  }
  result["advantage_at_S"] = adv.value_at_S;
  result["advantage_diverges"] = adv.diverges;
  if (!adv.diverges) result["advantage_limit"] = adv.limit;
  result["khintchine_alpha"] = evrisk::khintchine_constants(eta, base.tail_index()).alpha;
  result["khintchine_beta"] = evrisk::khintchine_constants(eta, base.tail_index()).beta;

  RunOutput out(common, "asymptotic",
                {{"dist", base.name()},
                 {"eta", eta},
                 {"delta", delta},
                 {"gamma", gamma},
                 {"S", S}});
  out.write_json("asymptotic", result);
  out.finish();

  if (cls.regime == evrisk::LimitRegime::kRedDominates) {
    std::cout << "regime: red dominates (p_U -> 1, odds ratio unbounded)\n";
  } else {
    std::cout << "Upsilon* = " << fmt(cls.upsilon_star)
              << "  p_U* = " << fmt(cls.pu_limit) << "\n";
  }
  std::cout << "reason: " << cls.reason << "\n";
  return 0;
}

int run_pu_sim(const CommonOptions& common, const DistOptions& dist_opt, double eta,
               double delta, double gamma, std::uint64_t S, std::size_t R,
               const std::string& method, std::size_t replicates) {
  const auto base = evrisk::ReturnDistribution::parse(dist_opt.dist, dist_opt.nu);
  const evrisk::RedGreenModel model(base, eta, delta, gamma);
  evrisk::PuSimConfig cfg{model, S, R, common.seed};
  const evrisk::PuEstimate est = method == "direct"
                                     ? evrisk::pu_direct(cfg, replicates, common.jobs)
                                     : evrisk::pu_antithetic(cfg, common.jobs);

  RunOutput out(common, "pu-sim",
                {{"dist", base.name()},
                 {"eta", eta},
                 {"delta", delta},
                 {"gamma", gamma},
                 {"S", S},
                 {"R", R},
                 {"method", method},
                 {"replicates", replicates}});
  out.write_table("pu_sim", kEstimateHeader, {estimate_row(S, est)});
  out.finish();

  std::cout << "p_U = " << fmt(est.p_u) << " (se " << fmt(est.std_error) << ")  "
            << "Upsilon = " << fmt(est.upsilon);
  if (est.upsilon_bound != evrisk::OddsBound::kNone)
    std::cout << " (" << bound_name(est.upsilon_bound) << " bound)";
  std::cout << "  [m=" << est.m << " n=" << est.n << "]\n";
  return 0;
}

int run_sweep(const CommonOptions& common, const DistOptions& dist_opt, double eta,
              double delta, double gamma, const std::string& grid_csv, std::size_t R) {
  const auto base = evrisk::ReturnDistribution::parse(dist_opt.dist, dist_opt.nu);
  const evrisk::RedGreenModel model(base, eta, delta, gamma);
  const auto grid = parse_grid(grid_csv);
  const auto points = evrisk::pu_sweep(model, grid, R, common.seed, common.jobs);

  std::vector<std::vector<std::string>> rows;
  for (const auto& [S, est] : points) rows.push_back(estimate_row(S, est));
  RunOutput out(common, "sweep",
                {{"dist", base.name()},
                 {"eta", eta},
                 {"delta", delta},
                 {"gamma", gamma},
                 {"S_grid", grid},
                 {"R", R}});
  out.write_table("sweep", kEstimateHeader, rows);
  out.finish();
  for (const auto& [S, est] : points)
    std::cout << "S=" << S << "  p_U=" << fmt(est.p_u) << "  Upsilon=" << fmt(est.upsilon)
              << "\n";
  return 0;
}

int run_table1(const CommonOptions& common, std::size_t repeats, std::uint64_t S,
               double eta, std::size_t k, std::size_t R) {
  evrisk::Table1Config cfg;
  cfg.repeats = repeats;
  cfg.S = S;
  cfg.eta = eta;
  cfg.k = k;
  cfg.R_pu = R;
  cfg.seed = common.seed;
  cfg.jobs = common.jobs;
  const auto rows = evrisk::run_table1(cfg);

  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows)
    cells.push_back({r.base, fmt(r.delta), fmt(r.gamma), fmt(r.p_u_true),
                     fmt(r.p_u_prime_mean), fmt(r.p_u_hat_mean), fmt(r.power),
                     std::to_string(r.fit_failures), std::to_string(r.repeats_used)});
  RunOutput out(common, "table1",
                {{"repeats", repeats}, {"S", S}, {"eta", eta}, {"k", k}, {"R", R}});
  out.write_table("table1",
                  {"base", "delta", "gamma", "p_u", "p_u_prime", "p_u_hat", "power",
                   "fit_failures", "repeats_used"},
                  cells);
  out.finish();

  std::printf("%-8s %6s %6s | %7s %9s %8s %7s\n", "base", "delta", "gamma", "p_u",
              "p_u_prime", "p_u_hat", "power");
  for (const auto& r : rows)
    std::printf("%-8s %6.2f %6.2f | %7.3f %9.3f %8.3f %7.3f\n", r.base.c_str(), r.delta,
                r.gamma, r.p_u_true, r.p_u_prime_mean, r.p_u_hat_mean, r.power);
  return 0;
}

int run_figure1(const CommonOptions& common, double nu_min, double nu_max, double nu_step,
                const std::string& gamma_csv) {
  std::vector<double> nu_grid;
  for (double nu = nu_min; nu <= nu_max + 1e-12; nu += nu_step) nu_grid.push_back(nu);
  std::vector<double> gamma_grid;
  {
    std::stringstream ss(gamma_csv);
    std::string token;
    while (std::getline(ss, token, ','))
      if (!token.empty()) gamma_grid.push_back(std::stod(token));
  }
  const auto cells = evrisk::figure1_data(nu_grid, gamma_grid);
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : cells)
    rows.push_back({fmt(c.nu), fmt(c.gamma), fmt(c.upsilon_star)});
  RunOutput out(common, "figure1",
                {{"nu_min", nu_min},
                 {"nu_max", nu_max},
                 {"nu_step", nu_step},
                 {"gamma_grid", gamma_grid}});
  out.write_table("figure1", {"nu", "gamma", "upsilon_star"}, rows);
  out.finish();
  std::cout << "wrote " << cells.size() << " cells\n";
  return 0;
}

int run_figure2(const CommonOptions& common, const std::string& grid_csv, double eta,
                std::size_t R, double t_nu) {
  evrisk::Figure2Config cfg;
  cfg.S_grid = parse_grid(grid_csv);
  cfg.eta = eta;
  cfg.R = R;
  cfg.seed = common.seed;
  cfg.jobs = common.jobs;
  cfg.t_nu = t_nu;
  const auto rows = evrisk::figure2_data(cfg);

  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.base, fmt(r.delta), fmt(r.gamma), std::to_string(r.S),
                     fmt(r.estimate.p_u), fmt(r.estimate.upsilon),
                     fmt(r.estimate.std_error), bound_name(r.estimate.upsilon_bound),
                     r.has_asymptote ? fmt(r.asymptote) : ""});
  }
  RunOutput out(common, "figure2",
                {{"S_grid", cfg.S_grid}, {"eta", eta}, {"R", R}, {"t_nu", t_nu}});
  out.write_table("figure2",
                  {"base", "delta", "gamma", "S", "p_u", "upsilon", "std_error",
                   "upsilon_bound", "asymptote"},
                  cells);
  out.finish();
  std::cout << "wrote " << rows.size() << " points\n";
  return 0;
}

int run_fit_gpd(const CommonOptions& common, const std::string& input, std::size_t k,
                std::size_t R, double upsilon_override) {
  const evrisk::TopKSample sample = evrisk::parse_returns_csv(input, k);
  const evrisk::GpdFit fit = evrisk::fit_gpd_shared_shape(sample);
  const auto pu = evrisk::estimate_pu_gpd(fit, sample, R, common.seed, common.jobs);
  const auto audit = evrisk::audit_estimates(fit, sample, pu.p_u_hat, upsilon_override);

  json result;
  result["threshold"] = sample.threshold;
  result["k"] = sample.k();
  result["k_red"] = sample.k_red();
  result["k_green"] = sample.k_green();
  result["xi_hat"] = fit.xi_hat;
  result["tau_r_hat"] = fit.tau_r_hat;
  result["tau_g_hat"] = fit.tau_g_hat;
  result["loglik_full"] = fit.loglik_full;
  result["loglik_null"] = fit.loglik_null;
  result["lr_stat"] = fit.lr_stat;
  result["p_value"] = fit.p_value;
  result["xi_at_boundary"] = fit.xi_at_boundary;
  result["p_u_prime"] = audit.p_u_prime;
  result["p_u_hat"] = audit.p_u_hat;
  result["zero_count_redraws"] = pu.zero_count_redraws;
  result["upsilon_used"] = audit.upsilon_used;
  result["eta_hat"] = audit.eta_hat;

  RunOutput out(common, "fit-gpd",
                {{"input", input}, {"k", k}, {"R", R}, {"upsilon", upsilon_override}});
  out.write_json("gpd_fit", result);
  out.finish();

  std::cout << "xi_hat = " << fmt(fit.xi_hat) << "  tau_R = " << fmt(fit.tau_r_hat)
            << "  tau_G = " << fmt(fit.tau_g_hat) << "\n"
            << "lr = " << fmt(fit.lr_stat) << " (p = " << fmt(fit.p_value) << ")\n"
            << "p_U' = " << fmt(audit.p_u_prime) << "  p_U_hat = " << fmt(audit.p_u_hat)
            << "  eta_hat = " << fmt(audit.eta_hat) << "\n";
  if (fit.xi_at_boundary)
    std::cout << "warning: xi_hat at the search boundary; fit may be irregular\n";
  return 0;
}

int run_estimate_eta(const CommonOptions& common, double pu, double upsilon) {
  const double eta_hat = evrisk::estimate_eta(pu, upsilon);
  RunOutput out(common, "estimate-eta", {{"pu", pu}, {"upsilon", upsilon}});
  out.write_json("estimate_eta",
                 {{"pu", pu}, {"upsilon", upsilon}, {"eta_hat", eta_hat}});
  out.finish();
  std::cout << "eta_hat = " << fmt(eta_hat) << "\n";
  return 0;
}

int run_extremogram(const CommonOptions& common, const std::string& input,
                    std::size_t knots, double grid_delta, double u, std::size_t max_lag,
                    std::size_t bootstrap) {
  evrisk::ExtremogramEstimate est;
  json params = {{"u", u},
                 {"max_lag", max_lag},
                 {"grid_delta", grid_delta},
                 {"bootstrap", bootstrap}};
  if (!input.empty()) {
    // series file: columns s,value; only the values are used, the grid is
    // assumed equally spaced
    std::ifstream in(input);
    if (!in) throw evrisk::DataError("cannot open: " + input);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> series;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos)
        throw evrisk::DataError(input + ":" + std::to_string(line_no) +
                                ": expected s,value");
      series.push_back(std::stod(line.substr(comma + 1)));
    }
    est = evrisk::extremogram_series(series, grid_delta, u, max_lag, common.seed,
                                     common.jobs, bootstrap);
    params["input"] = input;
  } else {
    const auto process = evrisk::make_interpolated_process(knots, common.seed, grid_delta);
    est = evrisk::extremogram(process, u, max_lag, common.seed, common.jobs, bootstrap);
    params["knots"] = knots;
  }

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < est.lags.size(); ++i)
    rows.push_back({fmt(est.lags[i]), fmt(est.chi[i]), fmt(est.ci_low[i]),
                    fmt(est.ci_high[i]), std::to_string(est.pair_counts[i])});
  RunOutput out(common, "extremogram", params);
  out.write_table("extremogram", {"lag", "chi", "ci_low", "ci_high", "pairs"}, rows);
  out.finish();

  std::size_t sparse = 0;
  for (std::size_t i = 1; i < est.pair_counts.size(); ++i)
    if (est.pair_counts[i] < 500) ++sparse;
  if (sparse > 0)
    std::cout << "warning: " << sparse
              << " lag(s) rest on fewer than 500 pairs; estimates there are noisy\n";
  try {
    const auto eff = evrisk::effective_independent_count(est, 1.0 - u);
    std::cout << "decorrelation distance ~ " << fmt(eff.decorrelation_distance)
              << "  effective independent count ~ " << fmt(eff.effective_count) << "\n";
  } catch (const evrisk::NumericError&) {
    std::cout << "chi stays above the independence baseline over all lags\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme-value analytics for selection bias in optimized strategy "
               "spaces: limiting odds ratios, finite-S Monte Carlo, generalized "
               "Pareto audit inference, and extremal-dependence diagnostics."};
  app.require_subcommand(1);

  CommonOptions common;
  DistOptions dist_opt;
  double eta = 0.1, delta = 0.0, gamma = 0.0;
  std::uint64_t S = 10000;
  std::size_t R = 100000;

  auto* asym = app.add_subcommand("asymptotic", "Closed-form large-S classification");
  add_common(asym, common);
  add_dist(asym, dist_opt);
  asym->add_option("--eta", eta, "Red fraction of the strategy space")
      ->capture_default_str();
  asym->add_option("--delta", delta, "Red mean advantage")->capture_default_str();
  asym->add_option("--gamma", gamma, "Red volatility inflation")->capture_default_str();
  asym->add_option("--S", S, "Strategy-space size for the advantage evaluation")
      ->capture_default_str();

  auto* pusim = app.add_subcommand("pu-sim", "Monte Carlo estimate of Pr(M_R > M_G)");
  std::string method = "antithetic";
  std::size_t replicates = 100000;
  add_common(pusim, common);
  add_dist(pusim, dist_opt);
  pusim->add_option("--eta", eta, "Red fraction")->capture_default_str();
  pusim->add_option("--delta", delta, "Red mean advantage")->capture_default_str();
  pusim->add_option("--gamma", gamma, "Red volatility inflation")->capture_default_str();
  pusim->add_option("--S", S, "Strategy-space size")->capture_default_str();
  pusim->add_option("--R", R, "Monte Carlo replicates")->capture_default_str();
  pusim->add_option("--method", method, "antithetic|direct")
      ->check(CLI::IsMember({"antithetic", "direct"}))
      ->capture_default_str();
  pusim->add_option("--replicates", replicates, "Replicates for the direct method")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "p_U and odds ratio across an S grid");
  std::string s_grid = "10,100,1000,10000,100000,1000000,10000000,100000000";
  add_common(sweep, common);
  add_dist(sweep, dist_opt);
  sweep->add_option("--eta", eta, "Red fraction")->capture_default_str();
  sweep->add_option("--delta", delta, "Red mean advantage")->capture_default_str();
  sweep->add_option("--gamma", gamma, "Red volatility inflation")->capture_default_str();
  sweep->add_option("--S-grid", s_grid, "Comma-separated ascending S values")
      ->capture_default_str();
  sweep->add_option("--R", R, "Monte Carlo replicates per point")->capture_default_str();

  auto* table1 = app.add_subcommand(
      "table1", "Simulation study over eight (base, delta, gamma) configurations");
  std::size_t repeats = 10000, k = 200;
  add_common(table1, common);
  table1->add_option("--repeats", repeats, "Simulated samples per configuration")
      ->capture_default_str();
  table1->add_option("--S", S, "Strategy-space size per sample")->capture_default_str();
  table1->add_option("--eta", eta, "Red fraction")->capture_default_str();
  table1->add_option("--k", k, "Top-k sample size for the audit fit")
      ->capture_default_str();
  table1->add_option("--R", R, "Replicates inside each GPD p_U estimate")
      ->capture_default_str();

  auto* figure1 = app.add_subcommand("figure1", "Limiting odds ratio over (nu, gamma)");
  double nu_min = 1.0, nu_max = 25.0, nu_step = 0.25;
  std::string gamma_csv = "0.05,0.1,0.2,0.3,0.5";
  add_common(figure1, common);
  figure1->add_option("--nu-min", nu_min, "Smallest tail index")->capture_default_str();
  figure1->add_option("--nu-max", nu_max, "Largest tail index")->capture_default_str();
  figure1->add_option("--nu-step", nu_step, "Tail index step")->capture_default_str();
  figure1->add_option("--gamma-grid", gamma_csv, "Comma-separated gamma values")
      ->capture_default_str();

  auto* figure2 = app.add_subcommand(
      "figure2", "p_U and odds ratio against S for normal and t bases");
  double t_nu = 12.0;
  add_common(figure2, common);
  figure2->add_option("--S-grid", s_grid, "Comma-separated ascending S values")
      ->capture_default_str();
  figure2->add_option("--eta", eta, "Red fraction")->capture_default_str();
  figure2->add_option("--R", R, "Monte Carlo replicates per point")->capture_default_str();
  figure2->add_option("--t-nu", t_nu, "Degrees of freedom of the t base")
      ->capture_default_str();

  auto* fitgpd = app.add_subcommand(
      "fit-gpd", "Fit shared-shape generalized Pareto tails to a labeled returns file");
  std::string input;
  double upsilon_override = 0.0;
  add_common(fitgpd, common);
  fitgpd->add_option("--input", input, "CSV with header 'return,label'")->required();
  fitgpd->add_option("--k", k, "Number of top returns to keep")->capture_default_str();
  fitgpd->add_option("--R", R, "Replicates for the p_U estimate")->capture_default_str();
  fitgpd->add_option("--upsilon", upsilon_override,
                     "Known odds ratio for the eta estimate (default: from tail ratio)");

  auto* esteta = app.add_subcommand("estimate-eta", "Red fraction from p_U and odds ratio");
  double pu_in = 0.0, upsilon_in = 1.0;
  add_common(esteta, common);
  esteta->add_option("--pu", pu_in, "Observed red fraction among top returns")->required();
  esteta->add_option("--upsilon", upsilon_in, "Assumed odds ratio")->required();

  auto* extrem = app.add_subcommand(
      "extremogram", "Extremal dependence across lags of a strategy-return series");
  std::string series_input;
  std::size_t knots = 1001, max_lag = 40, bootstrap = 500;
  double u_level = 0.95, grid_delta = 0.1;
  add_common(extrem, common);
  extrem->add_option("--input", series_input, "CSV with header s,value (else simulate)");
  extrem->add_option("--knots", knots, "Knots of the simulated interpolation process")
      ->capture_default_str();
  extrem->add_option("--grid-delta", grid_delta, "Evaluation grid spacing")
      ->capture_default_str();
  extrem->add_option("--u", u_level, "Quantile level")->capture_default_str();
  extrem->add_option("--max-lag", max_lag, "Largest lag in grid steps")
      ->capture_default_str();
  extrem->add_option("--bootstrap", bootstrap, "Bootstrap resamples for the intervals")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (asym->parsed())
      return run_asymptotic(common, dist_opt, eta, delta, gamma, S);
    if (pusim->parsed())
      return run_pu_sim(common, dist_opt, eta, delta, gamma, S, R, method, replicates);
    if (sweep->parsed())
      return run_sweep(common, dist_opt, eta, delta, gamma, s_grid, R);
    if (table1->parsed()) return run_table1(common, repeats, S, eta, k, R);
    if (figure1->parsed())
      return run_figure1(common, nu_min, nu_max, nu_step, gamma_csv);
    if (figure2->parsed()) return run_figure2(common, s_grid, eta, R, t_nu);
    if (fitgpd->parsed()) return run_fit_gpd(common, input, k, R, upsilon_override);
    if (esteta->parsed()) return run_estimate_eta(common, pu_in, upsilon_in);
    if (extrem->parsed())
      return run_extremogram(common, series_input, knots, grid_delta, u_level, max_lag,
                             bootstrap);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const evrisk::DataError& e) {
    std::cerr << nlohmann::json{{"error", "data"}, {"message", e.what()}}.dump() << "\n";
    return kExitData;
  } catch (const evrisk::NumericError& e) {
    std::cerr << nlohmann::json{{"error", "numeric"}, {"message", e.what()}}.dump()
              << "\n";
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    std::cerr << nlohmann::json{{"error", "numeric"}, {"message", e.what()}}.dump()
              << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump()
              << "\n";
    return 1;
  }
}
