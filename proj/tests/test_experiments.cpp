#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "evrisk/errors.hpp"
#include "evrisk/experiments.hpp"
#include "evrisk/io.hpp"

using namespace evrisk;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("audit round simulation") {
  const RedGreenModel model(ReturnDistribution::gaussian(), 0.1, 0.5, 0.2);
  const auto round = simulate_audit_round(model, 10000, 200, 42);
  CHECK(round.sample.k() == 200);
  CHECK(round.sample.k_red() >= 5);
  CHECK(round.sample.k_green() >= 5);
  for (double e : round.sample.red_excesses) CHECK(e > 0.0);
  for (double e : round.sample.green_excesses) CHECK(e > 0.0);

  const auto again = simulate_audit_round(model, 10000, 200, 42);
  CHECK(again.sample.threshold == round.sample.threshold);
  CHECK(again.sample.red_excesses == round.sample.red_excesses);
  CHECK(again.max_is_red == round.max_is_red);
}

TEST_CASE("single-repeat table run is a boolean sanity path") {
  Table1Config cfg;
  cfg.repeats = 1;
  cfg.R_pu = 2000;
  cfg.seed = 7;
  const auto rows = run_table1(cfg);
  REQUIRE(rows.size() == 8);
  for (const auto& row : rows) {
    CHECK((row.p_u_true == 0.0 || row.p_u_true == 1.0));
    CHECK(row.p_u_prime_mean >= 0.0);
    CHECK(row.p_u_prime_mean <= 1.0);
    CHECK(row.repeats_used + row.fit_failures == 1);
  }
  CHECK(rows[0].base == "normal");
  CHECK(rows[4].base == "t12");
}

TEST_CASE("table run is deterministic and parallel-invariant") {
  Table1Config cfg;
  cfg.repeats = 6;
  cfg.R_pu = 2000;
  cfg.seed = 11;
  cfg.jobs = 1;
  const auto a = run_table1(cfg);
  cfg.jobs = 4;
  const auto b = run_table1(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].p_u_true == b[i].p_u_true);
    CHECK(a[i].p_u_prime_mean == b[i].p_u_prime_mean);
    CHECK(a[i].p_u_hat_mean == b[i].p_u_hat_mean);
    CHECK(a[i].power == b[i].power);
  }
}

TEST_CASE("figure1 equals the closed form") {
  const double nus[] = {7.0, 12.0};
  const double gammas[] = {0.0, 0.05, 0.5};
  const auto cells = figure1_data(nus, gammas);
  REQUIRE(cells.size() == 6);
  CHECK(cells[0].upsilon_star == 1.0);  // gamma = 0
  CHECK(cells[1].upsilon_star == doctest::Approx(1.4071004226562505).epsilon(1e-14));
  CHECK(cells[2].upsilon_star == doctest::Approx(17.0859375).epsilon(1e-14));
  for (const auto& c : cells)
    CHECK(c.upsilon_star == doctest::Approx(upsilon_star(c.gamma, c.nu)).epsilon(1e-15));
}

TEST_CASE("figure2 rows carry the asymptote for the t base only") {
  Figure2Config cfg;
  cfg.S_grid = {100, 1000};
  cfg.R = 4000;
  cfg.seed = 3;
  const auto rows = figure2_data(cfg);
  REQUIRE(rows.size() == 12);  // 2 bases x 3 configs x 2 sizes
  for (const auto& r : rows) {
    if (r.base == "normal") {
      CHECK(!r.has_asymptote);
    } else {
      CHECK(r.has_asymptote);
      CHECK(r.asymptote ==
            doctest::Approx(limiting_pu_pareto(cfg.eta, r.gamma, 12.0)).epsilon(1e-12));
    }
    CHECK(r.estimate.p_u >= 0.0);
    CHECK(r.estimate.p_u <= 1.0);
  }
}

TEST_CASE("format_double round-trips and stays short") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  for (double x : {0.4976585431638342, 1e-300, 17.0859375, -0.0031, 3.0}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("csv writer") {
  const auto path = temp_file("evrisk_test_write.csv");
  write_csv(path, {"a", "b"}, {{"1", "2"}, {"3", "4"}});
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "a,b\n1,2\n3,4\n");
  CHECK_THROWS_AS(write_csv(path, {"a", "b"}, {{"1"}}), DataError);
  fs::remove(path);
}

TEST_CASE("file hashing is content-determined") {
  const auto p1 = temp_file("evrisk_hash_a.txt");
  const auto p2 = temp_file("evrisk_hash_b.txt");
  std::ofstream(p1) << "identical";
  std::ofstream(p2) << "identical";
  CHECK(file_hash_hex(p1) == file_hash_hex(p2));
  std::ofstream(p2, std::ios::app) << "!";
  CHECK(file_hash_hex(p1) != file_hash_hex(p2));
  fs::remove(p1);
  fs::remove(p2);
}

TEST_CASE("returns csv parsing") {
  const auto path = temp_file("evrisk_returns.csv");
  {
    std::ofstream out(path);
    out << "return,label\n";
    // 7 rows; k = 5 keeps the top five, threshold = 6th value
    out << "10.0,red\n9.0,green\n8.0,green\n7.0,red\n6.5,green\n5.0,green\n4.0,red\n";
  }
  const auto sample = parse_returns_csv(path, 5);
  CHECK(sample.threshold == 5.0);
  CHECK(sample.k() == 5);
  CHECK(sample.k_red() == 2);
  CHECK(sample.k_green() == 3);
  CHECK(sample.red_excesses[0] == doctest::Approx(5.0));

  CHECK_THROWS_AS(parse_returns_csv(path, 7), DataError);  // needs k+1 rows

  {
    std::ofstream out(path);
    out << "return,label\n1.0,red\n2.0,blue\n";
  }
  CHECK_THROWS_WITH_AS(parse_returns_csv(path, 1),
                       doctest::Contains(":3:"), DataError);

  {
    std::ofstream out(path);
    out << "value,label\n1.0,red\n";
  }
  CHECK_THROWS_AS(parse_returns_csv(path, 1), DataError);
  fs::remove(path);
}

TEST_CASE("returns csv breaks threshold ties by input order") {
  const auto path = temp_file("evrisk_returns_ties.csv");
  {
    std::ofstream out(path);
    out << "return,label\n";
    out << "5.0,red\n5.0,green\n5.0,green\n3.0,red\n";
  }
  // k = 2: the first two 5.0 rows win; threshold is the third 5.0
  const auto sample = parse_returns_csv(path, 2);
  CHECK(sample.threshold == 5.0);
  CHECK(sample.k_red() == 1);
  CHECK(sample.k_green() == 1);
  CHECK(sample.red_excesses[0] == 0.0);
  fs::remove(path);
}

TEST_SUITE_END();
