#include <doctest.h>

#include "helpers.hpp"
#include "shadowlp/errors.hpp"
#include "shadowlp/harness.hpp"
#include "shadowlp/oracle.hpp"

using namespace shadowlp;

TEST_CASE("TU generators produce Delta = 1 and feasible instances") {
  struct Case {
    TuKind kind;
    std::size_t m, n;
  };
  for (const Case& c : {Case{TuKind::Incidence, 6, 3}, Case{TuKind::Incidence, 8, 3}, Case{TuKind::Interval, 5, 3},
                        Case{TuKind::Interval, 7, 4}, Case{TuKind::Network, 8, 3}, Case{TuKind::Network, 10, 4}}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      LinearProgram lp = generate_tu_instance(c.kind, c.m, c.n, seed);
      CHECK(lp.m() == c.m);
      CHECK(lp.n() == c.n);
      CHECK(lp.is_integral());
      CHECK(max_subdeterminant(lp.A) == 1);
      CHECK(std::holds_alternative<oracle::Optimum>(oracle::brute_force_optimum(lp)));
      CHECK(is_feasible(lp, std::get<oracle::Optimum>(oracle::brute_force_optimum(lp)).point));
    }
  }
  CHECK_THROWS_AS(generate_tu_instance(TuKind::Incidence, 3, 2, 1), PreconditionError);
}

TEST_CASE("path-graph incidence has Delta = 1") {
  // Four nodes, three edges; rows are nodes.
  RationalMatrix path = testing::rmat({{1, 0, 0}, {-1, 1, 0}, {0, -1, 1}, {0, 0, -1}});
  CHECK(max_subdeterminant(path) == 1);
}

TEST_CASE("generators are deterministic in the seed") {
  CHECK(serialize_lp(generate_tu_instance(TuKind::Interval, 6, 3, 9)) ==
        serialize_lp(generate_tu_instance(TuKind::Interval, 6, 3, 9)));
  CHECK(serialize_lp(generate_random_integer(6, 3, 9)) == serialize_lp(generate_random_integer(6, 3, 9)));
  CHECK(serialize_lp(generate_random_integer(6, 3, 9)) != serialize_lp(generate_random_integer(6, 3, 10)));
  LinearProgram r = generate_random_integer(7, 4, 3, -2, 2);
  for (std::size_t i = 0; i < r.m(); ++i)
    for (std::size_t j = 0; j < r.n(); ++j) CHECK(abs(r.A(i, j)) <= 2);
}

TEST_CASE("trial seeds") {
  CHECK(trial_seed(7, 0) == 7);
  CHECK(trial_seed(7, 5) == (7 ^ 5));
}

TEST_CASE("50 trials on 4x2 TU instances agree with the oracle") {
  ExperimentConfig cfg;
  cfg.generator = GeneratorKind::TuIncidence;
  cfg.sizes = {{4, 2}};
  cfg.trials = 50;
  cfg.seed = 3;
  ExperimentResult res = run_experiments(cfg);
  REQUIRE(res.records.size() == 50);
  for (const auto& r : res.records) {
    CHECK(r.oracle_agrees == std::optional<bool>(true));
    CHECK(r.outcome == TrialOutcome::Optimal);
    CHECK(r.Delta == std::optional<Rational>(Rational(1)));
  }
  CHECK(res.summary_csv.rfind("m,n,delta,Delta,mean_pivots,median_pivots,max_pivots,oracle_agree_rate,mean_bits", 0) ==
        0);
  CHECK(res.summary_csv.find(",1.000000,") != std::string::npos);
}

TEST_CASE("random-bit mode has finite pivot counts and agrees") {
  ExperimentConfig cfg;
  cfg.generator = GeneratorKind::RandomInteger;
  cfg.sizes = {{5, 2}, {6, 3}};
  cfg.trials = 10;
  cfg.mode = DrawMode::Dyadic;
  cfg.seed = 11;
  ExperimentResult res = run_experiments(cfg);
  for (const auto& r : res.records) {
    CHECK(r.oracle_agrees == std::optional<bool>(true));
    CHECK(r.bits > 0);
  }
}

TEST_CASE("summary CSV is identical across runs and thread counts") {
  ExperimentConfig cfg;
  cfg.generator = GeneratorKind::TuInterval;
  cfg.sizes = {{5, 3}, {7, 4}};
  cfg.trials = 6;
  cfg.seed = 17;
  cfg.threads = 1;
  std::string one = run_experiments(cfg).summary_csv;
  cfg.threads = 4;
  std::string four = run_experiments(cfg).summary_csv;
  CHECK(one == four);
  CHECK(one == run_experiments(cfg).summary_csv);
  CHECK(std::count(one.begin(), one.end(), '\n') == 3);
}
