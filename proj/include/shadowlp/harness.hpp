#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shadowlp/driver.hpp"
#include "shadowlp/lp_model.hpp"

namespace shadowlp {

enum class TuKind { Incidence, Interval, Network };

/**
 * Integral TU instance with a bounded, nonempty feasible set.
 * Incidence and Network need m >= 2n, Interval needs m >= n + 1.
 */
LinearProgram generate_tu_instance(TuKind kind, std::size_t m, std::size_t n, std::uint64_t seed);

/// Entries uniform in [lo, hi] (zero rows redrawn); c0 nonzero.
LinearProgram generate_random_integer(std::size_t m, std::size_t n, std::uint64_t seed, int lo = -3, int hi = 3);

enum class GeneratorKind { TuIncidence, TuInterval, TuNetwork, RandomInteger, File };

struct ExperimentConfig {
  GeneratorKind generator = GeneratorKind::TuIncidence;
  std::vector<std::pair<std::size_t, std::size_t>> sizes;  // (m, n)
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  ScheduleKind schedule = ScheduleKind::N32;
  DrawMode mode = DrawMode::Continuous;
  std::optional<unsigned> bits;
  double cap_constant = 16.0;
  bool verify = true;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::string file;         // GeneratorKind::File
};

enum class TrialOutcome { Optimal, Unbounded, Infeasible, Error };

struct TrialRecord {
  std::string instance_id;
  std::size_t m = 0, n = 0;
  std::optional<double> delta;
  std::optional<Rational> Delta;
  double accepted_phi = 0.0;
  std::size_t pivots = 0;
  std::vector<std::size_t> pivots_per_round;
  std::uint64_t bits = 0;
  TrialOutcome outcome = TrialOutcome::Error;
  std::optional<bool> oracle_agrees;  // set when verification ran
  double wall_seconds = 0.0;
  std::string error;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  // in (size, trial) order
  std::string summary_csv;
};

/// Per-trial seed: base seed xor the global trial index.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial_index);

ExperimentResult run_experiments(const ExperimentConfig& cfg);

/// m,n,delta,Delta,mean_pivots,median_pivots,max_pivots,oracle_agree_rate,mean_bits,pivot_ratio
/// (pivot_ratio: mean of pivots / (m n^3 / delta^2) over trials with a computed delta)
std::string summary_csv(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records);

/// True when outcome and exact optimal value match the brute-force oracle.
bool agrees_with_oracle(const LinearProgram& lp, const SolveOutcome& outcome);

}  // namespace shadowlp
