#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "shadowlp/rational.hpp"

namespace shadowlp {

enum class DrawMode { Continuous, Dyadic };

struct RngConfig {
  std::uint64_t seed = 1;
  DrawMode mode = DrawMode::Continuous;
  unsigned bits_per_draw = 53;  // used in dyadic mode
  double phi = 1.0;
};

/**
 * Single-owner random stream. Every draw consumes exactly one word of the
 * main generator whatever the mode, so paired runs in the two modes see the
 * same underlying X and the dyadic value is floor(X 2^k) / 2^k.
 */
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : main_(seed), extra_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  /// j / 2^k with j uniform on {0, ..., 2^k - 1}.
  Rational dyadic(unsigned k);
  /// Top 53 bits of one word, in [0, 1).
  double continuous();
  /// Draw in [0, 1) under the given mode.
  double unit(DrawMode mode, unsigned k);

  std::uint64_t bits_consumed() const { return bits_; }

 private:
  std::mt19937_64 main_;
  std::mt19937_64 extra_;  // supplies bits beyond 64 in dyadic mode
  std::uint64_t bits_ = 0;
};

/// Throws PreconditionError for k = 0.
Rational dyadic_unit_draw(RandomStream& rng, unsigned k);

/// ceil(6n log2 m + 6 log2 n + 3 log2 phi + 3 log2(1/delta) + 12).
std::size_t bit_budget(std::size_t m, std::size_t n, double phi, double delta);

struct PerturbedObjective {
  RealVector c;
  std::vector<std::pair<double, double>> intervals;
};

/// c_i uniform on I_i, |I_i| = 1/phi, I_i inside [-1, 1] and containing (c0)_i.
PerturbedObjective perturb_objective(const RealVector& c0, const RngConfig& cfg, RandomStream& rng);

/// Coordinates uniform on (0, 1] via 1 - [0, 1) draws.
RealVector draw_lambda(std::size_t n, const RngConfig& cfg, RandomStream& rng);

/// w = -sum_k lambda_k u_k.
RealVector cone_objective(const std::vector<RealVector>& rows, const RealVector& lambda);

}  // namespace shadowlp
