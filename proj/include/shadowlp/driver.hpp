#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "shadowlp/linalg.hpp"
#include "shadowlp/lp_model.hpp"
#include "shadowlp/phase1.hpp"
#include "shadowlp/randomness.hpp"
#include "shadowlp/shadow_walk.hpp"

namespace shadowlp {

/// Float view of a face of the LP after fixing some rows, in rotated
/// coordinates. origin[i] is the row index in the unreduced LP.
struct ReducedLp {
  RealMatrix rows;
  RealVector rhs;
  RealVector objective;  // unit, or zero when c0 is normal to the face
  std::vector<std::size_t> origin;

  std::size_t dim() const { return rows.cols(); }
  std::optional<std::size_t> local_index(std::size_t original_row) const;
};

/// Float view of a normalized LP, before any reduction.
ReducedLp reduced_view(const LinearProgram& lp);

struct ReductionEntry {
  Rotation Q;
  std::size_t fixed_row;  // original row index
  double fixed_rhs;
  std::size_t dim_before;
};

using ReductionStack = std::vector<ReductionEntry>;

enum class ScheduleKind { N32, N52, Phase1 };

/**
 * phi_i = 2^i n^{3/2} (N32), 2^i n^{5/2} (N52) or 2^i sqrt(m) (n+m)^{3/2}
 * (Phase1, with m, n of the original LP).
 */
struct PhiSchedule {
  ScheduleKind kind = ScheduleKind::N32;
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t index = 0;

  double phi_at(std::size_t i) const;
  double phi() const { return phi_at(index); }
  void advance() { ++index; }
};

/// Index k of the maximal mu in sum_k mu_k a'_k = c; ties go to the smallest k.
/// Throws SingularMatrixError.
std::size_t identify_basis_element(const RealMatrix& basis_rows, const RealVector& c);

/// Fixes local row i at equality and drops one coordinate. Rows that become
/// zero (parallel to row i) are removed. Throws PreconditionError when the
/// row is not unit or the dimension is already 1.
ReducedLp reduce_dimension(const ReducedLp& lp, std::size_t i, ReductionStack& stack);

/// Reinserts fixed coordinates and rotates back, last reduction first.
RealVector lift_solution(const ReductionStack& stack, const RealVector& x_reduced);
/// Same for a direction (fixed coordinates are 0).
RealVector lift_direction(const ReductionStack& stack, const RealVector& v_reduced);

/// Exact test that c0 lies in the normal cone of x.point. Degenerate
/// vertices are handled by Bland pivots among tight rows.
bool is_optimal(const LinearProgram& lp, const BasicSolution& x);

struct SolverConfig {
  std::uint64_t seed = 1;
  DrawMode mode = DrawMode::Continuous;
  std::optional<unsigned> bits;        // dyadic bits per draw; default from bit_budget
  std::optional<double> known_delta;   // only sizes bit counts
  ScheduleKind schedule = ScheduleKind::N32;
  double cap_constant = 16.0;
  std::size_t max_doublings = 64;
  bool record_paths = false;
};

/// delta-hat(n, phi) = 2 n^{3/2} / phi, capped at 1.
double delta_hat(std::size_t n, double phi);
/// 8n * ceil(K (m n^2 / d^2 + m sqrt(n) phi / d)) with d = delta-hat.
std::size_t pivot_cap(std::size_t m, std::size_t n, double phi, double cap_constant);
/// Bits per draw used in dyadic mode for this LP and phi.
unsigned draw_bits(const SolverConfig& cfg, std::size_t m, std::size_t n, double phi);

struct RoundRecord {
  std::size_t dim = 0;
  std::size_t pivots = 0;
  std::optional<std::size_t> fixed_row;
  ShadowPath path;
};

struct RepeatedResult {
  std::optional<BasicSolution> candidate;  // empty when a walk hit its cap
  std::vector<RoundRecord> rounds;
  std::size_t pivots = 0;
};

/// Up to n rounds of perturb, walk, identify, reduce. lp must be normalized,
/// full rank and bounded; x0 a BFS of it.
RepeatedResult repeated_shadow_vertex(const LinearProgram& lp, const BasicSolution& x0, double phi,
                                      const SolverConfig& cfg, RandomStream& rng);

struct SolveStats {
  std::size_t pivots = 0;
  std::size_t phase1_pivots = 0;
  std::uint64_t bits = 0;
  std::size_t doublings = 0;
  double accepted_phi = 0.0;
  std::size_t phase1_doublings = 0;
  std::vector<std::size_t> pivots_per_round;
  std::vector<ShadowPath> paths;  // filled when record_paths
};

/// Schedule loop on a normalized, bounded LP from a BFS. Returns a vertex
/// certified by is_optimal. Throws ScheduleExhaustedError.
BasicSolution solve_from_bfs(const LinearProgram& lp, const BasicSolution& x0, const SolverConfig& cfg,
                             PhiSchedule schedule, RandomStream& rng, SolveStats& stats, bool phase1 = false);

struct Optimal {
  BasicSolution vertex;
  Rational value;
};
struct Unbounded {
  RationalVector ray;
};
struct Infeasible {
  Rational phase1_value;
};

struct SolveOutcome {
  std::variant<Optimal, Unbounded, Infeasible> result;
  SolveStats stats;
};

/// Full pipeline: rank raise, normalize, Phase 1 unless start is given,
/// bound, schedule loop, unboundedness assertion.
SolveOutcome solve(const LinearProgram& lp, const SolverConfig& cfg,
                   const std::optional<BasicSolution>& start = std::nullopt);

/// Phase 1 alone: a BFS of lp or infeasibility. lp must have full rank.
Phase1Result find_bfs(const LinearProgram& lp, const SolverConfig& cfg, RandomStream& rng, SolveStats& stats);

}  // namespace shadowlp
