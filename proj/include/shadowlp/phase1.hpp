#pragma once

#include <variant>
#include <vector>

#include "shadowlp/lp_model.hpp"

namespace shadowlp {

/**
 * LP' over (x, y) in R^{n+m}:  A x - y <= b,  -y <= 0,  maximize -sum y.
 * Rows 0..m-1 are the A-rows, rows m..2m-1 the y-rows.
 */
struct Phase1Problem {
  LinearProgram lp;
  BasicSolution initial;
  std::vector<std::size_t> anchors;  // rows of A playing the role of A-bar
  std::size_t original_m = 0;
  std::size_t original_n = 0;
};

/// Throws PreconditionError when rank(A) < n.
Phase1Problem build_phase1(const LinearProgram& lp);

struct Phase1Infeasible {
  Rational value;  // optimal sum of y, > 0
};

using Phase1Result = std::variant<BasicSolution, Phase1Infeasible>;

/// From an optimal point of LP' to a BFS of lp (or infeasibility).
/// Throws PreconditionError when the point is not feasible for LP'.
Phase1Result extract_bfs(const BasicSolution& phase1_solution, const Phase1Problem& problem, const LinearProgram& lp);

}  // namespace shadowlp
