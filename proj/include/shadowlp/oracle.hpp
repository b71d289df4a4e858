#pragma once

#include <variant>
#include <vector>

#include "shadowlp/lp_model.hpp"

namespace shadowlp::oracle {

/// Vertices keyed by exact point; the basis is the first one found.
struct VertexSet {
  std::vector<BasicSolution> vertices;
};

/// Every BFS by solving all n-subsets. Throws PreconditionError on rank
/// deficiency and GuardExceededError when C(m, n) > 10^6.
VertexSet enumerate_vertices(const LinearProgram& lp);

struct Optimum {
  RationalVector point;
  Rational value;
};
struct Infeasible {};
struct UnboundedSuspicion {
  RationalVector ray;
};
using BruteForceResult = std::variant<Optimum, Infeasible, UnboundedSuspicion>;

/// Works for any rank: the lineality space is cut by exact complement rows.
BruteForceResult brute_force_optimum(const LinearProgram& lp);

struct SimplexOptimal {
  BasicSolution vertex;
  Rational value;
  std::size_t pivots = 0;
};
struct SimplexUnbounded {
  RationalVector ray;
};
using SimplexResult = std::variant<SimplexOptimal, SimplexUnbounded>;

/// Textbook simplex on the inequality form with Bland's lowest-index rule.
/// Throws PreconditionError when start is not a BFS.
SimplexResult reference_simplex(const LinearProgram& lp, const BasicSolution& start);

}  // namespace shadowlp::oracle
