#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "shadowlp/lp_model.hpp"
#include "shadowlp/matrix.hpp"
#include "shadowlp/rational.hpp"

namespace shadowlp {

/// Value of a linear function at a vertex of the lexicographically perturbed
/// polytope: real part plus coefficients of eps^1, eps^2, ... (sparse, sorted
/// by power).
struct LexValue {
  Rational real;
  std::vector<std::pair<std::size_t, Rational>> eps;
};

/// -1, 0, +1 in lexicographic order.
int compare(const LexValue& a, const LexValue& b);

struct PathStep {
  std::size_t entering_row = 0;
  std::size_t leaving_row = 0;
  Rational slope;  // w^T d / c^T d of the traversed edge
  LexValue c_value;
  RationalVector vertex;
  std::vector<std::size_t> basis;
};

struct ShadowPath {
  RationalVector start_vertex;
  std::vector<std::size_t> start_basis;
  LexValue start_c_value;
  std::vector<PathStep> steps;
};

/**
 * Dense exact tableau for max c^T x over {A x <= b}, with rows of the
 * current basis B kept tight. Stores A B^{-1} together with B^{-1} and the
 * objective rows c^T B^{-1}, w^T B^{-1}; a pivot is one column operation on
 * these, O((m + n) n).
 *
 * Degeneracy is resolved by the symbolic perturbation b_i + eps^(rank(i)+1).
 * The rank order is re-derived whenever objectives are installed: nonbasic
 * rows first, then basic rows, which makes the current basis lex-feasible.
 *
 * Locked basis positions never leave; walking with locked rows walks the
 * face on which those rows are tight.
 */
class Tableau {
 public:
  Tableau(RationalMatrix A, RationalVector b, std::vector<std::size_t> basis);

  std::size_t m() const { return A_.rows(); }
  std::size_t n() const { return A_.cols(); }

  void set_objectives(RationalVector c, RationalVector w);
  void lock_row(std::size_t row);
  bool is_locked_position(std::size_t pos) const { return locked_[pos]; }
  std::size_t locked_count() const;

  const std::vector<std::size_t>& basis() const { return basis_; }
  std::optional<std::size_t> position_of(std::size_t row) const;
  RationalVector point() const { return x_; }
  BasicSolution solution() const { return {x_, basis_}; }

  const Rational& slack(std::size_t row) const { return slack_[row]; }
  /// Coefficient of basis position pos in c = sum_j yc_j a_{B_j}.
  const Rational& c_cost(std::size_t pos) const { return yc_[pos]; }
  const Rational& w_cost(std::size_t pos) const { return yw_[pos]; }
  /// a_row^T d for the edge leaving basis position pos.
  Rational rate(std::size_t row, std::size_t pos) const { return -table_(row, pos); }

  LexValue c_value() const;

  /// Lexicographic minimum-ratio row for the edge leaving position pos;
  /// nullopt when no row blocks (the edge is a ray).
  std::optional<std::size_t> ratio_test(std::size_t pos) const;

  /// Replaces basis position pos with row.
  void pivot(std::size_t pos, std::size_t row);

  std::size_t pivots() const { return pivots_; }
  std::uint64_t operations() const { return operations_; }

 private:
  std::vector<std::pair<std::size_t, Rational>> lex_slack(std::size_t row) const;
  void recompute_point();

  RationalMatrix A_;
  RationalVector b_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> position_;  // row -> basis position or npos
  std::vector<bool> locked_;
  RationalMatrix table_;  // A B^{-1}
  RationalMatrix binv_;   // B^{-1}
  RationalVector yc_, yw_;
  RationalVector x_, slack_;
  std::vector<std::size_t> order_;  // row -> perturbation rank
  std::size_t pivots_ = 0;
  std::uint64_t operations_ = 0;
};

/// Chosen edge: basis position to drop, row that enters, edge slope.
struct Edge {
  std::size_t position;
  std::size_t entering_row;
  Rational slope;
};

/// Among improving edges (c^T d > 0) picks the smallest slope w^T d / c^T d;
/// ties go to the lowest entering row. nullopt at the c-optimum. Throws
/// UnboundedEdgeError when the chosen edge is unblocked.
std::optional<Edge> select_edge(const Tableau& tab);

struct AtOptimum {};
std::variant<PathStep, AtOptimum> shadow_pivot(Tableau& tab);

struct Finished {
  BasicSolution solution;
  ShadowPath path;
};
struct CapExceeded {
  ShadowPath path;
};
using WalkResult = std::variant<Finished, CapExceeded>;

/// Pivots until the c-optimum or until pivot_cap pivots were made.
WalkResult walk(Tableau& tab, std::optional<std::size_t> pivot_cap);

/// One shadow vertex walk from x0 on lp with the given objectives.
WalkResult shadow_walk(const LinearProgram& lp, const BasicSolution& x0, const RationalVector& c,
                       const RationalVector& w, std::optional<std::size_t> pivot_cap);

/// Unit rows (float view, re-normalized) of x0's basis.
std::vector<RealVector> tight_rows_at(const LinearProgram& lp, const BasicSolution& x0);

/// CSV: pivot_index,entering_row,leaving_row,slope,c_value
std::string path_csv(const ShadowPath& path);

}  // namespace shadowlp
