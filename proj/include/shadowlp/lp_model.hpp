#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shadowlp/matrix.hpp"
#include "shadowlp/rational.hpp"

namespace shadowlp {

struct LpFlags {
  bool normalized = false;
  bool full_rank = false;
  bool bounded = false;
};

/**
 * max { c0^T x | A x <= b } over exact rationals.
 *
 * Normalization never touches the exact data: it records the Euclidean row
 * norms in row_scales and exposes unit rows through the float view.
 */
struct LinearProgram {
  RationalMatrix A;
  RationalVector b;
  RationalVector c0;
  RealVector row_scales;  // 1.0 until normalized
  double objective_scale = 1.0;
  LpFlags flags;
  std::vector<std::size_t> box_rows;
  std::vector<std::size_t> synthetic_rows;

  std::size_t m() const { return A.rows(); }
  std::size_t n() const { return A.cols(); }

  /// Throws LpError when an invariant is broken.
  void validate() const;

  RealMatrix float_rows() const;
  RealVector float_rhs() const;
  RealVector float_objective() const;

  bool is_box_row(std::size_t i) const;
  bool is_synthetic_row(std::size_t i) const;
  bool is_integral() const;
};

/// Builds and validates an LP with all flags cleared.
LinearProgram make_lp(RationalMatrix A, RationalVector b, RationalVector c0);

/// A vertex: point plus an ordered basis of n independent rows tight at it.
struct BasicSolution {
  RationalVector point;
  std::vector<std::size_t> basis;
};

/// Throws PreconditionError unless sol is a basic feasible solution of lp.
void check_basic_feasible(const LinearProgram& lp, const BasicSolution& sol);

bool is_feasible(const LinearProgram& lp, const RationalVector& x);

std::vector<std::size_t> tight_rows(const LinearProgram& lp, const RationalVector& x);

// --- text format --------------------------------------------------------

LinearProgram parse_lp(std::string_view text);
std::string serialize_lp(const LinearProgram& lp);

/// RFC-4180 CSV of [A | b] with header col0..coln (coln is b).
std::string matrix_csv(const LinearProgram& lp);

// --- preprocessing ------------------------------------------------------

LinearProgram normalize(const LinearProgram& lp);

/// Maps solutions of a rank-raised LP back to the original.
struct RankBackMap {
  std::size_t appended_rows = 0;
  std::size_t original_rows = 0;
  std::size_t original_dim = 0;

  /// Same point; synthetic rows are dropped from the basis.
  BasicSolution lift(const BasicSolution& sol) const;
};

struct RankRaised {
  LinearProgram lp;
  RankBackMap back_map;
};

/// Objective leaves the row span: the LP is unbounded whenever it is feasible.
struct UnboundedRay {
  RationalVector direction;  // A d = 0, c0^T d > 0
};

using RankRaiseResult = std::variant<RankRaised, UnboundedRay>;

enum class RankRaiseKind { OrthonormalComplement, UnitVectors };

/// Appends +-o_k (orthonormal complement, delta preserving).
RankRaiseResult raise_rank_delta(const LinearProgram& lp);
/// Appends +-e_i (integral A only, Delta preserving).
RankRaiseResult raise_rank_Delta(const LinearProgram& lp);

/// The transformation behind both raise_rank_* ops, applied without looking
/// at the objective. Used when feasibility must be decided first.
RankRaised append_rank_rows(const LinearProgram& lp, RankRaiseKind kind);

/// Exact ray in the lineality space along which c0 increases, if any.
std::optional<RationalVector> lineality_ray(const LinearProgram& lp);

/// Total encoding length: per entry one sign bit plus the binary lengths of
/// numerator and denominator.
std::size_t encoding_length(const RationalMatrix& A, const RationalVector& b);
Integer denominator_lcm(const RationalMatrix& A);

/// ceil(sqrt n) * 2^(enc(A,b) - n^2) * lcm(A)^n.
Rational box_radius(const LinearProgram& lp);

/// Appends -R_i <= a_i x <= R_i for the first n independent rows,
/// R_i = r * ||a_i||_1 (>= r ||a_i||).
LinearProgram bound_polytope(const LinearProgram& lp);

struct Bounded {};
struct UnboundedCertificate {
  RationalVector ray;  // non-box rows: a_i^T ray <= 0, c0^T ray > 0
};

std::variant<Bounded, UnboundedCertificate> assert_unbounded_if_box_tight(const BasicSolution& vertex,
                                                                           const LinearProgram& lp);

/// Moves a feasible point to a vertex along null directions of its tight rows.
/// The objective is unchanged when the point is optimal.
BasicSolution purify_to_vertex(const LinearProgram& lp, const RationalVector& x);

/// Drops box rows (and their bookkeeping) from a bounded LP.
LinearProgram strip_box(const LinearProgram& lp);

}  // namespace shadowlp
