#include "shadowlp/phase1.hpp"

#include "shadowlp/errors.hpp"
#include "shadowlp/linalg.hpp"

namespace shadowlp {

Phase1Problem build_phase1(const LinearProgram& lp) {
  const std::size_t m = lp.m(), n = lp.n();
  auto anchors = independent_rows(lp.A);
  if (anchors.size() != n) throw PreconditionError("build_phase1 needs rank(A) = n");

  RationalMatrix B(2 * m, n + m);
  RationalVector rhs(2 * m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) B(i, j) = lp.A(i, j);
    B(i, n + i) = -1;
    B(m + i, n + i) = -1;
    rhs[i] = lp.b[i];
  }
  RationalVector c(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) c[n + i] = -1;

  Phase1Problem p;
  p.lp = make_lp(std::move(B), std::move(rhs), std::move(c));
  p.anchors = anchors;
  p.original_m = m;
  p.original_n = n;

  RationalVector bbar(n);
  for (std::size_t k = 0; k < n; ++k) bbar[k] = lp.b[anchors[k]];
  auto xbar = solve_square(SquareSystem<Rational>{lp.A.select_rows(anchors), bbar});
  if (!xbar) throw LpError("build_phase1: anchor rows are singular");

  RationalVector point(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) point[j] = (*xbar)[j];
  std::vector<bool> is_anchor(m, false);
  for (auto a : anchors) is_anchor[a] = true;
  std::vector<std::size_t> basis;
  for (auto a : anchors) basis.push_back(a);
  for (auto a : anchors) basis.push_back(m + a);
  for (std::size_t i = 0; i < m; ++i) {
    Rational ax = 0;
    for (std::size_t j = 0; j < n; ++j) ax += lp.A(i, j) * (*xbar)[j];
    Rational excess = ax - lp.b[i];
    if (excess > 0) point[n + i] = excess;
    if (is_anchor[i]) continue;
    basis.push_back(excess > 0 ? i : m + i);
  }
  p.initial = BasicSolution{std::move(point), std::move(basis)};
  return p;
}

Phase1Result extract_bfs(const BasicSolution& phase1_solution, const Phase1Problem& problem, const LinearProgram& lp) {
  const std::size_t n = problem.original_n, m = problem.original_m;
  if (lp.n() != n || lp.m() != m) throw DimensionError("extract_bfs: LP does not match the Phase-1 problem");
  if (phase1_solution.point.size() != n + m || !is_feasible(problem.lp, phase1_solution.point))
    throw PreconditionError("extract_bfs: point is not feasible for LP'");
  Rational value = 0;
  for (std::size_t i = 0; i < m; ++i) value += phase1_solution.point[n + i];
  if (value > 0) return Phase1Infeasible{value};
  RationalVector x(phase1_solution.point.begin(), phase1_solution.point.begin() + static_cast<std::ptrdiff_t>(n));
  // Objective-free copy: purification may then move either way along a null direction.
  LinearProgram plain = lp;
  plain.c0.assign(n, Rational(0));
  return purify_to_vertex(plain, x);
}

}  // namespace shadowlp
