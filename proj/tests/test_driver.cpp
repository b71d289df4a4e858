#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "shadowlp/driver.hpp"
#include "shadowlp/errors.hpp"
#include "shadowlp/harness.hpp"
#include "shadowlp/oracle.hpp"

using namespace shadowlp;
using testing::lp_of;
using testing::rvec;

namespace {

Rational value_of(const SolveOutcome& out) { return std::get<Optimal>(out.result).value; }

// Normalized, full rank, with at least one vertex.
LinearProgram random_pointed(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  for (;;) {
    RationalMatrix A = testing::random_integer_matrix(rng, m, n, -3, 3);
    if (rank(A) < n) continue;
    RationalVector b(m), c(n);
    for (auto& v : b) v = static_cast<long>(rng() % 7) - 1;
    for (auto& v : c) v = static_cast<long>(rng() % 7) - 3;
    if (std::all_of(c.begin(), c.end(), [](const Rational& v) { return v == 0; })) c[0] = 1;
    LinearProgram lp = normalize(make_lp(A, b, c));
    if (!oracle::enumerate_vertices(lp).vertices.empty()) return lp;
  }
}

LinearProgram random_boxed(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  return bound_polytope(random_pointed(rng, m, n));
}

}  // namespace

TEST_CASE("identify_basis_element") {
  CHECK(identify_basis_element(RealMatrix{{1, 0}, {0, 1}}, {0.9, 0.1}) == 0);
  CHECK(identify_basis_element(RealMatrix{{1, 0}, {0, 1}}, {0.1, 0.9}) == 1);
  // c = mu1 e1 + mu2 (e1 + e2)/sqrt2 with c = (1, 0.2): mu2 = 0.2 sqrt2, mu1 = 0.8.
  const double s = std::sqrt(0.5);
  CHECK(identify_basis_element(RealMatrix{{1, 0}, {s, s}}, {1.0, 0.2}) == 0);
  // c = (1, 0.9): mu2 = 0.9 sqrt2 ~ 1.27 > mu1 = 0.1.
  CHECK(identify_basis_element(RealMatrix{{1, 0}, {s, s}}, {1.0, 0.9}) == 1);
  CHECK(identify_basis_element(RealMatrix{{1, 0}, {0, 1}}, {0.5, 0.5}) == 0);
  CHECK_THROWS_AS(identify_basis_element(RealMatrix{{1, 0}, {1, 0}}, {1, 0}), SingularMatrixError);
}

TEST_CASE("PhiSchedule") {
  PhiSchedule n32{ScheduleKind::N32, 10, 4, 0};
  CHECK(n32.phi() == doctest::Approx(8.0));
  n32.advance();
  CHECK(n32.phi() == doctest::Approx(16.0));
  CHECK(n32.phi_at(5) == doctest::Approx(256.0));
  PhiSchedule n52{ScheduleKind::N52, 10, 4, 0};
  CHECK(n52.phi() == doctest::Approx(32.0));
  PhiSchedule p1{ScheduleKind::Phase1, 4, 5, 0};
  CHECK(p1.phi() == doctest::Approx(2.0 * 27.0));
  for (std::size_t i = 0; i < 10; ++i) CHECK(p1.phi_at(i + 1) == doctest::Approx(2.0 * p1.phi_at(i)));
}

TEST_CASE("pivot cap and bit count") {
  CHECK(delta_hat(4, 8.0) == 1.0);
  CHECK(delta_hat(4, 32.0) == doctest::Approx(0.5));
  // d = 1: 8 * 2 * ceil(1 * (3*4 + 3*sqrt2*2)) = 16 * ceil(20.485) = 336.
  CHECK(pivot_cap(3, 2, 2.0, 1.0) == 336);
  CHECK(pivot_cap(3, 2, 2.0, 0.0) == 0);
  SolverConfig cfg;
  CHECK(draw_bits(cfg, 2, 1, 2.0) == bit_budget(2, 1, 2.0, 1.0));
  cfg.known_delta = 0.5;
  CHECK(draw_bits(cfg, 4, 2, 4.0) == 51);
  cfg.bits = 7;
  CHECK(draw_bits(cfg, 4, 2, 4.0) == 7);
}

TEST_CASE("reduce_dimension and lift on the unit square") {
  ReducedLp sq = reduced_view(normalize(testing::unit_square()));
  ReductionStack stack;
  ReducedLp red = reduce_dimension(sq, 0, stack);
  REQUIRE(red.dim() == 1);
  REQUIRE(red.rows.rows() == 2);
  CHECK(red.origin == std::vector<std::size_t>{2, 3});
  // y <= 1 and -y <= 0, possibly with the axis flipped.
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(red.rows(i, 0)) == doctest::Approx(1.0));
  CHECK(red.rows(0, 0) == doctest::Approx(-red.rows(1, 0)));
  double hi = red.rhs[0] / red.rows(0, 0), lo = -red.rhs[1] / -red.rows(1, 0);
  CHECK(std::max(hi, lo) - std::min(hi, lo) == doctest::Approx(1.0));
  CHECK(stack.size() == 1);
  CHECK(stack[0].fixed_row == 0);
  CHECK(red.objective.size() == 1);
  CHECK(std::fabs(red.objective[0]) == doctest::Approx(1.0));

  // The 1-D optimum is the endpoint tight at row 2 (y <= 1).
  double y_opt = red.rhs[0] / red.rows(0, 0);
  RealVector x = lift_solution(stack, {y_opt});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));

  CHECK(lift_solution({}, {0.25, 0.5}) == RealVector{0.25, 0.5});
  CHECK_THROWS_AS(lift_solution(stack, {1.0, 2.0}), DimensionError);

  ReductionStack s2 = stack;
  CHECK_THROWS_AS(reduce_dimension(red, 0, s2), PreconditionError);
  ReducedLp bad = sq;
  bad.rows(0, 0) = 2.0;
  CHECK_THROWS_AS(reduce_dimension(bad, 0, s2), PreconditionError);
}

TEST_CASE("reduction round trip and delta") {
  std::mt19937_64 rng(51);
  int done = 0;
  for (int t = 0; t < 60; ++t) {
    LinearProgram lp = random_pointed(rng, 6, 4);
    auto verts = oracle::enumerate_vertices(lp).vertices;
    const BasicSolution& v = verts[rng() % verts.size()];
    std::size_t row = v.basis[rng() % v.basis.size()];
    ReducedLp view = reduced_view(lp);
    ReductionStack stack;
    ReducedLp red = reduce_dimension(view, row, stack);

    RealVector x = to_double(v.point);
    RealVector z = stack[0].Q.apply(x);
    CHECK(z[0] == doctest::Approx(view.rhs[row]));
    RealVector y(z.begin() + 1, z.end());
    for (std::size_t i = 0; i < red.rows.rows(); ++i)
      CHECK(dot(red.rows.row_vector(i), y) <= red.rhs[i] + 1e-9);
    RealVector back = lift_solution(stack, y);
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(std::fabs(back[j] - x[j]) <= 1e-9);
    CHECK(std::fabs(dot(view.rows.row_vector(row), back) - view.rhs[row]) <= 1e-9);

    if (rank(red.rows) == red.dim()) {
      double before = testing::angle_delta_float(view.rows);
      double after = delta_matrix(red.rows).delta;
      CHECK(after >= before - 1e-9);
      ++done;
    }
  }
  CHECK(done > 30);
}

TEST_CASE("is_optimal examples") {
  LinearProgram sq = testing::unit_square();
  CHECK(is_optimal(sq, {rvec({1, 1}), {0, 2}}));
  LinearProgram up = testing::unit_square({0, 1});
  CHECK_FALSE(is_optimal(up, {rvec({1, 0}), {0, 3}}));
  CHECK(is_optimal(up, {rvec({1, 1}), {0, 2}}));
  CHECK_THROWS_AS(is_optimal(sq, {rvec({1, 1}), {0, 1}}), SingularMatrixError);

  // Degenerate apex: the first basis does not certify, the vertex is optimal.
  LinearProgram pyr = lp_of({{0, 0, -1}, {1, 0, 1}, {-1, 0, 1}, {0, 1, 1}, {0, -1, 1}}, {0, 1, 1, 1, 1}, {0, 0, 1});
  CHECK(is_optimal(pyr, {rvec({0, 0, 1}), {1, 2, 3}}));
}

TEST_CASE("is_optimal agrees with vertex enumeration") {
  std::mt19937_64 rng(52);
  int lps = 0;
  for (; lps < 200; ++lps) {
    LinearProgram lp = random_boxed(rng, 3 + rng() % 4, 2 + rng() % 2);
    auto verts = oracle::enumerate_vertices(lp).vertices;
    Rational best = dot(lp.c0, verts.front().point);
    for (const auto& v : verts) best = std::max(best, Rational(dot(lp.c0, v.point)));
    for (const auto& v : verts) CHECK(is_optimal(lp, v) == (dot(lp.c0, v.point) == best));
  }
}

TEST_CASE("repeated_shadow_vertex") {
  LinearProgram sq = bound_polytope(normalize(testing::unit_square()));
  SolverConfig cfg;
  RandomStream rng(1);
  RepeatedResult res = repeated_shadow_vertex(sq, {rvec({0, 0}), {1, 3}}, 1e6, cfg, rng);
  REQUIRE(res.candidate);
  CHECK(res.candidate->point == rvec({1, 1}));
  CHECK(res.rounds.size() == 2);
  REQUIRE(res.rounds[0].fixed_row);
  CHECK((*res.rounds[0].fixed_row == 0 || *res.rounds[0].fixed_row == 2));

  LinearProgram seg = bound_polytope(normalize(lp_of({{1}, {-1}}, {3, 2}, {1})));
  RandomStream rng2(2);
  RepeatedResult one = repeated_shadow_vertex(seg, {rvec({-2}), {1}}, 2.0, cfg, rng2);
  REQUIRE(one.candidate);
  CHECK(one.candidate->point == rvec({3}));
  CHECK(one.rounds.size() == 1);
  CHECK_FALSE(one.rounds[0].fixed_row);
}

TEST_CASE("a capped walk makes the schedule double phi") {
  LinearProgram sq = bound_polytope(normalize(testing::unit_square()));
  SolverConfig cfg;
  cfg.mode = DrawMode::Dyadic;
  cfg.cap_constant = 0.0;
  cfg.max_doublings = 3;
  RandomStream rng(3);
  RepeatedResult res = repeated_shadow_vertex(sq, {rvec({0, 0}), {1, 3}}, 2.0, cfg, rng);
  CHECK_FALSE(res.candidate);
  SolveStats stats;
  CHECK_THROWS_AS(solve_from_bfs(sq, {rvec({0, 0}), {1, 3}}, cfg, PhiSchedule{ScheduleKind::N32, 8, 2, 0}, rng, stats),
                  ScheduleExhaustedError);

  // From the optimum no pivot is needed, so the first phi is accepted.
  SolveStats ok;
  BasicSolution v = solve_from_bfs(sq, {rvec({1, 1}), {0, 2}}, cfg, PhiSchedule{ScheduleKind::N32, 8, 2, 0}, rng, ok);
  CHECK(v.point == rvec({1, 1}));
  CHECK(ok.doublings == 0);
}

TEST_CASE("solve examples") {
  SolverConfig cfg;
  SolveOutcome sq = solve(testing::unit_square(), cfg);
  CHECK(value_of(sq) == 2);
  CHECK(std::get<Optimal>(sq.result).vertex.point == rvec({1, 1}));

  SolveOutcome inf = solve(lp_of({{1}, {-1}}, {0, -1}, {1}), cfg);
  REQUIRE(std::holds_alternative<Infeasible>(inf.result));
  CHECK(std::get<Infeasible>(inf.result).phase1_value > 0);

  SolveOutcome unb = solve(lp_of({{-1}}, {0}, {1}), cfg);
  REQUIRE(std::holds_alternative<Unbounded>(unb.result));
  CHECK(std::get<Unbounded>(unb.result).ray[0] > 0);

  SolveOutcome zero = solve(testing::unit_square({0, 0}), cfg);
  CHECK(value_of(zero) == 0);

  // Rank-deficient inputs.
  CHECK(std::holds_alternative<Unbounded>(solve(lp_of({{1, 1}}, {1}, {1, 0}), cfg).result));
  CHECK(value_of(solve(lp_of({{1, 1}}, {1}, {1, 1}), cfg)) == 1);
  CHECK(std::holds_alternative<Infeasible>(solve(lp_of({{1, 1}, {-1, -1}}, {0, -1}, {1, 1}), cfg).result));

  // Start vertex given: no Phase 1.
  SolveOutcome started = solve(testing::unit_square(), cfg, BasicSolution{rvec({0, 0}), {1, 3}});
  CHECK(started.stats.phase1_pivots == 0);
  CHECK(value_of(started) == 2);
}

TEST_CASE("solve on TU flow instances matches the oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    LinearProgram lp = generate_tu_instance(TuKind::Network, 10, 4, seed);
    SolverConfig cfg;
    cfg.seed = seed;
    SolveOutcome out = solve(lp, cfg);
    auto oracle_res = oracle::brute_force_optimum(lp);
    REQUIRE(std::holds_alternative<oracle::Optimum>(oracle_res));
    REQUIRE(std::holds_alternative<Optimal>(out.result));
    const auto& opt = std::get<Optimal>(out.result);
    CHECK(opt.value == std::get<oracle::Optimum>(oracle_res).value);
    CHECK_NOTHROW(check_basic_feasible(lp, opt.vertex));
    CHECK(is_optimal(lp, opt.vertex));
  }
}

TEST_CASE("solve is deterministic for a fixed seed") {
  LinearProgram lp = generate_random_integer(8, 4, 99);
  SolverConfig cfg;
  cfg.seed = 5;
  cfg.record_paths = true;
  SolveOutcome a = solve(lp, cfg), b = solve(lp, cfg);
  CHECK(a.stats.pivots == b.stats.pivots);
  CHECK(a.stats.phase1_pivots == b.stats.phase1_pivots);
  REQUIRE(a.stats.paths.size() == b.stats.paths.size());
  for (std::size_t k = 0; k < a.stats.paths.size(); ++k) CHECK(path_csv(a.stats.paths[k]) == path_csv(b.stats.paths[k]));
}
