#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "shadowlp/errors.hpp"
#include "shadowlp/oracle.hpp"
#include "shadowlp/randomness.hpp"
#include "shadowlp/shadow_walk.hpp"

using namespace shadowlp;
using testing::rvec;

namespace {

RationalVector exact(const RealVector& v) { return exact_rational(v); }

// Boxed random LP with a known start vertex, or nullopt when infeasible.
struct WalkInstance {
  LinearProgram lp;
  BasicSolution start;
  std::vector<BasicSolution> vertices;
};

std::optional<WalkInstance> random_instance(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  RationalMatrix A = testing::random_integer_matrix(rng, m, n, -3, 3);
  if (rank(A) < n) return std::nullopt;
  RationalVector b(m), c(n, Rational(1));
  for (auto& v : b) v = static_cast<long>(rng() % 7) - 1;
  LinearProgram lp = bound_polytope(make_lp(A, b, c));
  auto verts = oracle::enumerate_vertices(lp).vertices;
  if (verts.empty()) return std::nullopt;
  BasicSolution start = verts[rng() % verts.size()];
  return WalkInstance{lp, start, verts};
}

RationalVector random_objective(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  RealVector c(n);
  for (auto& x : c) x = g(rng);
  return exact(c);
}

RationalVector cone_w(const LinearProgram& lp, const BasicSolution& x0, RandomStream& rng) {
  auto rows = tight_rows_at(lp, x0);
  return exact(cone_objective(rows, draw_lambda(lp.n(), RngConfig{}, rng)));
}

std::size_t shared_rows(std::vector<std::size_t> a, std::vector<std::size_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.size();
}

}  // namespace

TEST_CASE("tight_rows_at") {
  LinearProgram sq = testing::unit_square();
  auto rows = tight_rows_at(sq, {rvec({0, 0}), {1, 3}});
  CHECK(rows == std::vector<RealVector>{{-1, 0}, {0, -1}});

  LinearProgram tri = testing::lp_of({{2, 0}, {0, 3}}, {2, 3}, {1, 1});
  CHECK(tight_rows_at(tri, {rvec({1, 1}), {0, 1}}) == std::vector<RealVector>{{1, 0}, {0, 1}});

  LinearProgram cube = testing::lp_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}},
                                      {1, 1, 1, 0, 0, 0}, {1, 1, 1});
  CHECK(tight_rows_at(cube, {rvec({1, 1, 1}), {0, 1, 2}}) ==
        std::vector<RealVector>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});

  CHECK_THROWS_AS(tight_rows_at(sq, {rvec({1, 0}), {0, 1}}), PreconditionError);
}

TEST_CASE("shadow_pivot on the unit square") {
  LinearProgram sq = testing::unit_square();
  Tableau tab(sq.A, sq.b, {1, 3});
  RationalVector c{Rational(1), Rational(1, 100)};
  RationalVector w{Rational(1, 2), Rational(3, 4)};  // cone objective at the origin
  tab.set_objectives(c, w);
  // Edge to (1,0): slope w1/c1 = 1/2. Edge to (0,1): slope w2/c2 = 75.
  auto step = shadow_pivot(tab);
  REQUIRE(std::holds_alternative<PathStep>(step));
  const auto& s = std::get<PathStep>(step);
  CHECK(s.vertex == rvec({1, 0}));
  CHECK(s.entering_row == 0);
  CHECK(s.leaving_row == 1);
  CHECK(s.slope == Rational(1, 2));

  auto step2 = shadow_pivot(tab);
  REQUIRE(std::holds_alternative<PathStep>(step2));
  CHECK(std::get<PathStep>(step2).vertex == rvec({1, 1}));
  CHECK(std::holds_alternative<AtOptimum>(shadow_pivot(tab)));
  CHECK(tab.pivots() == 2);
}

TEST_CASE("equal slopes go to the lowest entering row") {
  LinearProgram sq = testing::unit_square();
  Tableau tab(sq.A, sq.b, {1, 3});
  tab.set_objectives(rvec({1, 1}), rvec({1, 1}));
  auto step = shadow_pivot(tab);
  REQUIRE(std::holds_alternative<PathStep>(step));
  CHECK(std::get<PathStep>(step).entering_row == 0);
  CHECK(std::get<PathStep>(step).vertex == rvec({1, 0}));

  // Same polytope with rows listed in the other order.
  LinearProgram swapped = testing::lp_of({{0, 1}, {0, -1}, {1, 0}, {-1, 0}}, {1, 0, 1, 0}, {1, 1});
  Tableau tab2(swapped.A, swapped.b, {3, 1});
  tab2.set_objectives(rvec({1, 1}), rvec({1, 1}));
  auto step2 = shadow_pivot(tab2);
  REQUIRE(std::holds_alternative<PathStep>(step2));
  CHECK(std::get<PathStep>(step2).entering_row == 0);
  CHECK(std::get<PathStep>(step2).vertex == rvec({0, 1}));
}

TEST_CASE("shadow_walk examples") {
  LinearProgram sq = testing::unit_square();
  BasicSolution origin{rvec({0, 0}), {1, 3}};
  auto res = shadow_walk(sq, origin, {Rational(2), Rational(-1, 3)}, {Rational(1, 5), Rational(1, 7)}, std::nullopt);
  REQUIRE(std::holds_alternative<Finished>(res));
  const auto& fin = std::get<Finished>(res);
  CHECK(fin.solution.point == rvec({1, 0}));
  CHECK(fin.path.steps.size() == 1);

  auto both = shadow_walk(sq, origin, rvec({1, 2}), rvec({1, 1}), std::nullopt);
  CHECK(std::get<Finished>(both).path.steps.size() == 2);
  CHECK(std::get<Finished>(both).solution.point == rvec({1, 1}));

  auto done = shadow_walk(sq, {rvec({1, 1}), {0, 2}}, rvec({1, 1}), rvec({-1, -1}), std::nullopt);
  REQUIRE(std::holds_alternative<Finished>(done));
  CHECK(std::get<Finished>(done).path.steps.empty());

  auto capped = shadow_walk(sq, origin, rvec({1, 1}), rvec({1, 2}), 0);
  REQUIRE(std::holds_alternative<CapExceeded>(capped));
  CHECK(std::get<CapExceeded>(capped).path.steps.empty());
}

TEST_CASE("unbounded edge is reported") {
  LinearProgram quad = testing::lp_of({{-1, 0}, {0, -1}}, {0, 0}, {1, 1});
  CHECK_THROWS_AS(shadow_walk(quad, {rvec({0, 0}), {0, 1}}, rvec({1, 1}), rvec({1, 1}), std::nullopt),
                  UnboundedEdgeError);
}

TEST_CASE("degenerate apex is walked through") {
  // Square pyramid: the apex (0,0,1) is tight at four facets.
  LinearProgram pyr = testing::lp_of(
      {{0, 0, -1}, {1, 0, 1}, {-1, 0, 1}, {0, 1, 1}, {0, -1, 1}}, {0, 1, 1, 1, 1}, {1, 0, 0});
  BasicSolution apex{rvec({0, 0, 1}), {1, 2, 3}};
  check_basic_feasible(pyr, apex);
  std::mt19937_64 gen(1);
  RandomStream rng(1);
  for (int t = 0; t < 50; ++t) {
    RationalVector c = random_objective(gen, 3);
    auto res = shadow_walk(pyr, apex, c, cone_w(pyr, apex, rng), std::nullopt);
    const auto& fin = std::get<Finished>(res);
    Rational best = dot(c, fin.solution.point);
    for (const auto& v : oracle::enumerate_vertices(pyr).vertices) CHECK(dot(c, v.point) <= best);
  }
}

TEST_CASE("walk properties on random boxed LPs") {
  std::mt19937_64 gen(41);
  RandomStream rng(41);
  int walks = 0;
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 2 + gen() % 3, m = n + gen() % 4;
    auto inst = random_instance(gen, m, n);
    if (!inst) continue;
    ++walks;
    RationalVector c = random_objective(gen, n);
    RationalVector w = cone_w(inst->lp, inst->start, rng);
    Tableau tab(inst->lp.A, inst->lp.b, inst->start.basis);
    tab.set_objectives(c, w);
    auto res = walk(tab, std::nullopt);
    const auto& fin = std::get<Finished>(res);

    Rational best = dot(c, inst->vertices.front().point);
    for (const auto& v : inst->vertices) best = std::max(best, Rational(dot(c, v.point)));
    CHECK(dot(c, fin.solution.point) == best);

    const ShadowPath& p = fin.path;
    std::vector<std::size_t> prev_basis = p.start_basis;
    LexValue prev_value = p.start_c_value;
    RationalVector prev_vertex = p.start_vertex;
    for (std::size_t s = 0; s < p.steps.size(); ++s) {
      const auto& st = p.steps[s];
      CHECK(shared_rows(prev_basis, st.basis) == n - 1);
      CHECK(compare(prev_value, st.c_value) < 0);
      CHECK(dot(c, prev_vertex) <= dot(c, st.vertex));
      if (s > 0) CHECK(p.steps[s - 1].slope < st.slope);
      CHECK(is_feasible(inst->lp, st.vertex));
      prev_basis = st.basis;
      prev_value = st.c_value;
      prev_vertex = st.vertex;
    }
    if (tab.pivots() > 0)
      CHECK(tab.operations() <= 3 * inst->lp.m() * n * tab.pivots());
  }
  CHECK(walks >= 150);
}

TEST_CASE("locked rows stay in the basis") {
  LinearProgram cube = testing::lp_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}},
                                      {1, 1, 1, 0, 0, 0}, {1, 1, 1});
  Tableau tab(cube.A, cube.b, {3, 4, 5});
  tab.lock_row(5);
  CHECK(tab.locked_count() == 1);
  tab.set_objectives(rvec({1, 2, 3}), rvec({1, 1, 1}));
  auto res = walk(tab, std::nullopt);
  const auto& fin = std::get<Finished>(res);
  CHECK(fin.solution.point == rvec({1, 1, 0}));
  for (const auto& st : fin.path.steps) CHECK(std::find(st.basis.begin(), st.basis.end(), 5) != st.basis.end());
  CHECK_THROWS_AS(tab.lock_row(5 - 5 + 3), PreconditionError);
}

TEST_CASE("LexValue comparison") {
  LexValue a{Rational(1), {}}, b{Rational(1), {{2, Rational(1)}}}, c{Rational(1), {{1, Rational(-1)}}};
  CHECK(compare(a, b) < 0);
  CHECK(compare(c, a) < 0);
  CHECK(compare(b, b) == 0);
  CHECK(compare(LexValue{Rational(2), {{1, Rational(-5)}}}, b) > 0);
}

TEST_CASE("path_csv") {
  LinearProgram sq = testing::unit_square();
  auto res = shadow_walk(sq, {rvec({0, 0}), {1, 3}}, rvec({1, 2}), rvec({1, 1}), std::nullopt);
  std::string csv = path_csv(std::get<Finished>(res).path);
  CHECK(csv ==
        "pivot_index,entering_row,leaving_row,slope,c_value\r\n"
        "0,2,3,1/2,2\r\n"
        "1,0,1,1,3\r\n");
}
