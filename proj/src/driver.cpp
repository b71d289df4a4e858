#include "shadowlp/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shadowlp/errors.hpp"

namespace shadowlp {

namespace {

constexpr double kUnitTolerance = 1e-10;
constexpr double kParallelTolerance = 1e-9;
constexpr double kZeroObjective = 1e-12;
constexpr std::size_t kBlandGuard = 1'000'000;

RealVector unit_or_zero(RealVector v, double zero_tol) {
  double nr = norm(v);
  if (nr < zero_tol) return RealVector(v.size(), 0.0);
  for (double& x : v) x /= nr;
  return v;
}

bool is_zero(const RealVector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

std::optional<std::size_t> ReducedLp::local_index(std::size_t original_row) const {
  auto it = std::find(origin.begin(), origin.end(), original_row);
  if (it == origin.end()) return std::nullopt;
  return static_cast<std::size_t>(it - origin.begin());
}

ReducedLp reduced_view(const LinearProgram& lp) {
  ReducedLp out;
  out.rows = RealMatrix(lp.m(), lp.n());
  out.rhs.resize(lp.m());
  for (std::size_t i = 0; i < lp.m(); ++i) {
    RealVector a = to_double(lp.A.row_vector(i));
    double nr = norm(a);
    for (std::size_t j = 0; j < lp.n(); ++j) out.rows(i, j) = a[j] / nr;
    out.rhs[i] = to_double(lp.b[i]) / nr;
    out.origin.push_back(i);
  }
  out.objective = unit_or_zero(to_double(lp.c0), kZeroObjective);
  return out;
}

double PhiSchedule::phi_at(std::size_t i) const {
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  double base = 0.0;
  switch (kind) {
    case ScheduleKind::N32: base = std::pow(nd, 1.5); break;
    case ScheduleKind::N52: base = std::pow(nd, 2.5); break;
    case ScheduleKind::Phase1: base = std::sqrt(md) * std::pow(nd + md, 1.5); break;
  }
  return std::ldexp(base, static_cast<int>(i));
}

std::size_t identify_basis_element(const RealMatrix& basis_rows, const RealVector& c) {
  auto mu = solve_square(SquareSystem<double>{basis_rows.transpose(), c});
  if (!mu) throw SingularMatrixError("identify_basis_element: basis is singular");
  std::size_t best = 0;
  for (std::size_t k = 1; k < mu->size(); ++k)
    if ((*mu)[k] > (*mu)[best]) best = k;
  return best;
}

ReducedLp reduce_dimension(const ReducedLp& lp, std::size_t i, ReductionStack& stack) {
  const std::size_t d = lp.dim();
  if (d <= 1) throw PreconditionError("reduce_dimension: dimension is already 1");
  if (i >= lp.rows.rows()) throw PreconditionError("reduce_dimension: row out of range");
  RealVector a = lp.rows.row_vector(i);
  if (std::fabs(norm(a) - 1.0) > kUnitTolerance) throw PreconditionError("reduce_dimension: row is not unit");
  Rotation rot = complete_orthonormal(a);
  const double fixed = lp.rhs[i];

  ReducedLp out;
  out.rows = RealMatrix(0, d - 1);
  for (std::size_t j = 0; j < lp.rows.rows(); ++j) {
    if (j == i) continue;
    RealVector z = rot.apply(lp.rows.row_vector(j));
    RealVector tail(z.begin() + 1, z.end());
    double nt = norm(tail);
    if (nt < kParallelTolerance) continue;
    for (double& v : tail) v /= nt;
    out.rows.append_row(std::span<const double>(tail));
    out.rhs.push_back((lp.rhs[j] - z[0] * fixed) / nt);
    out.origin.push_back(lp.origin[j]);
  }
  RealVector zc = rot.apply(lp.objective);
  out.objective = unit_or_zero(RealVector(zc.begin() + 1, zc.end()), kZeroObjective);
  stack.push_back(ReductionEntry{std::move(rot), lp.origin[i], fixed, d});
  return out;
}

namespace {

RealVector lift(const ReductionStack& stack, RealVector v, bool point) {
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    if (v.size() + 1 != it->dim_before) throw DimensionError("lift: dimension mismatch");
    RealVector full;
    full.reserve(it->dim_before);
    full.push_back(point ? it->fixed_rhs : 0.0);
    full.insert(full.end(), v.begin(), v.end());
    v = it->Q.apply_transpose(full);
  }
  return v;
}

}  // namespace

RealVector lift_solution(const ReductionStack& stack, const RealVector& x_reduced) {
  return lift(stack, x_reduced, true);
}

RealVector lift_direction(const ReductionStack& stack, const RealVector& v_reduced) {
  return lift(stack, v_reduced, false);
}

bool is_optimal(const LinearProgram& lp, const BasicSolution& x) {
  if (x.basis.size() != lp.n()) throw DimensionError("is_optimal: basis must have n rows");
  if (!inverse(lp.A.select_rows(x.basis))) throw SingularMatrixError("is_optimal: basis is singular");
  if (!is_feasible(lp, x.point)) throw PreconditionError("is_optimal: point is infeasible");
  auto tight = tight_rows(lp, x.point);
  std::vector<std::size_t> local_basis;
  for (auto r : x.basis) {
    auto it = std::find(tight.begin(), tight.end(), r);
    if (it == tight.end()) throw PreconditionError("is_optimal: basis row is not tight");
    local_basis.push_back(static_cast<std::size_t>(it - tight.begin()));
  }
  RationalVector b_tight;
  for (auto r : tight) b_tight.push_back(lp.b[r]);
  Tableau tab(lp.A.select_rows(tight), std::move(b_tight), std::move(local_basis));
  tab.set_objectives(lp.c0, RationalVector(lp.n(), Rational(0)));

  // Bland's rule among tight rows; indices of `tight` are ascending row indices.
  for (std::size_t guard = 0; guard < kBlandGuard; ++guard) {
    std::optional<std::size_t> pos;
    for (std::size_t k = 0; k < lp.n(); ++k)
      if (tab.c_cost(k) < 0 && (!pos || tab.basis()[k] < tab.basis()[*pos])) pos = k;
    if (!pos) return true;
    std::optional<std::size_t> row;
    for (std::size_t i = 0; i < tab.m() && !row; ++i)
      if (!tab.position_of(i) && tab.rate(i, *pos) > 0) row = i;
    if (!row) return false;  // improving feasible edge leaves the vertex
    tab.pivot(*pos, *row);
  }
  throw LpError("is_optimal: pivot guard exceeded");
}

double delta_hat(std::size_t n, double phi) {
  return std::min(1.0, 2.0 * std::pow(static_cast<double>(n), 1.5) / phi);
}

std::size_t pivot_cap(std::size_t m, std::size_t n, double phi, double cap_constant) {
  const double d = delta_hat(n, phi);
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  double p = std::ceil(cap_constant * (md * nd * nd / (d * d) + md * std::sqrt(nd) * phi / d));
  double cap = 8.0 * nd * p;
  if (!(cap < 1e18)) return static_cast<std::size_t>(1e18);
  return static_cast<std::size_t>(cap);
}

unsigned draw_bits(const SolverConfig& cfg, std::size_t m, std::size_t n, double phi) {
  if (cfg.bits) return *cfg.bits;
  double delta = cfg.known_delta ? *cfg.known_delta : delta_hat(n, phi);
  return static_cast<unsigned>(bit_budget(m, n, phi, std::min(1.0, delta)));
}

RepeatedResult repeated_shadow_vertex(const LinearProgram& lp, const BasicSolution& x0, double phi,
                                      const SolverConfig& cfg, RandomStream& rng) {
  const std::size_t n = lp.n(), m = lp.m();
  RepeatedResult out;
  Tableau tab(lp.A, lp.b, x0.basis);
  ReducedLp red = reduced_view(lp);
  ReductionStack stack;

  RngConfig rc;
  rc.seed = cfg.seed;
  rc.mode = cfg.mode;
  rc.phi = phi;
  rc.bits_per_draw = cfg.mode == DrawMode::Dyadic ? draw_bits(cfg, m, n, phi) : 53;
  std::optional<std::size_t> cap;
  if (cfg.mode == DrawMode::Dyadic) cap = pivot_cap(m, n, phi, cfg.cap_constant);

  auto free_rows = [&](std::vector<std::size_t>& positions) {
    positions.clear();
    std::vector<RealVector> rows;
    for (std::size_t k = 0; k < n; ++k) {
      if (tab.is_locked_position(k)) continue;
      auto local = red.local_index(tab.basis()[k]);
      if (!local) throw LpError("basis row vanished in the reduction");
      positions.push_back(k);
      rows.push_back(red.rows.row_vector(*local));
    }
    return rows;
  };

  for (std::size_t round = 0; round < n; ++round) {
    const std::size_t d = red.dim();
    if (is_zero(red.objective)) break;  // every point of the face is optimal
    PerturbedObjective pert = perturb_objective(red.objective, rc, rng);
    std::vector<std::size_t> positions;
    std::vector<RealVector> u = free_rows(positions);
    RealVector lambda = draw_lambda(d, rc, rng);
    RealVector w = cone_objective(u, lambda);
    tab.set_objectives(exact_rational(lift_direction(stack, pert.c)), exact_rational(lift_direction(stack, w)));

    WalkResult res = walk(tab, cap);
    RoundRecord rec;
    rec.dim = d;
    if (auto* hit = std::get_if<CapExceeded>(&res)) {
      rec.pivots = hit->path.steps.size();
      rec.path = std::move(hit->path);
      out.pivots += rec.pivots;
      out.rounds.push_back(std::move(rec));
      return out;
    }
    auto& fin = std::get<Finished>(res);
    rec.pivots = fin.path.steps.size();
    rec.path = std::move(fin.path);
    out.pivots += rec.pivots;
    if (d > 1) {
      std::vector<RealVector> rows = free_rows(positions);
      std::size_t k = identify_basis_element(RealMatrix::from_rows(rows), pert.c);
      std::size_t row = tab.basis()[positions[k]];
      rec.fixed_row = row;
      tab.lock_row(row);
      red = reduce_dimension(red, *red.local_index(row), stack);
    }
    out.rounds.push_back(std::move(rec));
    if (d == 1) break;
  }
  out.candidate = tab.solution();
  return out;
}

BasicSolution solve_from_bfs(const LinearProgram& lp, const BasicSolution& x0, const SolverConfig& cfg,
                             PhiSchedule schedule, RandomStream& rng, SolveStats& stats, bool phase1) {
  for (std::size_t i = 0; i < cfg.max_doublings; ++i) {
    const double phi = schedule.phi_at(i);
    RepeatedResult res = repeated_shadow_vertex(lp, x0, phi, cfg, rng);
    (phase1 ? stats.phase1_pivots : stats.pivots) += res.pivots;
    for (auto& r : res.rounds) {
      if (!phase1) stats.pivots_per_round.push_back(r.pivots);
      if (cfg.record_paths) stats.paths.push_back(std::move(r.path));
    }
    stats.bits = rng.bits_consumed();
    if (res.candidate && is_optimal(lp, *res.candidate)) {
      if (phase1) {
        stats.phase1_doublings = i;
      } else {
        stats.doublings = i;
        stats.accepted_phi = phi;
      }
      return *res.candidate;
    }
  }
  throw ScheduleExhaustedError("phi schedule exhausted after " + std::to_string(cfg.max_doublings) + " doublings");
}

Phase1Result find_bfs(const LinearProgram& lp, const SolverConfig& cfg, RandomStream& rng, SolveStats& stats) {
  Phase1Problem p = build_phase1(lp);
  bool start_feasible = true;
  for (std::size_t i = 0; i < lp.m(); ++i) start_feasible = start_feasible && p.initial.point[lp.n() + i] == 0;
  // y = 0 already attains the upper bound 0 of -sum y.
  if (start_feasible) return extract_bfs(p.initial, p, lp);

  LinearProgram boxed = bound_polytope(normalize(p.lp));
  PhiSchedule sched;
  if (cfg.schedule == ScheduleKind::N52) {
    sched = PhiSchedule{ScheduleKind::N52, lp.m(), lp.n() + lp.m(), 0};
  } else {
    sched = PhiSchedule{ScheduleKind::Phase1, lp.m(), lp.n(), 0};
  }
  BasicSolution v = solve_from_bfs(boxed, p.initial, cfg, sched, rng, stats, true);
  return extract_bfs(v, p, lp);
}

SolveOutcome solve(const LinearProgram& lp, const SolverConfig& cfg, const std::optional<BasicSolution>& start) {
  lp.validate();
  SolveOutcome out;
  RandomStream rng(cfg.seed);

  LinearProgram work = lp;
  RankBackMap back{0, lp.m(), lp.n()};
  std::optional<RationalVector> ray;
  if (rank(lp.A) < lp.n()) {
    if (start) throw PreconditionError("solve: a start vertex needs a full-rank matrix");
    ray = lineality_ray(lp);
    auto kind = lp.is_integral() ? RankRaiseKind::UnitVectors : RankRaiseKind::OrthonormalComplement;
    RankRaised raised = append_rank_rows(lp, kind);
    work = std::move(raised.lp);
    back = raised.back_map;
  }

  BasicSolution x0;
  if (start) {
    check_basic_feasible(work, *start);
    x0 = *start;
  } else {
    Phase1Result p1 = find_bfs(work, cfg, rng, out.stats);
    out.stats.bits = rng.bits_consumed();
    if (auto* inf = std::get_if<Phase1Infeasible>(&p1)) {
      out.result = Infeasible{inf->value};
      return out;
    }
    x0 = std::get<BasicSolution>(p1);
  }
  if (ray) {
    out.result = Unbounded{*ray};
    return out;
  }
  if (std::all_of(lp.c0.begin(), lp.c0.end(), [](const Rational& v) { return v == 0; })) {
    out.result = Optimal{back.lift(x0), Rational(0)};
    return out;
  }

  LinearProgram norm_lp = normalize(work);
  LinearProgram boxed = bound_polytope(norm_lp);
  PhiSchedule sched{cfg.schedule, work.m(), work.n(), 0};
  if (sched.kind == ScheduleKind::Phase1) sched.kind = ScheduleKind::N32;
  BasicSolution vertex = solve_from_bfs(boxed, x0, cfg, sched, rng, out.stats);

  auto cert = assert_unbounded_if_box_tight(vertex, boxed);
  if (auto* u = std::get_if<UnboundedCertificate>(&cert)) {
    out.result = Unbounded{u->ray};
    return out;
  }
  BasicSolution final_vertex = vertex;
  if (std::any_of(vertex.basis.begin(), vertex.basis.end(), [&](std::size_t r) { return boxed.is_box_row(r); }))
    final_vertex = purify_to_vertex(norm_lp, vertex.point);
  Rational value = dot(lp.c0, final_vertex.point);
  out.result = Optimal{back.lift(final_vertex), value};
  return out;
}

}  // namespace shadowlp
