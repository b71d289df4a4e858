#include "shadowlp/oracle.hpp"

#include <algorithm>
#include <map>

#include "shadowlp/delta_metrics.hpp"
#include "shadowlp/errors.hpp"
#include "shadowlp/linalg.hpp"

namespace shadowlp::oracle {

namespace {

struct PointLess {
  bool operator()(const RationalVector& a, const RationalVector& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

Rational row_dot(const RationalMatrix& A, std::size_t i, const RationalVector& x) {
  Rational s = 0;
  for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
  return s;
}

// Pointed version of lp: appends +-v for a basis v of the null space of A.
LinearProgram cut_lineality(const LinearProgram& lp) {
  auto null = nullspace_basis(lp.A);
  if (null.empty()) return lp;
  LinearProgram out = lp;
  for (const auto& v : null) {
    RationalVector neg(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) neg[j] = -v[j];
    out.A.append_row(std::span<const Rational>(v));
    out.A.append_row(std::span<const Rational>(neg));
    out.b.push_back(0);
    out.b.push_back(0);
    out.row_scales.push_back(1.0);
    out.row_scales.push_back(1.0);
  }
  return out;
}

// An extreme ray of {A d <= 0} with c0 d > 0, if any; A must have rank n.
std::optional<RationalVector> improving_extreme_ray(const LinearProgram& lp) {
  const std::size_t m = lp.m(), n = lp.n();
  if (n == 1) {
    for (int s : {1, -1}) {
      RationalVector d{Rational(s)};
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) ok = row_dot(lp.A, i, d) <= 0;
      if (ok && lp.c0[0] * s > 0) return d;
    }
    return std::nullopt;
  }
  if (binomial(m, n - 1) > kEnumerationGuard) throw GuardExceededError("ray enumeration guard exceeded");
  std::optional<RationalVector> found;
  for_each_subset(m, n - 1, [&](const std::vector<std::size_t>& rows) {
    if (found) return;
    auto null = nullspace_basis(lp.A.select_rows(rows));
    if (null.size() != 1) return;
    for (int s : {1, -1}) {
      RationalVector d = null.front();
      if (s < 0)
        for (auto& v : d) v = -v;
      bool ok = true;
      for (std::size_t i = 0; i < m && ok; ++i) ok = row_dot(lp.A, i, d) <= 0;
      if (ok && dot(lp.c0, d) > 0) {
        found = d;
        return;
      }
    }
  });
  return found;
}

}  // namespace

VertexSet enumerate_vertices(const LinearProgram& lp) {
  const std::size_t m = lp.m(), n = lp.n();
  if (rank(lp.A) != n) throw PreconditionError("enumerate_vertices needs rank(A) = n");
  if (binomial(m, n) > kEnumerationGuard) throw GuardExceededError("vertex enumeration guard exceeded");
  VertexSet out;
  std::map<RationalVector, std::size_t, PointLess> seen;
  for_each_subset(m, n, [&](const std::vector<std::size_t>& rows) {
    RationalVector rhs;
    for (auto r : rows) rhs.push_back(lp.b[r]);
    auto x = solve_square(SquareSystem<Rational>{lp.A.select_rows(rows), rhs});
    if (!x) return;
    for (std::size_t i = 0; i < m; ++i)
      if (row_dot(lp.A, i, *x) > lp.b[i]) return;
    if (seen.count(*x)) return;
    seen.emplace(*x, out.vertices.size());
    out.vertices.push_back(BasicSolution{*x, rows});
  });
  return out;
}

BruteForceResult brute_force_optimum(const LinearProgram& lp) {
  const bool deficient = rank(lp.A) < lp.n();
  LinearProgram pointed = cut_lineality(lp);
  VertexSet vs = enumerate_vertices(pointed);
  if (vs.vertices.empty()) return Infeasible{};
  if (deficient) {
    // c0 outside the row space increases along the lineality space.
    auto null = nullspace_basis(lp.A);
    for (const auto& v : null) {
      Rational cv = dot(lp.c0, v);
      if (cv == 0) continue;
      RationalVector d = v;
      if (cv < 0)
        for (auto& x : d) x = -x;
      return UnboundedSuspicion{d};
    }
  }
  if (auto ray = improving_extreme_ray(pointed)) return UnboundedSuspicion{*ray};
  const BasicSolution* best = &vs.vertices.front();
  Rational best_value = dot(lp.c0, best->point);
  for (const auto& v : vs.vertices) {
    Rational val = dot(lp.c0, v.point);
    if (val > best_value) {
      best_value = val;
      best = &v;
    }
  }
  return Optimum{best->point, best_value};
}

SimplexResult reference_simplex(const LinearProgram& lp, const BasicSolution& start) {
  const std::size_t m = lp.m(), n = lp.n();
  check_basic_feasible(lp, start);
  std::vector<std::size_t> basis = start.basis;
  RationalVector x = start.point;
  std::size_t pivots = 0;
  for (;;) {
    RationalMatrix B = lp.A.select_rows(basis);
    auto y = solve_square(SquareSystem<Rational>{B.transpose(), lp.c0});
    if (!y) throw LpError("reference_simplex: basis became singular");
    // Lowest row index among basis rows with a negative multiplier.
    std::optional<std::size_t> pos;
    for (std::size_t k = 0; k < n; ++k)
      if ((*y)[k] < 0 && (!pos || basis[k] < basis[*pos])) pos = k;
    if (!pos) {
      std::sort(basis.begin(), basis.end());
      return SimplexOptimal{BasicSolution{x, basis}, dot(lp.c0, x), pivots};
    }
    // Edge direction: B d = -e_pos.
    RationalVector e(n, Rational(0));
    e[*pos] = -1;
    RationalVector d = *solve_square(SquareSystem<Rational>{B, e});
    std::optional<std::size_t> enter;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (std::find(basis.begin(), basis.end(), i) != basis.end()) continue;
      Rational ad = row_dot(lp.A, i, d);
      if (ad <= 0) continue;
      Rational t = (lp.b[i] - row_dot(lp.A, i, x)) / ad;
      if (!enter || t < best) {
        enter = i;
        best = t;
      }
    }
    if (!enter) return SimplexUnbounded{d};
    for (std::size_t j = 0; j < n; ++j) x[j] += best * d[j];
    basis[*pos] = *enter;
    ++pivots;
  }
}

}  // namespace shadowlp::oracle
