#pragma once

#include <random>
#include <vector>

#include "shadowlp/delta_metrics.hpp"
#include "shadowlp/linalg.hpp"
#include "shadowlp/lp_model.hpp"

namespace testing {

using namespace shadowlp;

inline RationalMatrix rmat(std::initializer_list<std::initializer_list<long>> rows) {
  RationalMatrix m(0, 0);
  for (const auto& r : rows) {
    RationalVector v;
    for (long x : r) v.push_back(Rational(x));
    m.append_row(std::span<const Rational>(v));
  }
  return m;
}

inline RationalVector rvec(std::initializer_list<long> xs) {
  RationalVector v;
  for (long x : xs) v.push_back(Rational(x));
  return v;
}

inline LinearProgram lp_of(std::initializer_list<std::initializer_list<long>> A, std::initializer_list<long> b,
                           std::initializer_list<long> c) {
  return make_lp(rmat(A), rvec(b), rvec(c));
}

/// max x1 + x2 over [0,1]^2, rows x1<=1, -x1<=0, x2<=1, -x2<=0.
inline LinearProgram unit_square(std::initializer_list<long> c = {1, 1}) {
  return lp_of({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, {1, 0, 1, 0}, c);
}

inline RationalMatrix random_integer_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n, long lo, long hi) {
  std::uniform_int_distribution<long> dist(lo, hi);
  RationalMatrix A(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    bool zero = true;
    while (zero) {
      for (std::size_t j = 0; j < n; ++j) {
        A(i, j) = dist(rng);
        zero = zero && A(i, j) == 0;
      }
    }
  }
  return A;
}

/// Squared distance of a_i / |a_i| from span of the other rows, by exact
/// Gram-matrix projection (angle definition of delta).
inline Rational normalized_distance_sq(const RationalMatrix& rows, std::size_t i) {
  const std::size_t k = rows.rows(), n = rows.cols();
  RationalVector a = rows.row_vector(i);
  Rational aa = dot(a, a);
  if (k == 1) return 1;
  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < k; ++j)
    if (j != i) others.push_back(j);
  RationalMatrix G(others.size(), others.size());
  RationalVector g(others.size());
  for (std::size_t p = 0; p < others.size(); ++p) {
    RationalVector ap = rows.row_vector(others[p]);
    g[p] = dot(ap, a);
    for (std::size_t q = 0; q < others.size(); ++q) G(p, q) = dot(ap, rows.row_vector(others[q]));
  }
  auto y = solve_square(SquareSystem<Rational>{G, g});
  Rational proj = dot(g, *y);
  (void)n;
  return (aa - proj) / aa;
}

/// 1/delta^2 of independent rows by the angle definition.
inline Rational angle_inverse_delta_sq(const RationalMatrix& rows) {
  Rational worst = 0;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    Rational d = normalized_distance_sq(rows, i);
    Rational inv = 1 / d;
    if (inv > worst) worst = inv;
  }
  return worst;
}

/// min over independent r-subsets (r = rank) of angle delta, float rows.
inline double angle_delta_float(const RealMatrix& A) {
  const std::size_t r = rank(A);
  double best = 2.0;
  for_each_subset(A.rows(), r, [&](const std::vector<std::size_t>& s) {
    RealMatrix sub = A.select_rows(s);
    if (rank(sub) != r) return;
    for (std::size_t i = 0; i < r; ++i) {
      RealVector a = sub.row_vector(i);
      double na = norm(a);
      for (double& x : a) x /= na;
      // Gram-Schmidt residual against the others.
      std::vector<RealVector> basis;
      for (std::size_t j = 0; j < r; ++j) {
        if (j == i) continue;
        RealVector v = sub.row_vector(j);
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& q : basis) {
            double p = dot(v, q);
            for (std::size_t t = 0; t < v.size(); ++t) v[t] -= p * q[t];
          }
        double nv = norm(v);
        for (double& x : v) x /= nv;
        basis.push_back(v);
      }
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) {
          double p = dot(a, q);
          for (std::size_t t = 0; t < a.size(); ++t) a[t] -= p * q[t];
        }
      best = std::min(best, norm(a));
    }
  });
  return best;
}

}  // namespace testing
