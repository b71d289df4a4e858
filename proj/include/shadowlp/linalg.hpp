#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <type_traits>
#include <vector>

#include "shadowlp/errors.hpp"
#include "shadowlp/matrix.hpp"
#include "shadowlp/rational.hpp"

namespace shadowlp {

/// M x = rhs with M square. Works for Rational (exact) and double.
template <class T>
struct SquareSystem {
  Matrix<T> M;
  std::vector<T> rhs;
};

/// Orthogonal Q (rows orthonormal) whose first row is axis_row, so Q * axis_row = e1.
struct Rotation {
  RealMatrix Q;
  RealVector axis_row;

  RealVector apply(const RealVector& x) const { return multiply(Q, std::span<const double>(x)); }
  RealVector apply_transpose(const RealVector& z) const;
};

namespace detail {

template <class T>
inline constexpr bool is_exact_v = !std::is_floating_point_v<T>;

template <class T>
T abs_value(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v < 0 ? T(-v) : v;
  } else {
    return std::fabs(v);
  }
}

template <class T>
double magnitude_scale(const Matrix<T>& m) {
  if constexpr (is_exact_v<T>) {
    return 0.0;
  } else {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) s = std::max(s, std::fabs(m(i, j)));
    return s;
  }
}

template <class T>
bool negligible(const T& v, double scale, double rel_tol) {
  if constexpr (is_exact_v<T>) {
    return v == 0;
  } else {
    return std::fabs(v) <= rel_tol * std::max(scale, 1e-300);
  }
}

// Exact: first nonzero by row order. Float: largest magnitude.
template <class T>
std::optional<std::size_t> choose_pivot(const Matrix<T>& m, std::size_t col, std::size_t from, double scale,
                                        double rel_tol) {
  if constexpr (is_exact_v<T>) {
    for (std::size_t r = from; r < m.rows(); ++r)
      if (m(r, col) != 0) return r;
    return std::nullopt;
  } else {
    std::size_t best = from;
    double best_abs = -1.0;
    for (std::size_t r = from; r < m.rows(); ++r) {
      double a = std::fabs(m(r, col));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs < 0.0 || negligible(m(best, col), scale, rel_tol)) return std::nullopt;
    return best;
  }
}

template <class T>
void swap_rows(Matrix<T>& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

inline constexpr double kSolveTolerance = 1e-12;
inline constexpr double kRankTolerance = 1e-10;

}  // namespace detail

/// Gaussian elimination. Returns nullopt when M is singular.
template <class T>
std::optional<std::vector<T>> solve_square(const SquareSystem<T>& sys) {
  const std::size_t n = sys.M.rows();
  if (sys.M.cols() != n || sys.rhs.size() != n) throw DimensionError("solve_square needs a square system");
  Matrix<T> aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = sys.M(i, j);
    aug(i, n) = sys.rhs[i];
  }
  const double scale = detail::magnitude_scale(sys.M);
  for (std::size_t col = 0; col < n; ++col) {
    auto p = detail::choose_pivot(aug, col, col, scale, detail::kSolveTolerance);
    if (!p) return std::nullopt;
    detail::swap_rows(aug, col, *p);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (aug(r, col) == T(0)) continue;
      T f = aug(r, col) / aug(col, col);
      for (std::size_t j = col; j <= n; ++j) aug(r, j) -= f * aug(col, j);
    }
  }
  std::vector<T> x(n, T(0));
  for (std::size_t i = n; i-- > 0;) {
    T s = aug(i, n);
    for (std::size_t j = i + 1; j < n; ++j) s -= aug(i, j) * x[j];
    x[i] = s / aug(i, i);
  }
  return x;
}

/// Gauss-Jordan inverse; nullopt when singular.
template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw DimensionError("inverse needs a square matrix");
  Matrix<T> a = m;
  Matrix<T> inv = Matrix<T>::identity(n);
  const double scale = detail::magnitude_scale(m);
  for (std::size_t col = 0; col < n; ++col) {
    auto p = detail::choose_pivot(a, col, col, scale, detail::kSolveTolerance);
    if (!p) return std::nullopt;
    detail::swap_rows(a, col, *p);
    detail::swap_rows(inv, col, *p);
    T piv = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= piv;
      inv(col, j) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col) == T(0)) continue;
      T f = a(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

/// Columns m_1..m_n of M^{-1}. Throws SingularMatrixError.
template <class T>
std::vector<std::vector<T>> inverse_columns(const Matrix<T>& m) {
  auto inv = inverse(m);
  if (!inv) throw SingularMatrixError("inverse_columns: matrix is singular");
  std::vector<std::vector<T>> cols;
  cols.reserve(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(inv->column(j));
  return cols;
}

/// Row-echelon rank (exact for Rational, relative tolerance 1e-10 for double).
template <class T>
std::size_t rank(const Matrix<T>& m) {
  Matrix<T> a = m;
  const double scale = detail::magnitude_scale(m);
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    auto p = detail::choose_pivot(a, col, r, scale, detail::kRankTolerance);
    if (!p) continue;
    detail::swap_rows(a, r, *p);
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, col) == T(0)) continue;
      T f = a(i, col) / a(r, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

/// Greedy scan in ascending row order; returns the lexicographically first
/// maximal independent row subset.
template <class T>
std::vector<std::size_t> independent_rows(const Matrix<T>& m) {
  std::vector<std::vector<T>> echelon;  // reduced copies of accepted rows
  std::vector<std::size_t> lead;        // leading column of each echelon row
  std::vector<std::size_t> chosen;
  const double scale = detail::magnitude_scale(m);
  for (std::size_t i = 0; i < m.rows() && chosen.size() < m.cols(); ++i) {
    std::vector<T> v = m.row_vector(i);
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      if (v[lead[k]] == T(0)) continue;
      T f = v[lead[k]] / echelon[k][lead[k]];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * echelon[k][j];
    }
    std::optional<std::size_t> pivot;
    if constexpr (detail::is_exact_v<T>) {
      for (std::size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0) {
          pivot = j;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j)
        if (std::fabs(v[j]) > best) {
          best = std::fabs(v[j]);
          pivot = j;
        }
      if (pivot && best <= detail::kRankTolerance * std::max(scale, 1e-300)) pivot.reset();
    }
    if (!pivot) continue;
    echelon.push_back(std::move(v));
    lead.push_back(*pivot);
    chosen.push_back(i);
  }
  return chosen;
}

/// True when v lies in the row space of m (exact).
bool in_row_space(const RationalMatrix& m, const RationalVector& v);

/// Exact basis of {x : m x = 0}.
std::vector<RationalVector> nullspace_basis(const RationalMatrix& m);

/// Rotation with first row v; Gram-Schmidt with re-orthogonalization.
Rotation complete_orthonormal(const RealVector& v);

/// Orthonormal basis of the orthogonal complement of span(rows), n - rank vectors.
std::vector<RealVector> orthonormal_complement_basis(const std::vector<RealVector>& rows, std::size_t n);

}  // namespace shadowlp
