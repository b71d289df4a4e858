#include "shadowlp/delta_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "shadowlp/errors.hpp"
#include "shadowlp/linalg.hpp"

namespace shadowlp {

namespace {

Rational abs_rational(const Rational& v) { return v < 0 ? Rational(-v) : v; }

// Bareiss on int64; caller guarantees the Hadamard bound fits.
std::int64_t bareiss_det(std::vector<std::int64_t> a, std::size_t k) {
  std::int64_t sign = 1, prev = 1;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && a[p * k + c] == 0) ++p;
    if (p == k) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < k; ++j) std::swap(a[p * k + j], a[c * k + j]);
      sign = -sign;
    }
    for (std::size_t i = c + 1; i < k; ++i) {
      for (std::size_t j = c + 1; j < k; ++j) {
        __int128 v = static_cast<__int128>(a[i * k + j]) * a[c * k + c] -
                     static_cast<__int128>(a[i * k + c]) * a[c * k + j];
        a[i * k + j] = static_cast<std::int64_t>(v / prev);
      }
    }
    prev = a[c * k + c];
  }
  return sign * a[(k - 1) * k + (k - 1)];
}

// True when every k x k minor of A is guaranteed to fit in int64 (Hadamard).
bool small_integral(const RationalMatrix& A, std::size_t k) {
  double max_row = 0.0;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double sq = 0.0;
    for (const auto& v : A.row(i)) {
      if (!is_integral(v) || abs_rational(v) > 1'000'000) return false;
      double d = to_double(v);
      sq += d * d;
    }
    max_row = std::max(max_row, sq);
  }
  // Bareiss intermediates are minors themselves; products need two of them.
  return 0.5 * static_cast<double>(k) * std::log2(std::max(max_row, 1.0)) < 30.0;
}

void check_guard(std::size_t count) {
  if (count > kEnumerationGuard) throw GuardExceededError("enumeration guard exceeded (" + std::to_string(count) + ")");
}

}  // namespace

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    if (r > std::numeric_limits<std::size_t>::max() / (n - k + i)) return std::numeric_limits<std::size_t>::max();
    r = r * (n - k + i) / i;
  }
  return r;
}

Rational inverse_delta_squared(const RationalMatrix& rows) {
  auto inv = inverse(rows);
  if (!inv) throw SingularMatrixError("delta_of_rows: rows are dependent");
  const std::size_t n = rows.rows();
  Rational best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Rational row_sq = 0, col_sq = 0;
    for (std::size_t j = 0; j < n; ++j) {
      row_sq += rows(k, j) * rows(k, j);
      col_sq += (*inv)(j, k) * (*inv)(j, k);
    }
    Rational v = row_sq * col_sq;
    if (v > best) best = v;
  }
  return best;
}

double delta_of_rows(const RationalMatrix& rows) {
  return 1.0 / std::sqrt(to_double(inverse_delta_squared(rows)));
}

double delta_of_rows(const RealMatrix& rows) {
  const std::size_t n = rows.rows();
  RealMatrix unit = rows;
  for (std::size_t k = 0; k < n; ++k) {
    double nr = norm(unit.row_vector(k));
    if (nr == 0.0) throw SingularMatrixError("delta_of_rows: zero row");
    for (std::size_t j = 0; j < n; ++j) unit(k, j) /= nr;
  }
  auto inv = inverse(unit);
  if (!inv) throw SingularMatrixError("delta_of_rows: rows are dependent");
  double best = 0.0;
  for (std::size_t k = 0; k < n; ++k) best = std::max(best, norm(inv->column(k)));
  return 1.0 / best;
}

Rational determinant(const RationalMatrix& M) {
  const std::size_t n = M.rows();
  if (M.cols() != n) throw DimensionError("determinant needs a square matrix");
  RationalMatrix a = M;
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      detail::swap_rows(a, p, c);
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

Rational max_subdeterminant(const RationalMatrix& A, std::optional<std::size_t> size) {
  const std::size_t m = A.rows(), n = A.cols();
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& v : A.row(i))
      if (!is_integral(v)) throw PreconditionError("max_subdeterminant needs an integral matrix");
  const std::size_t lo = size ? *size : 1, hi = size ? *size : std::min(m, n);
  if (lo == 0) return 1;
  if (hi > std::min(m, n)) return 0;
  std::size_t total = 0;
  for (std::size_t k = lo; k <= hi; ++k) {
    std::size_t c = binomial(m, k);
    std::size_t d = binomial(n, k);
    if (c > kEnumerationGuard || d > kEnumerationGuard || c * d > kEnumerationGuard) check_guard(kEnumerationGuard + 1);
    total += c * d;
  }
  check_guard(total);

  Rational best = 0;
  for (std::size_t k = lo; k <= hi; ++k) {
    const bool fast = small_integral(A, k);
    std::int64_t best_fast = 0;
    for_each_subset(m, k, [&](const std::vector<std::size_t>& rows) {
      for_each_subset(n, k, [&](const std::vector<std::size_t>& cols) {
        if (fast) {
          std::vector<std::int64_t> a(k * k);
          for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
              a[i * k + j] = static_cast<std::int64_t>(numerator(A(rows[i], cols[j])).convert_to<long long>());
          std::int64_t d = bareiss_det(std::move(a), k);
          best_fast = std::max(best_fast, d < 0 ? -d : d);
        } else {
          RationalMatrix sub(k, k);
          for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sub(i, j) = A(rows[i], cols[j]);
          Rational d = abs_rational(determinant(sub));
          if (d > best) best = d;
        }
      });
    });
    if (fast && Rational(best_fast) > best) best = best_fast;
  }
  return best;
}

namespace {

template <class T>
DeltaReport delta_matrix_impl(const Matrix<T>& A) {
  const std::size_t m = A.rows(), n = A.cols();
  if (rank(A) != n) throw PreconditionError("delta_matrix needs a full-rank matrix");
  check_guard(binomial(m, n));
  DeltaReport rep;
  bool have = false;
  for_each_subset(m, n, [&](const std::vector<std::size_t>& rows) {
    Matrix<T> sub = A.select_rows(rows);
    if constexpr (std::is_same_v<T, Rational>) {
      if (!inverse(sub)) return;
      Rational v = inverse_delta_squared(sub);
      if (!have || v > rep.inv_delta_sq) {
        rep.inv_delta_sq = v;
        rep.witness_rows = rows;
        have = true;
      }
    } else {
      if (rank(sub) != n) return;
      double d = delta_of_rows(sub);
      if (!have || d < rep.delta) {
        rep.delta = d;
        rep.witness_rows = rows;
        have = true;
      }
    }
  });
  if constexpr (std::is_same_v<T, Rational>) {
    rep.delta = 1.0 / std::sqrt(to_double(rep.inv_delta_sq));
  } else {
    rep.inv_delta_sq = exact_rational(1.0 / (rep.delta * rep.delta));
  }
  return rep;
}

}  // namespace

DeltaReport delta_matrix(const RationalMatrix& A) {
  DeltaReport rep = delta_matrix_impl(A);
  bool integral = true;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (const auto& v : A.row(i)) integral = integral && is_integral(v);
  if (integral) {
    rep.Delta = max_subdeterminant(A);
    rep.Delta_1 = max_subdeterminant(A, 1);
    rep.Delta_nm1 = A.cols() > 1 ? max_subdeterminant(A, A.cols() - 1) : Rational(1);
    check_bounds(rep, A.cols());
  }
  return rep;
}

DeltaReport delta_matrix(const RealMatrix& A) { return delta_matrix_impl(A); }

bool check_bounds(DeltaReport& report, std::size_t n) {
  // 1/delta <= X  <=>  1/delta^2 <= X^2 for X >= 0.
  Rational nn = Rational(n) * n;
  Rational d2 = report.Delta * report.Delta;
  report.bound_nDeltaSq_ok = report.inv_delta_sq <= nn * d2 * d2;
  Rational t = report.Delta_1 * report.Delta_nm1;
  report.bound_nD1Dnm1_ok = report.inv_delta_sq <= nn * t * t;
  return report.bound_nDeltaSq_ok;
}

}  // namespace shadowlp
