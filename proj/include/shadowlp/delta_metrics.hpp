#pragma once

#include <optional>
#include <vector>

#include "shadowlp/matrix.hpp"
#include "shadowlp/rational.hpp"

namespace shadowlp {

/// Enumeration guard shared by the brute-force routines.
inline constexpr std::size_t kEnumerationGuard = 1'000'000;

struct DeltaReport {
  double delta = 0.0;
  Rational inv_delta_sq;  // exact 1/delta^2 when computed from rational rows
  std::vector<std::size_t> witness_rows;
  Rational Delta;       // max |subdeterminant|
  Rational Delta_1;     // max |entry|
  Rational Delta_nm1;   // max |(n-1)-minor|, 1 for n = 1
  bool bound_nDeltaSq_ok = false;
  bool bound_nD1Dnm1_ok = false;
};

/// Exact 1/delta(rows)^2 of n independent rows (normalization implicit).
/// Throws SingularMatrixError.
Rational inverse_delta_squared(const RationalMatrix& rows);

double delta_of_rows(const RationalMatrix& rows);
double delta_of_rows(const RealMatrix& rows);

/// Minimum over all independent n-subsets. Throws PreconditionError on rank
/// deficiency and GuardExceededError past kEnumerationGuard subsets.
/// The subdeterminant fields are filled as well.
DeltaReport delta_matrix(const RationalMatrix& A);
DeltaReport delta_matrix(const RealMatrix& A);

Rational determinant(const RationalMatrix& M);

/// Max |det| over all square submatrices; over k x k only when size is given.
Rational max_subdeterminant(const RationalMatrix& A, std::optional<std::size_t> size = std::nullopt);

/// 1/delta <= n Delta^2, checked on squares. Also records 1/delta <= n Delta_1 Delta_{n-1}.
bool check_bounds(DeltaReport& report, std::size_t n);

/// Binomial coefficient saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k);

/// Calls f with every k-subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    f(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace shadowlp
