#include "shadowlp/linalg.hpp"

#include <cmath>

namespace shadowlp {

namespace {

constexpr double kUnitTolerance = 1e-10;
constexpr double kResidualTolerance = 1e-8;

void orthogonalize_against(RealVector& v, const std::vector<RealVector>& basis) {
  // Classical Gram-Schmidt applied twice.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      double p = dot(v, q);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= p * q[j];
    }
  }
}

// Extends an orthonormal set with unit vectors e_j, always taking the
// candidate with the largest residual so the completion stays well conditioned.
void complete_with_unit_vectors(std::vector<RealVector>& basis, std::size_t n) {
  std::vector<bool> used(n, false);
  while (basis.size() < n) {
    RealVector best;
    double best_norm = -1.0;
    std::size_t best_j = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      RealVector e(n, 0.0);
      e[j] = 1.0;
      orthogonalize_against(e, basis);
      double nr = norm(e);
      if (nr > best_norm) {
        best_norm = nr;
        best = std::move(e);
        best_j = j;
      }
    }
    if (best_j == n || best_norm <= kResidualTolerance) throw LpError("orthonormal completion failed");
    used[best_j] = true;
    for (double& x : best) x /= best_norm;
    basis.push_back(std::move(best));
  }
}

}  // namespace

RealVector Rotation::apply_transpose(const RealVector& z) const {
  if (z.size() != Q.rows()) throw DimensionError("rotation size mismatch");
  RealVector x(Q.cols(), 0.0);
  for (std::size_t i = 0; i < Q.rows(); ++i)
    for (std::size_t j = 0; j < Q.cols(); ++j) x[j] += Q(i, j) * z[i];
  return x;
}

bool in_row_space(const RationalMatrix& m, const RationalVector& v) {
  RationalMatrix ext = m;
  ext.append_row(std::span<const Rational>(v));
  return rank(ext) == rank(m);
}

std::vector<RationalVector> nullspace_basis(const RationalMatrix& m) {
  const std::size_t n = m.cols();
  RationalMatrix a = m;
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < a.rows(); ++col) {
    std::size_t p = r;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    detail::swap_rows(a, r, p);
    Rational piv = a(r, col);
    for (std::size_t j = 0; j < n; ++j) a(r, j) /= piv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_cols.push_back(col);
    ++r;
  }
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(n, Rational(0));
    v[free] = 1;
    for (std::size_t k = 0; k < pivot_cols.size(); ++k) v[pivot_cols[k]] = -a(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

Rotation complete_orthonormal(const RealVector& v) {
  const std::size_t n = v.size();
  if (n == 0) throw DimensionError("complete_orthonormal: empty vector");
  double nv = norm(v);
  if (nv == 0.0) throw PreconditionError("complete_orthonormal: zero vector");
  if (std::fabs(nv - 1.0) > kUnitTolerance) throw PreconditionError("complete_orthonormal: vector is not unit length");
  std::vector<RealVector> basis{v};
  complete_with_unit_vectors(basis, n);
  Rotation rot{RealMatrix::from_rows(basis), v};
  return rot;
}

std::vector<RealVector> orthonormal_complement_basis(const std::vector<RealVector>& rows, std::size_t n) {
  double scale = 0.0;
  for (const auto& r : rows) {
    if (r.size() != n) throw DimensionError("orthonormal_complement_basis: row length mismatch");
    scale = std::max(scale, norm(r));
  }
  std::vector<RealVector> span_basis;
  for (const auto& r : rows) {
    RealVector v = r;
    orthogonalize_against(v, span_basis);
    double nr = norm(v);
    if (nr <= detail::kRankTolerance * std::max(scale, 1e-300)) continue;
    for (double& x : v) x /= nr;
    span_basis.push_back(std::move(v));
  }
  const std::size_t r = span_basis.size();
  complete_with_unit_vectors(span_basis, n);
  return {span_basis.begin() + static_cast<std::ptrdiff_t>(r), span_basis.end()};
}

}  // namespace shadowlp
