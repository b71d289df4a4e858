#include "shadowlp/randomness.hpp"

#include <cmath>

#include "shadowlp/errors.hpp"
#include "shadowlp/linalg.hpp"

namespace shadowlp {

Rational RandomStream::dyadic(unsigned k) {
  if (k == 0) throw PreconditionError("dyadic draw needs k >= 1");
  const std::uint64_t word = main_();
  bits_ += k;
  Integer j;
  if (k <= 64) {
    j = Integer(word >> (64 - k));
  } else {
    j = Integer(word);
    unsigned rest = k - 64;
    while (rest > 0) {
      unsigned take = rest < 64 ? rest : 64;
      std::uint64_t more = extra_();
      j = (j << take) | Integer(take == 64 ? more : (more >> (64 - take)));
      rest -= take;
    }
  }
  return Rational(j, Integer(1) << k);
}

double RandomStream::continuous() {
  const std::uint64_t word = main_();
  bits_ += 53;
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

double RandomStream::unit(DrawMode mode, unsigned k) {
  if (mode == DrawMode::Continuous) return continuous();
  return to_double(dyadic(k));
}

Rational dyadic_unit_draw(RandomStream& rng, unsigned k) { return rng.dyadic(k); }

std::size_t bit_budget(std::size_t m, std::size_t n, double phi, double delta) {
  if (m == 0 || n == 0 || !(phi > 0) || !(delta > 0) || delta > 1)
    throw PreconditionError("bit_budget: arguments out of range");
  const double nd = static_cast<double>(n);
  double v = 6.0 * nd * std::log2(static_cast<double>(m)) + 6.0 * std::log2(nd) + 3.0 * std::log2(phi) +
             3.0 * std::log2(1.0 / delta) + 12.0;
  // Formula values that are integers in exact arithmetic stay integers.
  return static_cast<std::size_t>(std::ceil(v - 1e-9));
}

PerturbedObjective perturb_objective(const RealVector& c0, const RngConfig& cfg, RandomStream& rng) {
  const std::size_t n = c0.size();
  if (std::fabs(norm(c0) - 1.0) > 1e-10) throw PreconditionError("perturb_objective: c0 must be a unit vector");
  if (cfg.phi < std::sqrt(static_cast<double>(n))) throw PreconditionError("perturb_objective: phi < sqrt(n)");
  const double len = 1.0 / cfg.phi;
  PerturbedObjective out;
  out.c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = c0[i] > 1.0 - len ? c0[i] - len : c0[i];
    out.intervals.emplace_back(lo, lo + len);
    out.c[i] = lo + len * rng.unit(cfg.mode, cfg.bits_per_draw);
  }
  return out;
}

RealVector draw_lambda(std::size_t n, const RngConfig& cfg, RandomStream& rng) {
  RealVector lambda(n);
  for (auto& l : lambda) l = 1.0 - rng.unit(cfg.mode, cfg.bits_per_draw);
  return lambda;
}

RealVector cone_objective(const std::vector<RealVector>& rows, const RealVector& lambda) {
  if (rows.size() != lambda.size() || rows.empty()) throw DimensionError("cone_objective: size mismatch");
  const std::size_t n = rows.front().size();
  for (const auto& u : rows) {
    if (u.size() != n) throw DimensionError("cone_objective: ragged rows");
    if (std::fabs(norm(u) - 1.0) > 1e-10) throw PreconditionError("cone_objective: rows must be unit vectors");
  }
  if (rank(RealMatrix::from_rows(rows)) != rows.size())
    throw SingularMatrixError("cone_objective: rows are dependent");
  RealVector w(n, 0.0);
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t j = 0; j < n; ++j) w[j] -= lambda[k] * rows[k][j];
  return w;
}

}  // namespace shadowlp
