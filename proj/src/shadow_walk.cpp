#include "shadowlp/shadow_walk.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "shadowlp/errors.hpp"
#include "shadowlp/linalg.hpp"

namespace shadowlp {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

using LexTerms = std::vector<std::pair<std::size_t, Rational>>;

int sign(const Rational& v) { return v < 0 ? -1 : (v > 0 ? 1 : 0); }

// Compares sparse eps-coefficient lists; lower power is more significant.
int compare_terms(const LexTerms& a, const LexTerms& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    std::size_t pa = i < a.size() ? a[i].first : npos;
    std::size_t pb = j < b.size() ? b[j].first : npos;
    int s;
    if (pa == pb) {
      s = a[i].second < b[j].second ? -1 : (a[i].second > b[j].second ? 1 : 0);
      ++i;
      ++j;
    } else if (pa < pb) {
      s = sign(a[i++].second);
    } else {
      s = -sign(b[j++].second);
    }
    if (s != 0) return s;
  }
  return 0;
}

}  // namespace

int compare(const LexValue& a, const LexValue& b) {
  if (a.real < b.real) return -1;
  if (a.real > b.real) return 1;
  return compare_terms(a.eps, b.eps);
}

Tableau::Tableau(RationalMatrix A, RationalVector b, std::vector<std::size_t> basis)
    : A_(std::move(A)), b_(std::move(b)), basis_(std::move(basis)) {
  const std::size_t rows = A_.rows(), cols = A_.cols();
  if (b_.size() != rows) throw DimensionError("tableau: rhs length mismatch");
  if (basis_.size() != cols) throw DimensionError("tableau: basis must have n rows");
  position_.assign(rows, npos);
  for (std::size_t k = 0; k < cols; ++k) {
    if (basis_[k] >= rows) throw PreconditionError("tableau: basis row out of range");
    if (position_[basis_[k]] != npos) throw PreconditionError("tableau: repeated basis row");
    position_[basis_[k]] = k;
  }
  auto inv = inverse(A_.select_rows(basis_));
  if (!inv) throw PreconditionError("tableau: basis rows are dependent");
  binv_ = std::move(*inv);
  table_ = multiply(A_, binv_);
  locked_.assign(cols, false);
  yc_.assign(cols, Rational(0));
  yw_.assign(cols, Rational(0));
  recompute_point();
  for (std::size_t i = 0; i < rows; ++i)
    if (slack_[i] < 0) throw PreconditionError("tableau: start point is infeasible");
  set_objectives(RationalVector(cols, Rational(0)), RationalVector(cols, Rational(0)));
}

void Tableau::recompute_point() {
  RationalVector bb(n());
  for (std::size_t k = 0; k < n(); ++k) bb[k] = b_[basis_[k]];
  x_ = multiply(binv_, std::span<const Rational>(bb));
  slack_.resize(m());
  for (std::size_t i = 0; i < m(); ++i) {
    Rational ax = 0;
    for (std::size_t j = 0; j < n(); ++j) ax += A_(i, j) * x_[j];
    slack_[i] = b_[i] - ax;
  }
}

void Tableau::set_objectives(RationalVector c, RationalVector w) {
  if (c.size() != n() || w.size() != n()) throw DimensionError("tableau: objective length mismatch");
  // y = v B^{-1}: coefficients of v in the basis rows.
  for (std::size_t k = 0; k < n(); ++k) {
    Rational sc = 0, sw = 0;
    for (std::size_t j = 0; j < n(); ++j) {
      sc += c[j] * binv_(j, k);
      sw += w[j] * binv_(j, k);
    }
    yc_[k] = std::move(sc);
    yw_[k] = std::move(sw);
  }
  order_.assign(m(), 0);
  std::size_t next = 1;
  for (std::size_t i = 0; i < m(); ++i)
    if (position_[i] == npos) order_[i] = next++;
  for (std::size_t k = 0; k < n(); ++k) order_[basis_[k]] = next++;
}

void Tableau::lock_row(std::size_t row) {
  auto pos = position_of(row);
  if (!pos) throw PreconditionError("tableau: only basic rows can be locked");
  locked_[*pos] = true;
}

std::size_t Tableau::locked_count() const {
  return static_cast<std::size_t>(std::count(locked_.begin(), locked_.end(), true));
}

std::optional<std::size_t> Tableau::position_of(std::size_t row) const {
  if (row >= m() || position_[row] == npos) return std::nullopt;
  return position_[row];
}

LexValue Tableau::c_value() const {
  LexValue v;
  v.real = 0;
  for (std::size_t k = 0; k < n(); ++k) v.real += yc_[k] * b_[basis_[k]];
  for (std::size_t k = 0; k < n(); ++k)
    if (yc_[k] != 0) v.eps.emplace_back(order_[basis_[k]], yc_[k]);
  std::sort(v.eps.begin(), v.eps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

// slack_i + eps^o(i) - sum_j T(i,j) eps^o(B_j), sorted by power.
LexTerms Tableau::lex_slack(std::size_t row) const {
  LexTerms t;
  t.emplace_back(order_[row], Rational(1));
  for (std::size_t j = 0; j < n(); ++j)
    if (table_(row, j) != 0) t.emplace_back(order_[basis_[j]], Rational(-table_(row, j)));
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return t;
}

std::optional<std::size_t> Tableau::ratio_test(std::size_t pos) const {
  std::optional<std::size_t> best;
  Rational best_ratio;
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < m(); ++i) {
    if (position_[i] != npos || table_(i, pos) >= 0) continue;
    Rational ratio = slack_[i] / -table_(i, pos);
    if (!best || ratio < best_ratio) {
      best = i;
      best_ratio = std::move(ratio);
      ties.assign(1, i);
    } else if (ratio == best_ratio) {
      ties.push_back(i);
    }
  }
  if (ties.size() <= 1) return best;
  // Real ratios tie: compare eps parts of slack / rate.
  auto scaled = [&](std::size_t i) {
    LexTerms t = lex_slack(i);
    Rational rate = -table_(i, pos);
    for (auto& term : t) term.second /= rate;
    return t;
  };
  std::size_t winner = ties.front();
  LexTerms winner_terms = scaled(winner);
  for (std::size_t q = 1; q < ties.size(); ++q) {
    LexTerms t = scaled(ties[q]);
    if (compare_terms(t, winner_terms) < 0) {
      winner = ties[q];
      winner_terms = std::move(t);
    }
  }
  return winner;
}

void Tableau::pivot(std::size_t pos, std::size_t row) {
  if (pos >= n() || row >= m()) throw PreconditionError("tableau: pivot out of range");
  if (position_[row] != npos) throw PreconditionError("tableau: entering row is already basic");
  if (locked_[pos]) throw PreconditionError("tableau: locked basis position cannot leave");
  const Rational rate = -table_(row, pos);
  if (rate <= 0) throw PreconditionError("tableau: entering row does not block the edge");

  // Move the point along d = -B^{-1} e_pos by slack/rate.
  Rational step = slack_[row] / rate;
  if (step != 0) {
    for (std::size_t j = 0; j < n(); ++j) x_[j] -= step * binv_(j, pos);
    for (std::size_t i = 0; i < m(); ++i) slack_[i] += step * table_(i, pos);
  }
  slack_[row] = 0;

  const RationalVector t = table_.row_vector(row);
  auto update = [&](std::span<Rational> v) {
    if (v[pos] == 0) return;
    Rational f = v[pos] / t[pos];
    for (std::size_t j = 0; j < n(); ++j)
      if (j != pos && t[j] != 0) v[j] -= f * t[j];
    v[pos] = std::move(f);
  };
  for (std::size_t i = 0; i < m(); ++i) update(table_.row(i));
  for (std::size_t i = 0; i < n(); ++i) update(binv_.row(i));
  update(yc_);
  update(yw_);
  operations_ += static_cast<std::uint64_t>(m() + n() + 2) * n();

  position_[basis_[pos]] = npos;
  basis_[pos] = row;
  position_[row] = pos;
  ++pivots_;
}

std::optional<Edge> select_edge(const Tableau& tab) {
  std::optional<Rational> best;
  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < tab.n(); ++k) {
    if (tab.is_locked_position(k) || tab.c_cost(k) >= 0) continue;
    Rational slope = tab.w_cost(k) / tab.c_cost(k);
    if (!best || slope < *best) {
      best = std::move(slope);
      candidates.assign(1, k);
    } else if (slope == *best) {
      candidates.push_back(k);
    }
  }
  if (!best) return std::nullopt;
  std::optional<Edge> chosen;
  for (std::size_t k : candidates) {
    auto row = tab.ratio_test(k);
    if (!row) throw UnboundedEdgeError("shadow walk met an unbounded edge");
    if (!chosen || *row < chosen->entering_row) chosen = Edge{k, *row, *best};
  }
  return chosen;
}

namespace {

PathStep apply_edge(Tableau& tab, const Edge& e) {
  PathStep step;
  step.leaving_row = tab.basis()[e.position];
  step.entering_row = e.entering_row;
  step.slope = e.slope;
  tab.pivot(e.position, e.entering_row);
  step.c_value = tab.c_value();
  step.vertex = tab.point();
  step.basis = tab.basis();
  return step;
}

ShadowPath start_path(const Tableau& tab) {
  ShadowPath path;
  path.start_vertex = tab.point();
  path.start_basis = tab.basis();
  path.start_c_value = tab.c_value();
  return path;
}

}  // namespace

std::variant<PathStep, AtOptimum> shadow_pivot(Tableau& tab) {
  auto e = select_edge(tab);
  if (!e) return AtOptimum{};
  return apply_edge(tab, *e);
}

WalkResult walk(Tableau& tab, std::optional<std::size_t> pivot_cap) {
  ShadowPath path = start_path(tab);
  for (;;) {
    auto e = select_edge(tab);
    if (!e) return Finished{tab.solution(), std::move(path)};
    if (pivot_cap && path.steps.size() >= *pivot_cap) return CapExceeded{std::move(path)};
    path.steps.push_back(apply_edge(tab, *e));
  }
}

WalkResult shadow_walk(const LinearProgram& lp, const BasicSolution& x0, const RationalVector& c,
                       const RationalVector& w, std::optional<std::size_t> pivot_cap) {
  Tableau tab(lp.A, lp.b, x0.basis);
  tab.set_objectives(c, w);
  return walk(tab, pivot_cap);
}

std::vector<RealVector> tight_rows_at(const LinearProgram& lp, const BasicSolution& x0) {
  if (x0.basis.size() != lp.n()) throw DimensionError("tight_rows_at: basis must have n rows");
  RationalMatrix B = lp.A.select_rows(x0.basis);
  if (rank(B) != lp.n()) throw PreconditionError("tight_rows_at: basis rows are dependent");
  std::vector<RealVector> rows;
  for (std::size_t i : x0.basis) {
    RealVector r = to_double(lp.A.row_vector(i));
    double nr = norm(r);
    for (double& v : r) v /= nr;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string path_csv(const ShadowPath& path) {
  std::ostringstream out;
  out << "pivot_index,entering_row,leaving_row,slope,c_value\r\n";
  for (std::size_t s = 0; s < path.steps.size(); ++s) {
    const auto& st = path.steps[s];
    out << s << ',' << st.entering_row << ',' << st.leaving_row << ',' << to_string(st.slope) << ','
        << to_string(st.c_value.real) << "\r\n";
  }
  return out.str();
}

}  // namespace shadowlp
