#include "shadowlp/lp_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/integer.hpp>

#include "shadowlp/errors.hpp"
#include "shadowlp/linalg.hpp"
#include "shadowlp/shadow_walk.hpp"

namespace shadowlp {

namespace {

double exact_norm(std::span<const Rational> row) {
  Rational sq = 0;
  for (const auto& v : row) sq += v * v;
  return std::sqrt(to_double(sq));
}

bool contains(const std::vector<std::size_t>& set, std::size_t i) {
  return std::find(set.begin(), set.end(), i) != set.end();
}

// Appends a row keeping row_scales consistent with the normalization state.
void push_row(LinearProgram& lp, const RationalVector& row, const Rational& rhs) {
  lp.A.append_row(std::span<const Rational>(row));
  lp.b.push_back(rhs);
  lp.row_scales.push_back(lp.flags.normalized ? exact_norm(row) : 1.0);
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

Rational parse_token(const std::string& tok, std::size_t line) {
  try {
    return parse_rational(tok);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

void LinearProgram::validate() const {
  if (m() < 1 || n() < 1) throw DimensionError("LP needs m >= 1 and n >= 1");
  if (b.size() != m()) throw DimensionError("rhs length differs from row count");
  if (c0.size() != n()) throw DimensionError("objective length differs from column count");
  if (row_scales.size() != m()) throw DimensionError("row_scales length differs from row count");
  for (std::size_t i = 0; i < m(); ++i) {
    auto r = A.row(i);
    if (std::all_of(r.begin(), r.end(), [](const Rational& v) { return v == 0; }))
      throw PreconditionError("row " + std::to_string(i) + " is zero");
    if (!(row_scales[i] > 0.0)) throw PreconditionError("row scales must be positive");
  }
  for (auto i : box_rows) {
    if (i >= m()) throw PreconditionError("box row index out of range");
    if (contains(synthetic_rows, i)) throw PreconditionError("row is both box and synthetic");
  }
  for (auto i : synthetic_rows)
    if (i >= m()) throw PreconditionError("synthetic row index out of range");
}

RealMatrix LinearProgram::float_rows() const {
  RealMatrix out(m(), n());
  for (std::size_t i = 0; i < m(); ++i)
    for (std::size_t j = 0; j < n(); ++j) out(i, j) = to_double(A(i, j)) / row_scales[i];
  return out;
}

RealVector LinearProgram::float_rhs() const {
  RealVector out(m());
  for (std::size_t i = 0; i < m(); ++i) out[i] = to_double(b[i]) / row_scales[i];
  return out;
}

RealVector LinearProgram::float_objective() const {
  RealVector out = to_double(c0);
  for (double& v : out) v /= objective_scale;
  return out;
}

bool LinearProgram::is_box_row(std::size_t i) const { return contains(box_rows, i); }
bool LinearProgram::is_synthetic_row(std::size_t i) const { return contains(synthetic_rows, i); }

bool LinearProgram::is_integral() const {
  for (std::size_t i = 0; i < m(); ++i)
    for (const auto& v : A.row(i))
      if (!shadowlp::is_integral(v)) return false;
  return true;
}

LinearProgram make_lp(RationalMatrix A, RationalVector b, RationalVector c0) {
  LinearProgram lp;
  lp.A = std::move(A);
  lp.b = std::move(b);
  lp.c0 = std::move(c0);
  lp.row_scales.assign(lp.A.rows(), 1.0);
  lp.validate();
  return lp;
}

bool is_feasible(const LinearProgram& lp, const RationalVector& x) {
  if (x.size() != lp.n()) throw DimensionError("point has wrong dimension");
  for (std::size_t i = 0; i < lp.m(); ++i) {
    Rational ax = 0;
    for (std::size_t j = 0; j < lp.n(); ++j) ax += lp.A(i, j) * x[j];
    if (ax > lp.b[i]) return false;
  }
  return true;
}

std::vector<std::size_t> tight_rows(const LinearProgram& lp, const RationalVector& x) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < lp.m(); ++i) {
    Rational ax = 0;
    for (std::size_t j = 0; j < lp.n(); ++j) ax += lp.A(i, j) * x[j];
    if (ax == lp.b[i]) out.push_back(i);
  }
  return out;
}

void check_basic_feasible(const LinearProgram& lp, const BasicSolution& sol) {
  if (sol.basis.size() != lp.n()) throw PreconditionError("basis must have n rows");
  if (!is_feasible(lp, sol.point)) throw PreconditionError("point is infeasible");
  auto tight = tight_rows(lp, sol.point);
  for (auto i : sol.basis)
    if (i >= lp.m() || !contains(tight, i)) throw PreconditionError("basis row is not tight");
  if (rank(lp.A.select_rows(sol.basis)) != lp.n()) throw PreconditionError("basis rows are dependent");
}

// --- text format --------------------------------------------------------

LinearProgram parse_lp(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  enum class Stage { Objective, St, Rows } stage = Stage::Objective;
  RationalVector c0;
  RationalMatrix A;
  RationalVector b;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto tokens = split_tokens(raw);
    if (tokens.empty()) continue;
    switch (stage) {
      case Stage::Objective:
        if (tokens[0] != "maximize") throw ParseError(line_no, "expected 'maximize'");
        if (tokens.size() == 1) throw ParseError(line_no, "empty objective");
        for (std::size_t k = 1; k < tokens.size(); ++k) c0.push_back(parse_token(tokens[k], line_no));
        stage = Stage::St;
        break;
      case Stage::St:
        if (tokens.size() != 1 || tokens[0] != "st") throw ParseError(line_no, "expected 'st'");
        stage = Stage::Rows;
        break;
      case Stage::Rows: {
        if (tokens.size() < 3 || tokens[tokens.size() - 2] != "<=")
          throw ParseError(line_no, "expected 'a1 ... an <= b'");
        const std::size_t n = tokens.size() - 2;
        if (n != c0.size())
          throw DimensionError("line " + std::to_string(line_no) + ": row has " + std::to_string(n) +
                               " coefficients, expected " + std::to_string(c0.size()));
        RationalVector row;
        for (std::size_t k = 0; k < n; ++k) row.push_back(parse_token(tokens[k], line_no));
        if (std::all_of(row.begin(), row.end(), [](const Rational& v) { return v == 0; }))
          throw ParseError(line_no, "zero row");
        A.append_row(std::span<const Rational>(row));
        b.push_back(parse_token(tokens.back(), line_no));
        break;
      }
    }
  }
  if (stage == Stage::Objective) throw ParseError(line_no, "missing 'maximize' line");
  if (stage == Stage::St) throw ParseError(line_no, "missing 'st' line");
  if (A.rows() == 0) throw ParseError(line_no, "no constraint rows");
  return make_lp(std::move(A), std::move(b), std::move(c0));
}

std::string serialize_lp(const LinearProgram& lp) {
  std::ostringstream out;
  out << "maximize";
  for (const auto& v : lp.c0) out << ' ' << to_string(v);
  out << "\nst\n";
  for (std::size_t i = 0; i < lp.m(); ++i) {
    for (std::size_t j = 0; j < lp.n(); ++j) out << (j ? " " : "") << to_string(lp.A(i, j));
    out << " <= " << to_string(lp.b[i]) << '\n';
  }
  return out.str();
}

std::string matrix_csv(const LinearProgram& lp) {
  std::ostringstream out;
  for (std::size_t j = 0; j <= lp.n(); ++j) out << (j ? "," : "") << "col" << j;
  out << "\r\n";
  for (std::size_t i = 0; i < lp.m(); ++i) {
    for (std::size_t j = 0; j < lp.n(); ++j) out << to_string(lp.A(i, j)) << ',';
    out << to_string(lp.b[i]) << "\r\n";
  }
  return out.str();
}

// --- preprocessing ------------------------------------------------------

LinearProgram normalize(const LinearProgram& lp) {
  if (std::all_of(lp.c0.begin(), lp.c0.end(), [](const Rational& v) { return v == 0; }))
    throw PreconditionError("normalize: zero objective vector");
  LinearProgram out = lp;
  for (std::size_t i = 0; i < out.m(); ++i) out.row_scales[i] = exact_norm(out.A.row(i));
  out.objective_scale = exact_norm(out.c0);
  out.flags.normalized = true;
  out.validate();
  return out;
}

BasicSolution RankBackMap::lift(const BasicSolution& sol) const {
  if (sol.point.size() != original_dim) throw DimensionError("back map: dimension mismatch");
  BasicSolution out{sol.point, {}};
  for (auto i : sol.basis)
    if (i < original_rows) out.basis.push_back(i);
  return out;
}

std::optional<RationalVector> lineality_ray(const LinearProgram& lp) {
  auto null = nullspace_basis(lp.A);
  if (null.empty()) return std::nullopt;
  // Projection of c0 onto the null space (up to scaling by the Gram matrix).
  RationalVector d(lp.n(), Rational(0));
  for (const auto& v : null) {
    Rational coef = dot(lp.c0, v);
    for (std::size_t j = 0; j < lp.n(); ++j) d[j] += coef * v[j];
  }
  if (dot(lp.c0, d) > 0) return d;
  return std::nullopt;
}

RankRaised append_rank_rows(const LinearProgram& lp, RankRaiseKind kind) {
  const std::size_t r = rank(lp.A);
  if (r >= lp.n()) throw PreconditionError("rank raising needs a rank-deficient matrix");
  RankRaised out{lp, RankBackMap{0, lp.m(), lp.n()}};
  LinearProgram& ext = out.lp;
  auto add_pair = [&](const RationalVector& v) {
    RationalVector neg(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) neg[j] = -v[j];
    for (const RationalVector* row : {&v, static_cast<const RationalVector*>(&neg)}) {
      push_row(ext, *row, Rational(0));
      ext.synthetic_rows.push_back(ext.m() - 1);
    }
  };
  if (kind == RankRaiseKind::UnitVectors) {
    if (!lp.is_integral()) throw PreconditionError("raise_rank_Delta needs an integral matrix");
    RationalMatrix span = lp.A;
    std::size_t cur = r;
    for (std::size_t j = 0; j < lp.n() && cur < lp.n(); ++j) {
      RationalVector e(lp.n(), Rational(0));
      e[j] = 1;
      if (in_row_space(span, e)) continue;
      span.append_row(std::span<const Rational>(e));
      ++cur;
      add_pair(e);
    }
  } else {
    RealMatrix f = lp.float_rows();
    std::vector<RealVector> rows;
    for (std::size_t i = 0; i < f.rows(); ++i) rows.push_back(f.row_vector(i));
    for (const auto& o : orthonormal_complement_basis(rows, lp.n())) add_pair(exact_rational(o));
  }
  if (rank(ext.A) != ext.n()) throw LpError("rank raising failed to reach full rank");
  out.back_map.appended_rows = ext.m() - lp.m();
  ext.flags.full_rank = true;
  ext.validate();
  return out;
}

namespace {

RankRaiseResult raise_rank(const LinearProgram& lp, RankRaiseKind kind) {
  if (kind == RankRaiseKind::UnitVectors && !lp.is_integral())
    throw PreconditionError("raise_rank_Delta needs an integral matrix");
  if (rank(lp.A) >= lp.n()) throw PreconditionError("rank raising called on a full-rank matrix");
  if (auto ray = lineality_ray(lp)) return UnboundedRay{std::move(*ray)};
  return append_rank_rows(lp, kind);
}

}  // namespace

RankRaiseResult raise_rank_delta(const LinearProgram& lp) {
  return raise_rank(lp, RankRaiseKind::OrthonormalComplement);
}

RankRaiseResult raise_rank_Delta(const LinearProgram& lp) { return raise_rank(lp, RankRaiseKind::UnitVectors); }

std::size_t encoding_length(const RationalMatrix& A, const RationalVector& b) {
  auto entry = [](const Rational& v) {
    return 1 + bit_length(numerator(v)) + bit_length(denominator(v));
  };
  std::size_t total = 0;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (const auto& v : A.row(i)) total += entry(v);
  for (const auto& v : b) total += entry(v);
  return total;
}

Integer denominator_lcm(const RationalMatrix& A) {
  Integer l = 1;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (const auto& v : A.row(i)) l = boost::multiprecision::lcm(l, Integer(denominator(v)));
  return l;
}

Rational box_radius(const LinearProgram& lp) {
  const std::size_t n = lp.n();
  std::size_t root = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (root * root < n) ++root;
  const long long exponent = static_cast<long long>(encoding_length(lp.A, lp.b)) - static_cast<long long>(n * n);
  Integer pow2 = Integer(1) << static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
  Rational r = Rational(Integer(root) * boost::multiprecision::pow(denominator_lcm(lp.A), static_cast<unsigned>(n)));
  return exponent >= 0 ? Rational(r * pow2) : Rational(r / pow2);
}

LinearProgram bound_polytope(const LinearProgram& lp) {
  auto anchors = independent_rows(lp.A);
  if (anchors.size() != lp.n()) throw PreconditionError("bound_polytope needs a full-rank matrix");
  const Rational r = box_radius(lp);
  LinearProgram out = lp;
  for (auto i : anchors) {
    RationalVector a = lp.A.row_vector(i);
    Rational l1 = 0;
    for (const auto& v : a) l1 += v < 0 ? Rational(-v) : v;
    Rational R = r * l1;
    RationalVector neg(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) neg[j] = -a[j];
    push_row(out, a, R);
    out.box_rows.push_back(out.m() - 1);
    push_row(out, neg, R);
    out.box_rows.push_back(out.m() - 1);
  }
  out.flags.full_rank = true;
  out.flags.bounded = true;
  out.validate();
  return out;
}

std::variant<Bounded, UnboundedCertificate> assert_unbounded_if_box_tight(const BasicSolution& vertex,
                                                                           const LinearProgram& lp) {
  if (!is_feasible(lp, vertex.point)) throw PreconditionError("vertex is infeasible for the boxed LP");
  auto tight = tight_rows(lp, vertex.point);
  if (std::none_of(tight.begin(), tight.end(), [&](std::size_t i) { return lp.is_box_row(i); })) return Bounded{};

  // Ray test: maximize c0 d over {a_i d <= 0 (original rows), box rows <= 1}.
  RationalVector rhs(lp.m(), Rational(0));
  std::vector<std::size_t> original;
  for (std::size_t i = 0; i < lp.m(); ++i) {
    if (lp.is_box_row(i)) rhs[i] = 1;
    else original.push_back(i);
  }
  auto pick = independent_rows(lp.A.select_rows(original));
  if (pick.size() != lp.n()) throw PreconditionError("ray test needs full-rank original rows");
  std::vector<std::size_t> basis;
  RationalVector w(lp.n(), Rational(0));
  for (auto k : pick) {
    basis.push_back(original[k]);
    for (std::size_t j = 0; j < lp.n(); ++j) w[j] -= lp.A(original[k], j);
  }
  Tableau tab(lp.A, rhs, basis);
  tab.set_objectives(lp.c0, w);
  auto res = walk(tab, std::nullopt);
  const auto& fin = std::get<Finished>(res);
  if (dot(lp.c0, fin.solution.point) > 0) return UnboundedCertificate{fin.solution.point};
  return Bounded{};
}

BasicSolution purify_to_vertex(const LinearProgram& lp, const RationalVector& x_in) {
  if (!is_feasible(lp, x_in)) throw PreconditionError("purify_to_vertex: point is infeasible");
  RationalVector x = x_in;
  for (;;) {
    auto tight = tight_rows(lp, x);
    RationalMatrix T = lp.A.select_rows(tight);
    auto null = tight.empty() ? std::vector<RationalVector>{} : nullspace_basis(T);
    if (tight.empty()) {
      for (std::size_t j = 0; j < lp.n(); ++j) {
        RationalVector e(lp.n(), Rational(0));
        e[j] = 1;
        null.push_back(std::move(e));
      }
    }
    if (null.empty()) {
      auto pick = independent_rows(T);
      BasicSolution out{x, {}};
      for (auto k : pick) out.basis.push_back(tight[k]);
      return out;
    }
    RationalVector d = null.front();
    if (dot(lp.c0, d) < 0)
      for (auto& v : d) v = -v;
    // Step length along d, flipping once if d is an objective-neutral ray.
    std::optional<Rational> step;
    for (int attempt = 0; attempt < 2 && !step; ++attempt) {
      for (std::size_t i = 0; i < lp.m(); ++i) {
        Rational ad = 0, ax = 0;
        for (std::size_t j = 0; j < lp.n(); ++j) {
          ad += lp.A(i, j) * d[j];
          ax += lp.A(i, j) * x[j];
        }
        if (ad <= 0) continue;
        Rational t = (lp.b[i] - ax) / ad;
        if (!step || t < *step) step = t;
      }
      if (!step) {
        if (dot(lp.c0, d) != 0) throw PreconditionError("purify_to_vertex: objective is unbounded");
        for (auto& v : d) v = -v;
      }
    }
    if (!step) throw PreconditionError("purify_to_vertex: constraint matrix is rank deficient");
    for (std::size_t j = 0; j < lp.n(); ++j) x[j] += *step * d[j];
  }
}

LinearProgram strip_box(const LinearProgram& lp) {
  LinearProgram out;
  out.c0 = lp.c0;
  out.objective_scale = lp.objective_scale;
  out.flags = lp.flags;
  out.flags.bounded = false;
  std::vector<std::size_t> new_index(lp.m(), lp.m());
  for (std::size_t i = 0; i < lp.m(); ++i) {
    if (lp.is_box_row(i)) continue;
    new_index[i] = out.A.rows();
    out.A.append_row(lp.A.row(i));
    out.b.push_back(lp.b[i]);
    out.row_scales.push_back(lp.row_scales[i]);
  }
  for (auto i : lp.synthetic_rows) out.synthetic_rows.push_back(new_index[i]);
  out.validate();
  return out;
}

}  // namespace shadowlp
