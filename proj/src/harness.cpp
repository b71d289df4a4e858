#include "shadowlp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "shadowlp/delta_metrics.hpp"
#include "shadowlp/errors.hpp"
#include "shadowlp/oracle.hpp"

namespace shadowlp {

namespace {

using Rng = std::mt19937_64;

long uniform_int(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

RationalVector random_objective(Rng& rng, std::size_t n) {
  RationalVector c(n);
  for (;;) {
    for (auto& v : c) v = Rational(uniform_int(rng, -5, 5), uniform_int(rng, 1, 4));
    if (std::any_of(c.begin(), c.end(), [](const Rational& v) { return v != 0; })) return c;
  }
}

struct RowBuilder {
  std::size_t n;
  RationalMatrix A;
  std::vector<long> coeffs;  // flattened, kept for computing b
  explicit RowBuilder(std::size_t n_) : n(n_), A(0, n_) {}
  void add(const std::vector<long>& row) {
    RationalVector r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = row[j];
    A.append_row(std::span<const Rational>(r));
  }
};

// b = A xhat + slack with slack in {0, 1, 2}, so xhat is feasible.
LinearProgram finish(RowBuilder& rb, Rng& rng, const std::vector<long>& xhat) {
  RationalVector b(rb.A.rows());
  for (std::size_t i = 0; i < rb.A.rows(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < rb.n; ++j) s += rb.A(i, j) * xhat[j];
    b[i] = s + uniform_int(rng, 0, 2);
  }
  return make_lp(std::move(rb.A), std::move(b), random_objective(rng, rb.n));
}

std::vector<long> unit(std::size_t n, std::size_t j, long s) {
  std::vector<long> r(n, 0);
  r[j] = s;
  return r;
}

LinearProgram incidence(std::size_t m, std::size_t n, Rng& rng) {
  if (m < 2 * n) throw PreconditionError("tu-incidence needs m >= 2n");
  RowBuilder rb(n);
  std::vector<long> xhat(n);
  for (auto& v : xhat) v = uniform_int(rng, 0, 4);
  for (std::size_t j = 0; j < n; ++j) rb.add(unit(n, j, 1));
  const std::size_t root = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(n) - 1));
  rb.add(unit(n, root, -1));
  // Random spanning tree; row x_parent - x_child <= w bounds x_child from below.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::iter_swap(order.begin(), std::find(order.begin(), order.end(), root));
  for (std::size_t k = 1; k < n; ++k) {
    std::size_t parent = order[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(k) - 1))];
    std::vector<long> r(n, 0);
    r[parent] = 1;
    r[order[k]] = -1;
    rb.add(r);
  }
  while (rb.A.rows() < m) {
    std::size_t u = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(n) - 1));
    std::size_t v = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(n) - 1));
    if (u == v) {
      rb.add(unit(n, u, uniform_int(rng, 0, 1) ? 1 : -1));
      continue;
    }
    std::vector<long> r(n, 0);
    r[u] = 1;
    r[v] = -1;
    rb.add(r);
  }
  return finish(rb, rng, xhat);
}

LinearProgram interval(std::size_t m, std::size_t n, Rng& rng) {
  if (m < n + 1) throw PreconditionError("tu-interval needs m >= n + 1");
  RowBuilder rb(n);
  std::vector<long> xhat(n);
  for (auto& v : xhat) v = uniform_int(rng, 0, 4);
  for (std::size_t j = 0; j < n; ++j) rb.add(unit(n, j, -1));
  rb.add(std::vector<long>(n, 1));
  while (rb.A.rows() < m) {
    std::size_t lo = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(n) - 1));
    std::size_t hi = static_cast<std::size_t>(uniform_int(rng, static_cast<long>(lo), static_cast<long>(n) - 1));
    long s = uniform_int(rng, 0, 1) ? 1 : -1;
    std::vector<long> r(n, 0);
    for (std::size_t j = lo; j <= hi; ++j) r[j] = s;
    rb.add(r);
  }
  return finish(rb, rng, xhat);
}

LinearProgram network(std::size_t m, std::size_t n, Rng& rng) {
  if (m < 2 * n) throw PreconditionError("tu-network needs m >= 2n");
  // Directed tree on nodes 0..n; arc j joins node j+1 to parent[j+1] (column j).
  std::vector<std::size_t> parent(n + 1, 0);
  std::vector<long> dir(n + 1, 1);
  for (std::size_t v = 1; v <= n; ++v) {
    parent[v] = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(v) - 1));
    dir[v] = uniform_int(rng, 0, 1) ? 1 : -1;
  }
  auto depth = [&](std::size_t v) {
    std::size_t d = 0;
    while (v != 0) {
      v = parent[v];
      ++d;
    }
    return d;
  };
  // Path u -> v in the tree: arcs on u's side are walked upward (+dir),
  // arcs on v's side downward (-dir).
  auto path_row = [&](std::size_t u, std::size_t v) {
    std::vector<long> r(n, 0);
    std::size_t du = depth(u), dv = depth(v);
    while (du > dv) {
      r[u - 1] += dir[u];
      u = parent[u];
      --du;
    }
    while (dv > du) {
      r[v - 1] -= dir[v];
      v = parent[v];
      --dv;
    }
    while (u != v) {
      r[u - 1] += dir[u];
      r[v - 1] -= dir[v];
      u = parent[u];
      v = parent[v];
    }
    return r;
  };
  RowBuilder rb(n);
  std::vector<long> xhat(n);
  for (auto& v : xhat) v = uniform_int(rng, -3, 3);
  for (std::size_t j = 0; j < n; ++j) {
    rb.add(unit(n, j, 1));
    rb.add(unit(n, j, -1));
  }
  while (rb.A.rows() < m) {
    std::size_t u = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(n)));
    std::size_t v = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(n)));
    if (u == v) continue;
    rb.add(path_row(u, v));
  }
  return finish(rb, rng, xhat);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

LinearProgram read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LpError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_lp(ss.str());
}

}  // namespace

LinearProgram generate_tu_instance(TuKind kind, std::size_t m, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("generator needs n >= 1");
  Rng rng(seed);
  switch (kind) {
    case TuKind::Incidence: return incidence(m, n, rng);
    case TuKind::Interval: return interval(m, n, rng);
    case TuKind::Network: return network(m, n, rng);
  }
  throw PreconditionError("unknown TU kind");
}

LinearProgram generate_random_integer(std::size_t m, std::size_t n, std::uint64_t seed, int lo, int hi) {
  if (m == 0 || n == 0) throw PreconditionError("generator needs m, n >= 1");
  Rng rng(seed);
  RationalMatrix A(m, n);
  RationalVector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    bool zero = true;
    while (zero) {
      for (std::size_t j = 0; j < n; ++j) {
        A(i, j) = uniform_int(rng, lo, hi);
        zero = zero && A(i, j) == 0;
      }
    }
    b[i] = uniform_int(rng, lo, hi);
  }
  RationalVector c(n);
  for (;;) {
    for (auto& v : c) v = uniform_int(rng, lo, hi);
    if (std::any_of(c.begin(), c.end(), [](const Rational& v) { return v != 0; })) break;
  }
  return make_lp(std::move(A), std::move(b), std::move(c));
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial_index) { return base ^ trial_index; }

bool agrees_with_oracle(const LinearProgram& lp, const SolveOutcome& outcome) {
  auto truth = oracle::brute_force_optimum(lp);
  if (auto* opt = std::get_if<oracle::Optimum>(&truth)) {
    auto* got = std::get_if<Optimal>(&outcome.result);
    return got && got->value == opt->value && is_feasible(lp, got->vertex.point) &&
           dot(lp.c0, got->vertex.point) == opt->value;
  }
  if (std::holds_alternative<oracle::Infeasible>(truth)) return std::holds_alternative<Infeasible>(outcome.result);
  return std::holds_alternative<Unbounded>(outcome.result);
}

namespace {

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t m, std::size_t n, std::uint64_t index) {
  TrialRecord rec;
  rec.m = m;
  rec.n = n;
  const std::uint64_t seed = trial_seed(cfg.seed, index);
  rec.instance_id = std::to_string(m) + "x" + std::to_string(n) + "-" + std::to_string(index);
  auto t0 = std::chrono::steady_clock::now();
  try {
    LinearProgram lp;
    switch (cfg.generator) {
      case GeneratorKind::TuIncidence: lp = generate_tu_instance(TuKind::Incidence, m, n, seed); break;
      case GeneratorKind::TuInterval: lp = generate_tu_instance(TuKind::Interval, m, n, seed); break;
      case GeneratorKind::TuNetwork: lp = generate_tu_instance(TuKind::Network, m, n, seed); break;
      case GeneratorKind::RandomInteger: lp = generate_random_integer(m, n, seed); break;
      case GeneratorKind::File: lp = read_file(cfg.file); break;
    }
    rec.m = lp.m();
    rec.n = lp.n();
    SolverConfig sc;
    sc.seed = seed;
    sc.mode = cfg.mode;
    sc.bits = cfg.bits;
    sc.schedule = cfg.schedule;
    sc.cap_constant = cfg.cap_constant;
    if (cfg.verify && rank(lp.A) == lp.n() && binomial(lp.m(), lp.n()) <= kEnumerationGuard) {
      DeltaReport rep = delta_matrix(lp.A);
      rec.delta = rep.delta;
      rec.Delta = rep.Delta;
      sc.known_delta = rep.delta;
    }
    SolveOutcome out = solve(lp, sc);
    rec.pivots = out.stats.pivots + out.stats.phase1_pivots;
    rec.pivots_per_round = out.stats.pivots_per_round;
    rec.bits = out.stats.bits;
    rec.accepted_phi = out.stats.accepted_phi;
    if (std::holds_alternative<Optimal>(out.result)) rec.outcome = TrialOutcome::Optimal;
    else if (std::holds_alternative<Unbounded>(out.result)) rec.outcome = TrialOutcome::Unbounded;
    else rec.outcome = TrialOutcome::Infeasible;
    if (cfg.verify) rec.oracle_agrees = agrees_with_oracle(lp, out);
  } catch (const std::exception& e) {
    rec.outcome = TrialOutcome::Error;
    rec.error = e.what();
    if (cfg.verify) rec.oracle_agrees = false;
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

ExperimentResult run_experiments(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw PreconditionError("trials must be >= 1");
  if (cfg.sizes.empty() && cfg.generator != GeneratorKind::File) throw PreconditionError("no sizes given");
  auto sizes = cfg.sizes;
  if (cfg.generator == GeneratorKind::File) sizes = {{0, 0}};
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (const auto& s : sizes)
    for (std::size_t t = 0; t < cfg.trials; ++t) jobs.push_back(s);

  ExperimentResult res;
  res.records.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      res.records[i] = run_trial(cfg, jobs[i].first, jobs[i].second, i);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  res.summary_csv = summary_csv(cfg, res.records);
  return res;
}

std::string summary_csv(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "m,n,delta,Delta,mean_pivots,median_pivots,max_pivots,oracle_agree_rate,mean_bits,pivot_ratio\r\n";
  for (std::size_t start = 0; start < records.size(); start += cfg.trials) {
    std::size_t end = std::min(records.size(), start + cfg.trials);
    std::vector<std::size_t> piv;
    std::optional<double> delta;
    std::optional<Rational> Delta;
    double bits = 0.0, ratio = 0.0;
    std::size_t agree = 0, verified = 0, with_delta = 0;
    for (std::size_t i = start; i < end; ++i) {
      const auto& r = records[i];
      piv.push_back(r.pivots);
      bits += static_cast<double>(r.bits);
      if (r.delta) {
        delta = delta ? std::min(*delta, *r.delta) : *r.delta;
        // pivots / (m n^3 / delta^2)
        const double mn3 = static_cast<double>(r.m) * std::pow(static_cast<double>(r.n), 3);
        ratio += static_cast<double>(r.pivots) * *r.delta * *r.delta / mn3;
        ++with_delta;
      }
      if (r.Delta) Delta = Delta ? std::max(*Delta, *r.Delta) : *r.Delta;
      if (r.oracle_agrees) {
        ++verified;
        agree += *r.oracle_agrees ? 1 : 0;
      }
    }
    std::sort(piv.begin(), piv.end());
    const std::size_t k = piv.size();
    double mean = std::accumulate(piv.begin(), piv.end(), 0.0) / static_cast<double>(k);
    double median = k % 2 ? static_cast<double>(piv[k / 2])
                          : 0.5 * static_cast<double>(piv[k / 2 - 1] + piv[k / 2]);
    out << records[start].m << ',' << records[start].n << ',' << (delta ? format_double(*delta) : "") << ','
        << (Delta ? to_string(*Delta) : "") << ',' << format_double(mean) << ',' << format_double(median) << ','
        << piv.back() << ','
        << (verified ? format_double(static_cast<double>(agree) / static_cast<double>(verified)) : "") << ','
        << format_double(bits / static_cast<double>(k)) << ','
        << (with_delta ? format_double(ratio / static_cast<double>(with_delta)) : "") << "\r\n";
  }
  return out.str();
}

}  // namespace shadowlp
