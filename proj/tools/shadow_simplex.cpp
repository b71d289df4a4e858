// shadow-simplex: command-line front end for the shadowlp library.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "shadowlp/delta_metrics.hpp"
#include "shadowlp/driver.hpp"
#include "shadowlp/errors.hpp"
#include "shadowlp/harness.hpp"
#include "shadowlp/oracle.hpp"
#include "shadowlp/phase1.hpp"

using namespace shadowlp;

namespace {

LinearProgram load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LpError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_lp(ss.str());
}

std::string join(const RationalVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + to_string(v[i]);
  return s;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto x = item.find('x');
    if (x == std::string::npos) throw LpError("size '" + item + "' is not MxN");
    out.emplace_back(std::stoul(item.substr(0, x)), std::stoul(item.substr(x + 1)));
  }
  return out;
}

void print_phase1(const LinearProgram& lp) {
  Phase1Problem p = build_phase1(lp);
  std::cout << serialize_lp(p.lp);
  std::cout << "# initial point: " << join(p.initial.point) << "\n";
  std::cout << "# initial basis: " << join(p.initial.basis) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized shadow vertex simplex solver"};
  app.require_subcommand(1);

  const std::map<std::string, ScheduleKind> schedules{
      {"n32", ScheduleKind::N32}, {"n52", ScheduleKind::N52}, {"phase1", ScheduleKind::Phase1}};
  const std::map<std::string, DrawMode> modes{{"float", DrawMode::Continuous}, {"dyadic", DrawMode::Dyadic}};

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve an LP file");
  std::string solve_file, trace;
  SolverConfig cfg;
  unsigned bits = 0;
  bool phase1_only = false;
  solve_cmd->add_option("file", solve_file, "LP file")->required();
  solve_cmd->add_option("--seed", cfg.seed, "Random seed");
  solve_cmd->add_option("--mode", cfg.mode, "Draw mode")->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  solve_cmd->add_option("--bits", bits, "Bits per dyadic draw (default: bit budget)");
  solve_cmd->add_option("--schedule,--phi-schedule", cfg.schedule, "Phi schedule")
      ->transform(CLI::CheckedTransformer(schedules, CLI::ignore_case));
  solve_cmd->add_option("--cap-constant", cfg.cap_constant, "Constant K in the pivot cap");
  solve_cmd->add_option("--max-doublings", cfg.max_doublings, "Phi doubling guard");
  solve_cmd->add_option("--trace", trace, "Write per-walk path CSVs to <trace>.<k>.csv");
  solve_cmd->add_flag("--phase1-only", phase1_only, "Emit LP' and its initial BFS instead of solving");

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force optimum of an LP file");
  std::string oracle_file;
  oracle_cmd->add_option("file", oracle_file, "LP file")->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "delta / Delta report as one CSV row");
  std::string analyze_file;
  analyze_cmd->add_option("file", analyze_file, "LP file")->required();

  auto* phase1_cmd = app.add_subcommand("phase1", "Emit LP' and its initial BFS");
  std::string phase1_file;
  phase1_cmd->add_option("file", phase1_file, "LP file")->required();

  auto* bench_cmd = app.add_subcommand("bench", "Seeded experiments, summary CSV");
  ExperimentConfig ec;
  std::string sizes_text, out_path;
  const std::map<std::string, GeneratorKind> generators{{"tu-incidence", GeneratorKind::TuIncidence},
                                                        {"tu-interval", GeneratorKind::TuInterval},
                                                        {"tu-network", GeneratorKind::TuNetwork},
                                                        {"interval-matrix", GeneratorKind::TuInterval},
                                                        {"random-integer", GeneratorKind::RandomInteger},
                                                        {"file", GeneratorKind::File}};
  bool no_verify = false;
  unsigned bench_bits = 0;
  bench_cmd->add_option("--generator", ec.generator, "Instance generator")
      ->transform(CLI::CheckedTransformer(generators, CLI::ignore_case));
  bench_cmd->add_option("--sizes", sizes_text, "Comma-separated MxN list, e.g. 6x3,8x4");
  bench_cmd->add_option("--trials", ec.trials, "Trials per size");
  bench_cmd->add_option("--seed", ec.seed, "Base seed");
  bench_cmd->add_option("--schedule,--phi-schedule", ec.schedule, "Phi schedule")
      ->transform(CLI::CheckedTransformer(schedules, CLI::ignore_case));
  bench_cmd->add_option("--mode", ec.mode, "Draw mode")->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  bench_cmd->add_option("--bits", bench_bits, "Bits per dyadic draw");
  bench_cmd->add_option("--cap-constant", ec.cap_constant, "Constant K in the pivot cap");
  bench_cmd->add_option("--threads", ec.threads, "Worker threads (0: all cores)");
  bench_cmd->add_option("--file", ec.file, "LP file for --generator file");
  bench_cmd->add_option("--out", out_path, "Summary CSV path (default: stdout)");
  bench_cmd->add_flag("--no-verify", no_verify, "Skip oracle verification");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      LinearProgram lp = load(solve_file);
      if (phase1_only) {
        print_phase1(lp);
        return 0;
      }
      if (bits) cfg.bits = bits;
      cfg.record_paths = !trace.empty();
      SolveOutcome out = solve(lp, cfg);
      if (auto* opt = std::get_if<Optimal>(&out.result)) {
        std::cout << "status: optimal\nvalue: " << to_string(opt->value) << "\npoint: " << join(opt->vertex.point)
                  << "\nbasis: " << join(opt->vertex.basis) << "\n";
      } else if (auto* unb = std::get_if<Unbounded>(&out.result)) {
        std::cout << "status: unbounded\nray: " << join(unb->ray) << "\n";
      } else {
        std::cout << "status: infeasible\nphase1_value: " << to_string(std::get<Infeasible>(out.result).phase1_value)
                  << "\n";
      }
      std::cout << "pivots: " << out.stats.pivots << "\nphase1_pivots: " << out.stats.phase1_pivots
                << "\ndoublings: " << out.stats.doublings << "\naccepted_phi: " << out.stats.accepted_phi
                << "\nbits: " << out.stats.bits << "\n";
      for (std::size_t k = 0; k < out.stats.paths.size(); ++k) {
        std::ofstream f(trace + "." + std::to_string(k) + ".csv", std::ios::binary);
        f << path_csv(out.stats.paths[k]);
      }
      return 0;
    }
    if (*oracle_cmd) {
      LinearProgram lp = load(oracle_file);
      auto res = oracle::brute_force_optimum(lp);
      if (auto* opt = std::get_if<oracle::Optimum>(&res)) {
        std::cout << "status: optimal\nvalue: " << to_string(opt->value) << "\npoint: " << join(opt->point) << "\n";
      } else if (auto* unb = std::get_if<oracle::UnboundedSuspicion>(&res)) {
        std::cout << "status: unbounded\nray: " << join(unb->ray) << "\n";
      } else {
        std::cout << "status: infeasible\n";
      }
      return 0;
    }
    if (*analyze_cmd) {
      LinearProgram lp = load(analyze_file);
      DeltaReport rep = delta_matrix(lp.A);
      std::cout << "m,n,delta,inv_delta_sq,witness_rows,Delta,bound_nDeltaSq_ok,bound_nD1Dnm1_ok\r\n";
      std::cout << lp.m() << ',' << lp.n() << ',' << rep.delta << ',' << to_string(rep.inv_delta_sq) << ','
                << join(rep.witness_rows) << ',' << (lp.is_integral() ? to_string(rep.Delta) : "") << ','
                << (lp.is_integral() ? (rep.bound_nDeltaSq_ok ? "true" : "false") : "") << ','
                << (lp.is_integral() ? (rep.bound_nD1Dnm1_ok ? "true" : "false") : "") << "\r\n";
      return 0;
    }
    if (*phase1_cmd) {
      print_phase1(load(phase1_file));
      return 0;
    }
    if (*bench_cmd) {
      if (!sizes_text.empty()) ec.sizes = parse_sizes(sizes_text);
      if (bench_bits) ec.bits = bench_bits;
      ec.verify = !no_verify;
      ExperimentResult res = run_experiments(ec);
      if (out_path.empty()) {
        std::cout << res.summary_csv;
      } else {
        std::ofstream f(out_path, std::ios::binary);
        f << res.summary_csv;
      }
      for (const auto& r : res.records) {
        if (r.oracle_agrees && !*r.oracle_agrees) {
          std::cerr << "trial " << r.instance_id << " disagrees with the oracle"
                    << (r.error.empty() ? "" : ": " + r.error) << "\n";
          return 2;
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
