#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rapcd/driver.hpp"
#include "rapcd/rates.hpp"

namespace {

// Flags override config-file values, so the file is applied before parsing.
void preload_config(int argc, char** argv, rapcd::RunConfig& cfg) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") rapcd::apply_config_file(cfg, argv[i + 1]);
  }
}

void add_problem_flags(CLI::App* cmd, rapcd::RunConfig& cfg) {
  cmd->add_option("--data", cfg.data_path, "dataset in LibSVM format");
  cmd->add_option("--model", cfg.model, "lasso | logreg");
  cmd->add_flag("--normalize", cfg.normalize, "scale columns to unit norm");
  cmd->add_flag("--center", cfg.center, "center columns (implicit rank-one correction)");
  cmd->add_flag("--synth", cfg.use_synth, "use a synthetic lasso instance");
  cmd->add_option("--synth-n", cfg.synth_n, "synthetic columns");
  cmd->add_option("--synth-m", cfg.synth_m, "synthetic rows");
  cmd->add_option("--synth-density", cfg.synth_density, "synthetic density in (0,1]");
  cmd->add_option("--synth-noise", cfg.synth_noise, "synthetic noise level");
  cmd->add_option("--synth-seed", cfg.synth_seed, "synthetic generator seed");
  cmd->add_option("--lambda", cfg.lambda, "lasso lambda / logreg lambda_1");
  cmd->add_option("--lambda-rel", cfg.lambda_rel,
                  "lasso lambda as a fraction of ||A^T b||_inf");
  cmd->add_option("--config", "JSON config file mirroring these flags")
      ->check(CLI::ExistingFile);
}

void add_solver_flags(CLI::App* cmd, rapcd::RunConfig& cfg) {
  cmd->add_option("--tau", cfg.tau, "coordinates updated per iteration");
  cmd->add_option("--seed", cfg.seed, "sampling seed");
  cmd->add_option("--eps", cfg.eps, "duality-gap stopping tolerance");
  cmd->add_option("--budget", cfg.budget, "max coordinate updates (0 = unlimited)");
  cmd->add_option("--out", cfg.out, "output file prefix");
  cmd->add_option("--run-id", cfg.run_id, "trace row identifier");
  cmd->add_option("--trace-stride", cfg.trace_stride,
                  "coordinate updates between trace rows (0 = n)");
}

int run(int argc, char** argv) {
  CLI::App app{"accelerated proximal coordinate descent with restarts"};
  app.require_subcommand(1);
  rapcd::RunConfig cfg;
  preload_config(argc, argv, cfg);

  auto* solve = app.add_subcommand("solve", "run one solver configuration");
  add_problem_flags(solve, cfg);
  add_solver_flags(solve, cfg);
  solve->add_flag("--quad", cfg.use_quad, "use a synthetic quadratic instance");
  solve->add_option("--quad-n", cfg.quad_n, "quadratic dimension");
  solve->add_option("--quad-mu", cfg.quad_mu, "quadratic error-bound constant");
  solve->add_option("--quad-seed", cfg.quad_seed, "quadratic generator seed");
  solve->add_option("--alg", cfg.algorithm, "cd | approx | approx-restart");
  solve->add_option("--schedule", cfg.schedule,
                    "fixed:K | variable:K0 | loggrid:N (default variable, "
                    "K0 = ceil(20e/theta0))");
  solve->add_option("--policy", cfg.policy, "plain | decrease");
  double fref = std::nan("");
  solve->add_option("--fref", fref, "reference objective for the trace column");
  solve->add_option("--jobs", cfg.jobs, "threads for multi-seed runs");
  std::vector<std::uint64_t> seeds;
  solve->add_option("--seeds", seeds, "run one solve per seed");

  auto* path = app.add_subcommand("path", "lasso regularization path");
  add_problem_flags(path, cfg);
  add_solver_flags(path, cfg);
  path->add_option("--alg", cfg.algorithm, "cd | approx | approx-restart");
  path->add_option("--policy", cfg.policy, "plain | decrease");
  path->add_option("--path-points", cfg.path_points, "number of lambdas past lambda0");
  path->add_option("--path-alpha", cfg.path_alpha,
                   "geometric grid ratio (0 = solve alpha^T = 1e-3)");
  path->add_option("--path-budget", cfg.path_budget,
                   "per-lambda coordinate-update budget (0 = 40000 n)");

  auto* rates = app.add_subcommand("rates", "restart/CD rate comparison table");
  double mu = 1e-3;
  int rn = 10, rtau = 1, kpoints = 200;
  long long kmin = 1, kmax = 200000;
  std::string rates_out = "rates.csv";
  rates->add_option("--mu", mu, "error-bound constant")->required();
  rates->add_option("--n", rn, "problem dimension");
  rates->add_option("--tau", rtau, "coordinates per iteration");
  rates->add_option("--kmin", kmin, "smallest restart period");
  rates->add_option("--kmax", kmax, "largest restart period");
  rates->add_option("--kpoints", kpoints, "grid size (log-spaced)");
  rates->add_option("--out", rates_out, "output CSV");

  auto* sched = app.add_subcommand("schedule", "print restart periods");
  std::string kind = "variable:1";
  int count = 16;
  double theta0 = 0.1;
  sched->add_option("--kind", kind, "fixed:K | variable:K0 | loggrid:N");
  sched->add_option("--count", count, "periods to print");
  sched->add_option("--theta0", theta0, "theta0 for the default schedule");

  auto* gen = app.add_subcommand("gen", "write a synthetic lasso dataset");
  gen->add_option("--n", cfg.synth_n, "columns");
  gen->add_option("--m", cfg.synth_m, "rows");
  gen->add_option("--density", cfg.synth_density, "density in (0,1]");
  gen->add_option("--noise", cfg.synth_noise, "noise level");
  gen->add_option("--seed", cfg.synth_seed, "generator seed");
  gen->add_option("--out", cfg.out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (solve->parsed()) {
    if (std::isfinite(fref)) cfg.fref = fref;
    if (!seeds.empty()) cfg.seeds = seeds;
    const auto summaries = rapcd::solve_many(cfg);
    for (const auto& s : summaries)
      std::printf("%s: %s F=%.12g gap=%s updates=%lld restarts=%lld (%.3fs)\n",
                  s.run_id.c_str(), s.status.c_str(), s.final_F,
                  s.gap_valid ? std::to_string(s.final_gap).c_str() : "n/a",
                  s.coord_updates, s.restarts, s.elapsed_seconds);
    return 0;
  }
  if (path->parsed()) {
    const auto summary = rapcd::path_run(cfg);
    for (const auto& pt : summary.points)
      std::printf("t=%d lambda=%.6g updates=%lld restarts=%lld gap=%.3g %s\n",
                  pt.index, pt.lambda, pt.coord_updates, pt.restarts, pt.gap,
                  pt.status.c_str());
    std::printf("total coordinate updates: %lld (%s)\n", summary.total_coord_updates,
                summary.completed ? "completed" : "budget hit");
    return summary.completed ? 0 : 1;
  }
  if (rates->parsed()) {
    if (kmin < 1 || kmax < kmin || kpoints < 1)
      throw std::invalid_argument("rates: need 1 <= kmin <= kmax, kpoints >= 1");
    std::vector<long long> grid;
    for (int i = 0; i < kpoints; ++i) {
      const double f = kpoints == 1 ? 0.0 : static_cast<double>(i) / (kpoints - 1);
      const auto k = static_cast<long long>(
          std::llround(std::exp(std::log(static_cast<double>(kmin)) +
                                f * (std::log(static_cast<double>(kmax)) -
                                     std::log(static_cast<double>(kmin))))));
      if (grid.empty() || grid.back() != k) grid.push_back(k);
    }
    const auto rows = rapcd::figure1_table(mu, rn, rtau, grid);
    rapcd::write_figure1_csv(rows, rates_out);
    std::printf("wrote %zu rows to %s\n", rows.size(), rates_out.c_str());
    return 0;
  }
  if (sched->parsed()) {
    const auto periods = rapcd::schedule_preview(kind, theta0, count);
    for (std::size_t i = 0; i < periods.size(); ++i)
      std::printf("%s%lld", i ? " " : "", periods[i]);
    std::printf("\n");
    return 0;
  }
  if (gen->parsed()) {
    const auto g = rapcd::gen_run(cfg);
    std::printf("{\"path\":\"%s\",\"n\":%d,\"m\":%d,\"nnz\":%lld,\"x_star_nnz\":%d}\n",
                g.path.c_str(), g.n, g.m, g.nnz, g.x_star_nnz);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
