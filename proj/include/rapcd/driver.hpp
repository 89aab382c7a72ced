#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rapcd/problem.hpp"
#include "rapcd/restart.hpp"

namespace rapcd {

// Configuration shared by the CLI subcommands.  A JSON config file mirroring
// these fields can pre-fill everything; explicit CLI flags win on conflict.
struct RunConfig {
  // problem source (exactly one of data_path / synth / quad)
  std::string data_path;
  std::string model = "lasso";  // lasso | logreg | quadratic
  bool normalize = false;
  bool center = false;

  bool use_synth = false;
  int synth_n = 100;
  int synth_m = 200;
  double synth_density = 0.2;
  double synth_noise = 0.01;
  std::uint64_t synth_seed = 1;

  bool use_quad = false;
  int quad_n = 10;
  double quad_mu = 1e-2;
  std::uint64_t quad_seed = 1;

  double lambda = 1.0;      // lasso lambda, or lambda_1 for logreg
  double lambda_rel = 0.0;  // if > 0: lambda = lambda_rel * ||A^T b||_inf (lasso)

  // solver
  std::string algorithm = "approx-restart";  // cd | approx | approx-restart
  int tau = 1;
  std::uint64_t seed = 1;
  std::string schedule;  // "fixed:K" | "variable:K0" | "loggrid:N"; empty =
                         // variable with K0 = ceil(20 e / theta0)
  std::string policy = "decrease";  // plain | decrease

  // stopping
  double eps = 1e-6;
  long long budget = 0;  // coordinate updates; 0 = unlimited

  // output
  std::string out = "run";
  std::string run_id;  // derived from the config when empty
  long long trace_stride = 0;  // coordinate updates between trace rows; 0 = dim
  bool trace_gap = true;
  std::optional<double> fref;

  // pathwise optimization
  int path_points = 10;          // T
  double path_alpha = 0.0;       // 0 = solve alpha^T = 1e-3
  long long path_budget = 0;     // per-lambda coordinate updates; 0 = 40000 n

  int jobs = 1;
  std::vector<std::uint64_t> seeds;  // multi-seed solve (empty = just `seed`)
};

// Overlays values from a JSON file onto cfg (only keys present in the file).
void apply_config_file(RunConfig& cfg, const std::string& path);

struct BuiltProblem {
  std::unique_ptr<Problem> problem;
  std::vector<double> x_star;  // planted generator solution, when synthetic
  bool has_x_star = false;
};

BuiltProblem build_problem(const RunConfig& cfg);

// Parses "fixed:K" / "variable:K0" / "loggrid:N"; empty uses the default
// variable schedule with K0 = ceil(20 e / theta0).
RestartSchedule make_schedule(const std::string& spec, double theta0);

struct SolveSummary {
  std::string run_id;
  std::string status;
  double final_F = 0.0;
  double final_gap = 0.0;
  bool gap_valid = false;
  long long iterations = 0;
  long long coord_updates = 0;
  long long restarts = 0;
  double elapsed_seconds = 0.0;
};

// Runs one solve per cfg (cd / approx / approx-restart), writing
// <out>.trace.csv, <out>.restarts.csv and <out>.summary.json.
SolveSummary solve_run(const RunConfig& cfg);

// Multi-seed front end: runs solve_run for each seed in cfg.seeds (cfg.seed
// if empty), with per-seed output prefixes, using up to cfg.jobs threads.
std::vector<SolveSummary> solve_many(const RunConfig& cfg);

struct PathPoint {
  int index = 0;
  double lambda = 0.0;
  long long coord_updates = 0;
  long long restarts = 0;
  double F = 0.0;
  double gap = 0.0;
  long long K0_end = 0;
  std::string status;
};

struct PathSummary {
  std::vector<PathPoint> points;
  long long total_coord_updates = 0;
  bool completed = true;  // every grid point reached eps
};

// Pathwise Lasso optimization over lambda_t = lambda_max * alpha^t,
// t = 0..T: warm start in x; for the restarted algorithm, a one-time 10 n
// iteration plain-CD warmup, then variable-restart rounds with K0 starting at
// 10 n and doubling after each ceil(log2(1/eps)) restarts; K0 carries over to
// the next lambda.  Writes <out>.path.csv and <out>.summary.json.
PathSummary path_run(const RunConfig& cfg);

// Expands "kind:param" into the first `count` periods.
std::vector<long long> schedule_preview(const std::string& spec, double theta0,
                                        int count);

struct GenSummary {
  std::string path;
  int n = 0, m = 0;
  long long nnz = 0;
  int x_star_nnz = 0;
};

// Writes a synthetic Lasso dataset in LibSVM format to cfg.out (and the
// planted coefficients to <out>.xstar.json).
GenSummary gen_run(const RunConfig& cfg);

}  // namespace rapcd
