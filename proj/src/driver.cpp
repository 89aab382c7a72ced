#include "rapcd/driver.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rapcd/dataset.hpp"
#include "rapcd/engine.hpp"
#include "rapcd/rng.hpp"
#include "rapcd/trace.hpp"

namespace rapcd {

using nlohmann::json;

namespace {

const char* status_name(StopStatus s) {
  switch (s) {
    case StopStatus::IterationsDone: return "iterations_done";
    case StopStatus::GapReached: return "gap_reached";
    case StopStatus::BudgetExhausted: return "budget_exhausted";
    case StopStatus::ScheduleExhausted: return "schedule_exhausted";
  }
  return "unknown";
}

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

template <typename T>
void pick(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config file " + path + ": " + e.what());
  }
  pick(j, "data", cfg.data_path);
  pick(j, "model", cfg.model);
  pick(j, "normalize", cfg.normalize);
  pick(j, "center", cfg.center);
  pick(j, "synth", cfg.use_synth);
  pick(j, "synth_n", cfg.synth_n);
  pick(j, "synth_m", cfg.synth_m);
  pick(j, "synth_density", cfg.synth_density);
  pick(j, "synth_noise", cfg.synth_noise);
  pick(j, "synth_seed", cfg.synth_seed);
  pick(j, "quad", cfg.use_quad);
  pick(j, "quad_n", cfg.quad_n);
  pick(j, "quad_mu", cfg.quad_mu);
  pick(j, "quad_seed", cfg.quad_seed);
  pick(j, "lambda", cfg.lambda);
  pick(j, "lambda_rel", cfg.lambda_rel);
  pick(j, "algorithm", cfg.algorithm);
  pick(j, "tau", cfg.tau);
  pick(j, "seed", cfg.seed);
  pick(j, "schedule", cfg.schedule);
  pick(j, "policy", cfg.policy);
  pick(j, "eps", cfg.eps);
  pick(j, "budget", cfg.budget);
  pick(j, "out", cfg.out);
  pick(j, "run_id", cfg.run_id);
  pick(j, "trace_stride", cfg.trace_stride);
  pick(j, "trace_gap", cfg.trace_gap);
  if (j.contains("fref")) cfg.fref = j.at("fref").get<double>();
  pick(j, "path_points", cfg.path_points);
  pick(j, "path_alpha", cfg.path_alpha);
  pick(j, "path_budget", cfg.path_budget);
  pick(j, "jobs", cfg.jobs);
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
}

namespace {

Dataset load_or_make_dataset(const RunConfig& cfg, std::vector<double>* x_star,
                             bool* has_x_star) {
  int sources = 0;
  if (!cfg.data_path.empty()) ++sources;
  if (cfg.use_synth) ++sources;
  if (cfg.use_quad) ++sources;
  if (sources != 1)
    throw std::invalid_argument(
        "exactly one problem source required (--data, --synth or --quad)");

  Dataset d;
  if (cfg.use_synth) {
    SynthLassoResult r = synth_lasso(cfg.synth_n, cfg.synth_m, cfg.synth_density,
                                     cfg.synth_noise, cfg.synth_seed);
    d = std::move(r.dataset);
    if (x_star) {
      *x_star = std::move(r.x_star);
      *has_x_star = true;
    }
  } else {
    d = parse_libsvm(cfg.data_path);
  }
  if (cfg.normalize || cfg.center) d = normalize_columns(d, cfg.center);
  return d;
}

}  // namespace

BuiltProblem build_problem(const RunConfig& cfg) {
  BuiltProblem out;
  if (cfg.use_quad) {
    if (!cfg.data_path.empty() || cfg.use_synth)
      throw std::invalid_argument("exactly one problem source required");
    SplitMix64 rng(derive_seed(cfg.quad_seed, 17));
    std::vector<double> xs(cfg.quad_n);
    for (int i = 0; i < cfg.quad_n; i += 2) {
      double g0, g1;
      gaussian_pair(rng, g0, g1);
      xs[i] = g0;
      if (i + 1 < cfg.quad_n) xs[i + 1] = g1;
    }
    out.x_star = xs;
    out.has_x_star = true;
    out.problem = std::make_unique<QuadraticProblem>(
        QuadraticProblem::equicorrelation(cfg.quad_n, cfg.quad_mu, std::move(xs)));
    return out;
  }

  Dataset d = load_or_make_dataset(cfg, &out.x_star, &out.has_x_star);
  if (cfg.model == "lasso") {
    double lambda = cfg.lambda;
    if (cfg.lambda_rel > 0.0) {
      LassoProblem probe(d, 1.0);
      lambda = cfg.lambda_rel * probe.lambda_max();
    }
    out.problem = std::make_unique<LassoProblem>(std::move(d), lambda);
  } else if (cfg.model == "logreg") {
    out.problem = std::make_unique<LogRegProblem>(std::move(d), cfg.lambda);
  } else if (cfg.model == "quadratic") {
    throw std::invalid_argument("model quadratic requires --quad");
  } else {
    throw std::invalid_argument("unknown model: " + cfg.model);
  }
  return out;
}

RestartSchedule make_schedule(const std::string& spec, double theta0) {
  if (spec.empty()) {
    const double e = 2.718281828459045235360287471353;
    const auto K0 = static_cast<long long>(std::ceil(20.0 * e / theta0));
    return RestartSchedule::variable(K0);
  }
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("schedule must look like kind:param, got " + spec);
  const std::string kind = spec.substr(0, colon);
  long long param = 0;
  try {
    param = std::stoll(spec.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad schedule parameter in " + spec);
  }
  if (kind == "fixed") return RestartSchedule::fixed(param);
  if (kind == "variable") return RestartSchedule::variable(param);
  if (kind == "loggrid") return RestartSchedule::log_grid(param);
  throw std::invalid_argument("unknown schedule kind: " + kind);
}

namespace {

std::string default_run_id(const RunConfig& cfg) {
  if (!cfg.run_id.empty()) return cfg.run_id;
  std::string model = cfg.use_quad ? "quadratic" : cfg.model;
  return cfg.algorithm + "-" + model + "-s" + std::to_string(cfg.seed);
}

void write_summary_json(const RunConfig& cfg, const Problem& p,
                        const SolveSummary& s, const std::string& schedule_desc) {
  json j;
  j["run_id"] = s.run_id;
  j["command"] = "solve";
  j["model"] = p.name();
  j["n"] = p.dim();
  j["m"] = p.samples();
  j["algorithm"] = cfg.algorithm;
  j["tau"] = cfg.tau;
  j["seed"] = cfg.seed;
  j["schedule"] = schedule_desc;
  j["policy"] = cfg.policy;
  j["eps"] = cfg.eps;
  j["budget"] = cfg.budget;
  j["status"] = s.status;
  j["final_F"] = s.final_F;
  if (s.gap_valid) j["final_gap"] = s.final_gap;
  j["iterations"] = s.iterations;
  j["coord_updates"] = s.coord_updates;
  j["epochs"] = static_cast<double>(s.coord_updates) / p.dim();
  j["restarts"] = s.restarts;
  j["elapsed_seconds"] = s.elapsed_seconds;
  j["trace_file"] = cfg.out + ".trace.csv";
  j["restarts_file"] = cfg.out + ".restarts.csv";
  j["rng"] = "splitmix64";
  j["written_at"] = iso_now();
  std::ofstream out(cfg.out + ".summary.json");
  if (!out) throw std::runtime_error("cannot write " + cfg.out + ".summary.json");
  out << j.dump(2) << '\n';
}

void validate_solver(const RunConfig& cfg, int n) {
  if (cfg.tau < 1 || cfg.tau > n)
    throw std::invalid_argument("invalid tau: need 1 <= tau <= n = " +
                                std::to_string(n));
  if (cfg.algorithm != "cd" && cfg.algorithm != "approx" &&
      cfg.algorithm != "approx-restart")
    throw std::invalid_argument("unknown algorithm: " + cfg.algorithm);
  if (cfg.policy != "plain" && cfg.policy != "decrease")
    throw std::invalid_argument("unknown policy: " + cfg.policy);
  if (!(cfg.eps > 0.0) && cfg.budget <= 0)
    throw std::invalid_argument("set a positive --eps or a --budget");
}

}  // namespace

SolveSummary solve_run(const RunConfig& cfg) {
  BuiltProblem built = build_problem(cfg);
  const Problem& p = *built.problem;
  const int n = p.dim();
  validate_solver(cfg, n);

  EsoVector v = p.eso_vector(cfg.tau);
  SamplingConfig sampling{n, cfg.tau, cfg.seed};
  const double theta0 = static_cast<double>(cfg.tau) / n;

  CsvTraceSink sink(cfg.out);
  RunContext ctx;
  ctx.run_id = default_run_id(cfg);
  ctx.sink = &sink;
  ctx.trace_stride = cfg.trace_stride > 0 ? cfg.trace_stride : n;
  ctx.trace_gap = cfg.trace_gap;
  if (cfg.fref) ctx.fref = *cfg.fref;
  ctx.next_trace_at = ctx.trace_stride;

  std::vector<double> x0(n, 0.0);

  SolveSummary s;
  s.run_id = ctx.run_id;
  std::string schedule_desc = "none";

  if (cfg.algorithm == "approx-restart") {
    RestartSchedule schedule = make_schedule(cfg.schedule, theta0);
    schedule_desc = cfg.schedule.empty()
                        ? "variable:" + std::to_string(schedule.base())
                        : cfg.schedule;
    RestartPolicy policy{cfg.policy == "decrease"};
    RestartStop stop;
    stop.gap_eps = cfg.eps;
    stop.max_coord_updates = cfg.budget;
    RestartResult r =
        restart_loop(p, v, x0, schedule, policy, stop, sampling, ctx);
    s.status = status_name(r.status);
    s.final_F = r.F;
    s.final_gap = r.gap;
    s.gap_valid = r.gap_valid;
    s.restarts = r.restarts;
  } else {
    EngineOptions opt;
    opt.gap_eps = cfg.eps;
    opt.gap_stride = cfg.eps > 0.0 ? std::max<long long>(n, cfg.tau) : 0;
    opt.max_coord_updates = cfg.budget;
    long long K = cfg.budget > 0
                      ? (cfg.budget + cfg.tau - 1) / cfg.tau
                      : (1LL << 62) / std::max(cfg.tau, 1);
    EngineResult r = cfg.algorithm == "cd"
                         ? cd_run(p, v, x0, K, sampling, ctx, opt)
                         : approx_run(p, v, x0, K, sampling, ctx, opt);
    s.status = status_name(r.status);
    s.final_F = p.F_value(r.x);
    if (cfg.eps > 0.0) {
      s.final_gap = p.duality_gap(r.x);
      s.gap_valid = true;
    }
  }
  s.iterations = ctx.iterations;
  s.coord_updates = ctx.coord_updates;
  s.elapsed_seconds = ctx.elapsed();
  write_summary_json(cfg, p, s, schedule_desc);
  return s;
}

std::vector<SolveSummary> solve_many(const RunConfig& cfg) {
  std::vector<std::uint64_t> seeds = cfg.seeds;
  if (seeds.empty()) seeds.push_back(cfg.seed);
  std::vector<SolveSummary> out(seeds.size());
  if (seeds.size() == 1) {
    RunConfig c = cfg;
    c.seed = seeds[0];
    out[0] = solve_run(c);
    return out;
  }
  // Independent runs with isolated state; each seed writes its own files.
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, cfg.jobs));
  std::vector<std::exception_ptr> errors(seeds.size());
  for (std::size_t chunk = 0; chunk < seeds.size(); chunk += jobs) {
    std::vector<std::thread> pool;
    for (std::size_t i = chunk; i < std::min(seeds.size(), chunk + jobs); ++i) {
      pool.emplace_back([&, i]() {
        try {
          RunConfig c = cfg;
          c.seed = seeds[i];
          c.out = cfg.out + ".s" + std::to_string(seeds[i]);
          c.run_id.clear();
          out[i] = solve_run(c);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

PathSummary path_run(const RunConfig& cfg) {
  if (cfg.use_quad || cfg.model != "lasso")
    throw std::invalid_argument("path requires a lasso problem");
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("path requires --eps > 0");
  if (cfg.path_points < 1)
    throw std::invalid_argument("path requires at least one grid point");
  if (cfg.algorithm != "cd" && cfg.algorithm != "approx" &&
      cfg.algorithm != "approx-restart")
    throw std::invalid_argument("unknown algorithm: " + cfg.algorithm);

  Dataset data = load_or_make_dataset(cfg, nullptr, nullptr);
  const int n = data.cols();
  if (cfg.tau < 1 || cfg.tau > n)
    throw std::invalid_argument("invalid tau: need 1 <= tau <= n = " +
                                std::to_string(n));

  const int T = cfg.path_points;
  const double alpha = cfg.path_alpha > 0.0
                           ? cfg.path_alpha
                           : std::pow(1e-3, 1.0 / T);
  const long long per_lambda_budget =
      cfg.path_budget > 0 ? cfg.path_budget : 40000LL * n;
  const long long L = static_cast<long long>(std::ceil(std::log2(1.0 / cfg.eps)));

  const double lambda0 = LassoProblem(data, 1.0).lambda_max();
  SamplingConfig sampling{n, cfg.tau, cfg.seed};

  CsvTraceSink sink(cfg.out);
  RunContext ctx;
  ctx.run_id = cfg.run_id.empty()
                   ? cfg.algorithm + "-lassopath-s" + std::to_string(cfg.seed)
                   : cfg.run_id;
  ctx.sink = &sink;
  ctx.trace_stride = cfg.trace_stride > 0 ? cfg.trace_stride : n;
  ctx.trace_gap = cfg.trace_gap;
  ctx.next_trace_at = ctx.trace_stride;

  std::vector<double> x(n, 0.0);
  long long K0 = 10LL * n;
  bool warmup_done = false;
  std::uint64_t round_counter = 0;

  PathSummary summary;
  for (int t = 0; t <= T; ++t) {
    const double lambda = lambda0 * std::pow(alpha, t);
    LassoProblem p(data, lambda);
    EsoVector v = p.eso_vector(cfg.tau);

    PathPoint pt;
    pt.index = t;
    pt.lambda = lambda;
    const long long updates_before = ctx.coord_updates;

    double gap = p.duality_gap(x);
    bool solved = gap <= cfg.eps;
    long long budget_end = ctx.coord_updates + per_lambda_budget;

    if (!solved && cfg.algorithm == "approx-restart" && !warmup_done) {
      // one-time plain-CD warmup before the first accelerated rounds
      EngineOptions opt;
      opt.max_coord_updates = budget_end;
      SamplingConfig warm = sampling;
      warm.seed = derive_seed(cfg.seed, 0xCD);
      EngineResult r = cd_run(p, v, x, 10LL * n, warm, ctx, opt);
      x = std::move(r.x);
      warmup_done = true;
      gap = p.duality_gap(x);
      solved = gap <= cfg.eps;
    }

    if (cfg.algorithm == "approx-restart") {
      long long rounds_at_K0 = 0;
      long long r_idx = 0;
      while (!solved && ctx.coord_updates < budget_end) {
        const long long K_r = RestartSchedule::variable(K0).period(r_idx);
        ++r_idx;
        EngineOptions opt;
        opt.max_coord_updates = budget_end;
        SamplingConfig round = sampling;
        round.seed = derive_seed(cfg.seed, ++round_counter);
        EngineResult inner = approx_run(p, v, x, K_r, round, ctx, opt);
        const double F_candidate = p.F_value(inner.x);
        const double F_kept = p.F_value(x);
        const bool keep = cfg.policy != "decrease" || F_candidate <= F_kept;
        if (ctx.sink) {
          RestartRecord rec;
          rec.run_id = ctx.run_id;
          rec.restart_index = pt.restarts;
          rec.period = K_r;
          rec.F_before = F_kept;
          rec.F_after = keep ? F_candidate : F_kept;
          rec.kept_candidate = keep;
          ctx.sink->restart(rec);
        }
        if (keep) x = std::move(inner.x);
        ++pt.restarts;
        if (++rounds_at_K0 >= L) {
          K0 *= 2;  // double the base period after each ceil(log2(1/eps)) restarts
          rounds_at_K0 = 0;
          r_idx = 0;
        }
        gap = p.duality_gap(x);
        solved = gap <= cfg.eps;
      }
    } else if (!solved) {
      EngineOptions opt;
      opt.gap_eps = cfg.eps;
      opt.gap_stride = n;
      opt.max_coord_updates = budget_end;
      const long long K = (budget_end - ctx.coord_updates + cfg.tau - 1) / cfg.tau;
      SamplingConfig run_cfg = sampling;
      run_cfg.seed = derive_seed(cfg.seed, ++round_counter);
      EngineResult r = cfg.algorithm == "cd"
                           ? cd_run(p, v, x, K, run_cfg, ctx, opt)
                           : approx_run(p, v, x, K, run_cfg, ctx, opt);
      x = std::move(r.x);
      gap = p.duality_gap(x);
      solved = gap <= cfg.eps;
    }

    pt.coord_updates = ctx.coord_updates - updates_before;
    pt.F = p.F_value(x);
    pt.gap = gap;
    pt.K0_end = K0;
    pt.status = solved ? "gap_reached" : "budget_exhausted";
    if (!solved) summary.completed = false;
    summary.points.push_back(pt);
  }
  summary.total_coord_updates = ctx.coord_updates;

  std::ofstream csv(cfg.out + ".path.csv");
  if (!csv) throw std::runtime_error("cannot write " + cfg.out + ".path.csv");
  csv << "run_id,t,lambda,coord_updates,restarts,F,duality_gap,K0_end,status\n";
  char buf[256];
  for (const auto& pt : summary.points) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%lld,%lld,%.17g,%.17g,%lld,%s\n",
                  ctx.run_id.c_str(), pt.index, pt.lambda, pt.coord_updates,
                  pt.restarts, pt.F, pt.gap, pt.K0_end, pt.status.c_str());
    csv << buf;
  }

  json j;
  j["run_id"] = ctx.run_id;
  j["command"] = "path";
  j["algorithm"] = cfg.algorithm;
  j["model"] = "lasso";
  j["n"] = n;
  j["m"] = data.rows();
  j["tau"] = cfg.tau;
  j["seed"] = cfg.seed;
  j["eps"] = cfg.eps;
  j["path_points"] = T;
  j["path_alpha"] = alpha;
  j["per_lambda_budget"] = per_lambda_budget;
  j["completed"] = summary.completed;
  j["total_coord_updates"] = summary.total_coord_updates;
  j["elapsed_seconds"] = ctx.elapsed();
  j["path_file"] = cfg.out + ".path.csv";
  j["rng"] = "splitmix64";
  j["written_at"] = iso_now();
  std::ofstream out(cfg.out + ".summary.json");
  if (!out) throw std::runtime_error("cannot write " + cfg.out + ".summary.json");
  out << j.dump(2) << '\n';
  return summary;
}

std::vector<long long> schedule_preview(const std::string& spec, double theta0,
                                        int count) {
  RestartSchedule s = make_schedule(spec, theta0);
  std::vector<long long> out;
  for (int r = 0; r < count && !s.exhausted(r); ++r) out.push_back(s.period(r));
  return out;
}

GenSummary gen_run(const RunConfig& cfg) {
  SynthLassoResult r = synth_lasso(cfg.synth_n, cfg.synth_m, cfg.synth_density,
                                   cfg.synth_noise, cfg.synth_seed);
  write_libsvm(r.dataset, cfg.out);
  json xs = json::array();
  int nnz = 0;
  for (double v : r.x_star) {
    xs.push_back(v);
    if (v != 0.0) ++nnz;
  }
  json j;
  j["x_star"] = xs;
  std::ofstream out(cfg.out + ".xstar.json");
  if (out) out << j.dump() << '\n';
  GenSummary g;
  g.path = cfg.out;
  g.n = cfg.synth_n;
  g.m = cfg.synth_m;
  g.nnz = r.dataset.matrix.nnz();
  g.x_star_nnz = nnz;
  return g;
}

}  // namespace rapcd
