#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rapcd/problem.hpp"
#include "rapcd/theta.hpp"
#include "rapcd/trace.hpp"

namespace rapcd {

// tau-nice sampling of coordinate subsets: exactly tau distinct coordinates
// per iteration, each with marginal probability tau/n.
struct SamplingConfig {
  int n = 0;
  int tau = 1;
  std::uint64_t seed = 1;
};

enum class StopStatus {
  IterationsDone,   // ran the requested K iterations
  GapReached,       // duality gap fell below the requested tolerance
  BudgetExhausted,  // coordinate-update budget ran out
  ScheduleExhausted // explicit restart schedule ran out of periods
};

// Called after every iteration with (k, x_{k+1}, z_{k+1}, theta_k); used by
// tests that track Lyapunov quantities along the trajectory.  Enabling it
// materializes x each iteration, so it is off by default.
using IterObserver = std::function<void(long long k, std::span<const double> x,
                                        std::span<const double> z, double theta)>;

struct EngineOptions {
  // Cached products are rebuilt from scratch every refresh_interval
  // iterations to bound floating-point drift; 0 means the default 10 n.
  long long refresh_interval = 0;
  // Early stop on duality gap <= gap_eps, checked every gap_stride coordinate
  // updates (0 disables the check).
  double gap_eps = 0.0;
  long long gap_stride = 0;
  // Hard cap on ctx.coord_updates (0 = unlimited).
  long long max_coord_updates = 0;
  IterObserver observer;
};

struct EngineStats {
  long long iterations = 0;
  long long coord_updates = 0;
  long long col_nnz_touched = 0;  // column entries read/written by updates
  long long cache_rebuilds = 0;
  long long f_evaluations = 0;
};

struct EngineResult {
  std::vector<double> x;
  StopStatus status = StopStatus::IterationsDone;
  EngineStats stats;
};

// One APPROX run (Algorithm: momentum over a (u, z) change of variables with
// incrementally maintained products).  Deterministic given sampling.seed;
// per-iteration cost is proportional to the touched column nnz.
EngineResult approx_run(const Problem& p, const EsoVector& v,
                        std::span<const double> x0, long long K,
                        const SamplingConfig& sampling, RunContext& ctx,
                        const EngineOptions& opt = {});

// Plain randomized proximal coordinate descent baseline:
//   x^i <- prox_coord(i, x^i - grad_i f(x) / v_i, v_i)  for i in S_k.
EngineResult cd_run(const Problem& p, const EsoVector& v,
                    std::span<const double> x0, long long K,
                    const SamplingConfig& sampling, RunContext& ctx,
                    const EngineOptions& opt = {});

}  // namespace rapcd
