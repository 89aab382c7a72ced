#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rapcd/engine.hpp"

namespace rapcd {

// Restart periods K_0, K_1, ... generated on demand.
//
//  fixed(K):     K_r = K.
//  variable(K0): the ruler sequence K_r = 2^{nu2(r+1)} K0, where nu2 is the
//                2-adic valuation.  It satisfies, for every J:
//                K_{2^j - 1} = 2^j K0, and exactly 2^{J-1-j} of the first
//                2^J - 1 periods equal 2^j K0.
//  log_grid(N):  ceil(N/2) periods of 2, then ceil(N/4) periods of 4, then
//                ceil(N/2^i) periods of 2^i, ...
//  explicit_list: periods from a list; the restart loop stops when the list
//                 is exhausted.
class RestartSchedule {
 public:
  enum class Kind { Fixed, Variable, LogGrid, ExplicitList };

  static RestartSchedule fixed(long long K);
  static RestartSchedule variable(long long K0);
  static RestartSchedule log_grid(long long N);
  static RestartSchedule explicit_list(std::vector<long long> periods);

  Kind kind() const { return kind_; }
  long long base() const { return param_; }

  // K_r; throws std::out_of_range past the end of an explicit list.
  long long period(long long r) const;
  bool exhausted(long long r) const;

  // Optional truncation of the variable schedule: once 2^j K0 has been used
  // (j+1) * ceil(log2(delta0/eps)) times, skip further periods of that
  // length.  Needs an estimate of delta0/eps; off by default.
  void enable_truncation(double log2_delta0_over_eps);

 private:
  RestartSchedule(Kind kind, long long param) : kind_(kind), param_(param) {}

  Kind kind_;
  long long param_ = 0;
  std::vector<long long> list_;
  double trunc_log_ratio_ = 0.0;
  bool truncate_ = false;
};

struct RestartPolicy {
  // Algorithm with guaranteed function-value decrease: at each restart keep
  // the candidate only if its objective does not exceed the kept point's.
  bool guarantee_decrease = true;
};

struct RestartStop {
  double gap_eps = 0.0;              // stop once duality_gap <= gap_eps (0 = off)
  long long max_coord_updates = 0;   // 0 = unlimited
  long long max_restarts = 0;        // 0 = unlimited
};

struct RestartResult {
  std::vector<double> x;
  double F = 0.0;
  double gap = 0.0;
  bool gap_valid = false;
  StopStatus status = StopStatus::IterationsDone;
  long long restarts = 0;
  long long coord_updates = 0;
};

// Runs approx_run repeatedly with periods from the schedule, restarting from
// the kept point.  Objective values are only evaluated at restart boundaries.
// Each round draws its subsets from a seed derived from (sampling.seed, r).
RestartResult restart_loop(const Problem& p, const EsoVector& v,
                           std::span<const double> x0,
                           const RestartSchedule& schedule,
                           const RestartPolicy& policy, const RestartStop& stop,
                           const SamplingConfig& sampling, RunContext& ctx,
                           const EngineOptions& engine_opt = {});

// --- restart period / complexity calculators -------------------------------

// K(alpha) = ceil( (2/theta0) (sqrt((1+mu)/(alpha mu)) - 1) + 1 ): the period
// for which one restarted round contracts E[F - F*] by alpha.
long long k_alpha(double mu_v, double theta0, double alpha);

// K* = ceil( (2e/theta0) (sqrt((1+mu)/mu) - 1) + 1 ), the alpha = e^{-2} choice.
long long k_star(double mu_v, double theta0);

// N* = ln(delta0/eps) * K*: total-iteration bound for the fixed-K* scheme
// (returned as a real; callers round).
double n_star(double mu_v, double theta0, double delta0, double eps);

struct VariableComplexity {
  long long J = 0;                  // restart rounds 2^J - 1 reach eps
  double total_iterations_bound = 0;  // bound on K_0 + ... + K_{2^J - 1}
};

// Complexity of the variable (ruler) schedule:
//   J     = ceil(max(log2(K*/K0), 0)) + ceil(log2(ln(delta0/eps)/2))
//   bound = (ceil(max(log2(K*/K0), 0)) + ceil(log2(ln(delta0/eps))) + 1)
//             * ln(delta0/eps) * max(K*, K0).
// Requires ln(delta0/eps) > 1.
VariableComplexity variable_complexity(long long K0, long long k_star,
                                       double delta0, double eps);

// Generic-contraction restart period for any method with
//   E[F(x_k) - F*] <= (C_F (F(x_0)-F*) + C_d/2 dist(x_0, X*)^2) / (k + a)^2:
//   K* = ceil( (1/e) sqrt(C_F + C_d/mu) - a ).
long long k_star_general(double c_f, double c_d, double mu, double a);

}  // namespace rapcd
