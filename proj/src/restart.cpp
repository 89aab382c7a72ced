#include "rapcd/restart.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "rapcd/rng.hpp"

namespace rapcd {

RestartSchedule RestartSchedule::fixed(long long K) {
  if (K < 1) throw std::invalid_argument("RestartSchedule::fixed: K must be >= 1");
  return RestartSchedule(Kind::Fixed, K);
}

RestartSchedule RestartSchedule::variable(long long K0) {
  if (K0 < 1) throw std::invalid_argument("RestartSchedule::variable: K0 must be >= 1");
  return RestartSchedule(Kind::Variable, K0);
}

RestartSchedule RestartSchedule::log_grid(long long N) {
  if (N < 2) throw std::invalid_argument("RestartSchedule::log_grid: N must be >= 2");
  return RestartSchedule(Kind::LogGrid, N);
}

RestartSchedule RestartSchedule::explicit_list(std::vector<long long> periods) {
  for (long long k : periods)
    if (k < 1) throw std::invalid_argument("RestartSchedule: periods must be >= 1");
  RestartSchedule s(Kind::ExplicitList, 0);
  s.list_ = std::move(periods);
  return s;
}

void RestartSchedule::enable_truncation(double log2_delta0_over_eps) {
  if (kind_ != Kind::Variable)
    throw std::logic_error("enable_truncation: only applies to variable schedules");
  if (!(log2_delta0_over_eps > 0.0))
    throw std::invalid_argument("enable_truncation: ratio estimate must be > 0");
  truncate_ = true;
  trunc_log_ratio_ = log2_delta0_over_eps;
}

namespace {

long long ruler_period(long long K0, long long r) {
  const auto m = static_cast<unsigned long long>(r) + 1ULL;
  const int j = std::countr_zero(m);
  if (j > 62) throw std::overflow_error("RestartSchedule: period overflow");
  return (1LL << j) * K0;
}

}  // namespace

long long RestartSchedule::period(long long r) const {
  if (r < 0) throw std::out_of_range("RestartSchedule::period: r must be >= 0");
  switch (kind_) {
    case Kind::Fixed:
      return param_;
    case Kind::Variable: {
      if (!truncate_) return ruler_period(param_, r);
      // Skip periods 2^j K0 once they have been emitted
      // (j+1) * ceil(log2(delta0/eps)) times.
      const double quota_unit = std::ceil(trunc_log_ratio_);
      std::vector<long long> used(64, 0);
      long long emitted = 0;
      for (long long s = 0;; ++s) {
        const auto m = static_cast<unsigned long long>(s) + 1ULL;
        const int j = std::countr_zero(m);
        if (j > 62) throw std::overflow_error("RestartSchedule: period overflow");
        const auto quota = static_cast<long long>((j + 1) * quota_unit);
        if (used[j] >= quota) continue;
        ++used[j];
        if (emitted == r) return (1LL << j) * param_;
        ++emitted;
      }
    }
    case Kind::LogGrid: {
      long long acc = 0;
      for (int i = 1; i <= 62; ++i) {
        const long long p = 1LL << i;
        const long long copies = (param_ + p - 1) / p;  // ceil(N / 2^i)
        if (r < acc + std::max<long long>(copies, 1)) return p;
        acc += std::max<long long>(copies, 1);
      }
      throw std::overflow_error("RestartSchedule: period overflow");
    }
    case Kind::ExplicitList:
      if (r >= static_cast<long long>(list_.size()))
        throw std::out_of_range("RestartSchedule: explicit list exhausted");
      return list_[static_cast<std::size_t>(r)];
  }
  throw std::logic_error("RestartSchedule: unreachable");
}

bool RestartSchedule::exhausted(long long r) const {
  return kind_ == Kind::ExplicitList && r >= static_cast<long long>(list_.size());
}

RestartResult restart_loop(const Problem& p, const EsoVector& v,
                           std::span<const double> x0,
                           const RestartSchedule& schedule,
                           const RestartPolicy& policy, const RestartStop& stop,
                           const SamplingConfig& sampling, RunContext& ctx,
                           const EngineOptions& engine_opt) {
  if (stop.gap_eps <= 0.0 && stop.max_coord_updates <= 0 &&
      stop.max_restarts <= 0 && schedule.kind() != RestartSchedule::Kind::ExplicitList)
    throw std::invalid_argument("restart_loop: no stop criterion set");

  RestartResult res;
  res.x.assign(x0.begin(), x0.end());
  res.F = p.F_value(res.x);

  if (stop.gap_eps > 0.0) {
    res.gap = p.duality_gap(res.x);
    res.gap_valid = true;
    if (res.gap <= stop.gap_eps) {
      res.status = StopStatus::GapReached;
      return res;
    }
  }

  EngineOptions opt = engine_opt;
  opt.max_coord_updates = stop.max_coord_updates;

  for (long long r = 0;; ++r) {
    if (schedule.exhausted(r)) {
      res.status = StopStatus::ScheduleExhausted;
      return res;
    }
    if (stop.max_restarts > 0 && r >= stop.max_restarts) {
      res.status = StopStatus::BudgetExhausted;
      return res;
    }
    if (stop.max_coord_updates > 0 && ctx.coord_updates >= stop.max_coord_updates) {
      res.status = StopStatus::BudgetExhausted;
      return res;
    }

    const long long K_r = schedule.period(r);
    SamplingConfig round = sampling;
    round.seed = derive_seed(sampling.seed, static_cast<std::uint64_t>(r));
    EngineResult inner = approx_run(p, v, res.x, K_r, round, ctx, opt);

    // Objective values are only checked at restart boundaries; evaluated
    // from scratch so the comparison is a pure function of the iterate.
    const double F_candidate = p.F_value(inner.x);
    const double F_before = res.F;
    const bool keep_candidate =
        !policy.guarantee_decrease || F_candidate <= res.F;
    if (keep_candidate) {
      res.x = std::move(inner.x);
      res.F = F_candidate;
    }
    res.restarts = r + 1;
    res.coord_updates = ctx.coord_updates;

    if (ctx.sink) {
      RestartRecord rec;
      rec.run_id = ctx.run_id;
      rec.restart_index = r;
      rec.period = K_r;
      rec.F_before = F_before;
      rec.F_after = res.F;
      rec.kept_candidate = keep_candidate;
      ctx.sink->restart(rec);
    }

    if (stop.gap_eps > 0.0) {
      res.gap = p.duality_gap(res.x);
      res.gap_valid = true;
      if (res.gap <= stop.gap_eps) {
        res.status = StopStatus::GapReached;
        return res;
      }
    }
    if (inner.status == StopStatus::BudgetExhausted ||
        (stop.max_coord_updates > 0 &&
         ctx.coord_updates >= stop.max_coord_updates)) {
      res.status = StopStatus::BudgetExhausted;
      return res;
    }
  }
}

namespace {

long long ceil_to_ll(double x, const char* what) {
  const double c = std::ceil(x);
  if (std::abs(c) > 9.0e18) throw std::overflow_error(what);
  return static_cast<long long>(c);
}

}  // namespace

long long k_alpha(double mu_v, double theta0, double alpha) {
  if (!(mu_v > 0.0)) throw std::invalid_argument("k_alpha: mu_v must be > 0");
  if (!(theta0 > 0.0) || theta0 > 1.0)
    throw std::invalid_argument("k_alpha: theta0 must lie in (0, 1]");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("k_alpha: alpha must lie in (0, 1)");
  const double k =
      2.0 / theta0 * (std::sqrt((1.0 + mu_v) / (alpha * mu_v)) - 1.0) + 1.0;
  return ceil_to_ll(k, "k_alpha overflow");
}

long long k_star(double mu_v, double theta0) {
  if (!(mu_v > 0.0)) throw std::invalid_argument("k_star: mu_v must be > 0");
  if (!(theta0 > 0.0) || theta0 > 1.0)
    throw std::invalid_argument("k_star: theta0 must lie in (0, 1]");
  const double e = 2.718281828459045235360287471353;
  const double k =
      2.0 * e / theta0 * (std::sqrt((1.0 + mu_v) / mu_v) - 1.0) + 1.0;
  return ceil_to_ll(k, "k_star overflow");
}

double n_star(double mu_v, double theta0, double delta0, double eps) {
  if (!(delta0 > 0.0) || !(eps > 0.0) || eps >= delta0)
    throw std::invalid_argument("n_star: need 0 < eps < delta0");
  return std::log(delta0 / eps) * static_cast<double>(k_star(mu_v, theta0));
}

VariableComplexity variable_complexity(long long K0, long long k_star,
                                       double delta0, double eps) {
  if (K0 < 1 || k_star < 1)
    throw std::invalid_argument("variable_complexity: periods must be >= 1");
  if (!(delta0 > 0.0) || !(eps > 0.0) || eps >= delta0)
    throw std::invalid_argument("variable_complexity: need 0 < eps < delta0");
  const double L = std::log(delta0 / eps);
  if (L <= 1.0)
    throw std::invalid_argument(
        "variable_complexity: ln(delta0/eps) <= 1 makes the log terms degenerate");
  const double i = std::ceil(
      std::max(std::log2(static_cast<double>(k_star) / K0), 0.0));
  VariableComplexity out;
  out.J = static_cast<long long>(i + std::ceil(std::log2(L / 2.0)));
  out.total_iterations_bound =
      (i + std::ceil(std::log2(L)) + 1.0) * L *
      static_cast<double>(std::max(k_star, K0));
  return out;
}

long long k_star_general(double c_f, double c_d, double mu, double a) {
  if (!(c_f > 0.0) || c_d < 0.0 || !(mu > 0.0) || a < 0.0)
    throw std::invalid_argument("k_star_general: bad arguments");
  const double e = 2.718281828459045235360287471353;
  return ceil_to_ll(std::sqrt(c_f + c_d / mu) / e - a, "k_star_general overflow");
}

}  // namespace rapcd
