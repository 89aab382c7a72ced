#include "rapcd/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rapcd/rng.hpp"

namespace rapcd {

namespace {

void check_inputs(const Problem& p, const EsoVector& v, std::span<const double> x0,
                  long long K, const SamplingConfig& s) {
  const int n = p.dim();
  if (s.n != n) throw std::invalid_argument("engine: sampling.n != problem dim");
  if (s.tau < 1 || s.tau > n)
    throw std::invalid_argument("engine: need 1 <= tau <= n");
  if (v.tau != s.tau)
    throw std::invalid_argument("engine: ESO vector certified for a different tau");
  if (static_cast<int>(v.v.size()) != n)
    throw std::invalid_argument("engine: ESO vector has wrong length");
  if (K < 1) throw std::invalid_argument("engine: K must be >= 1");
  if (static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("engine: x0 has wrong length");
  for (double xi : x0)
    if (!std::isfinite(xi))
      throw std::invalid_argument("engine: x0 has non-finite components");
}

[[noreturn]] void nonfinite_abort(long long k, int i) {
  throw std::runtime_error("engine: non-finite value at iteration " +
                           std::to_string(k) + ", coordinate " + std::to_string(i));
}

void emit_trace(RunContext& ctx, const Problem& p, std::span<const double> x,
                EngineStats& stats) {
  IterRecord rec;
  rec.run_id = ctx.run_id;
  rec.k = ctx.iterations;
  rec.coord_updates = ctx.coord_updates;
  rec.epoch = static_cast<double>(ctx.coord_updates) / p.dim();
  rec.F = p.F_value(x);
  ++stats.f_evaluations;
  if (std::isfinite(ctx.fref)) {
    rec.F_minus_Fref = rec.F - ctx.fref;
    rec.has_fref = true;
  }
  if (ctx.trace_gap) {
    rec.duality_gap = p.duality_gap(x);
    rec.has_gap = true;
  }
  rec.elapsed_seconds = ctx.elapsed();
  ctx.sink->iter(rec);
  ctx.advance_trace();
}

}  // namespace

EngineResult approx_run(const Problem& p, const EsoVector& v,
                        std::span<const double> x0, long long K,
                        const SamplingConfig& sampling, RunContext& ctx,
                        const EngineOptions& opt) {
  check_inputs(p, v, x0, K, sampling);
  const int n = p.dim();
  const int tau = sampling.tau;
  const double n_over_tau = static_cast<double>(n) / tau;
  const long long refresh = opt.refresh_interval > 0 ? opt.refresh_interval
                                                     : 10LL * n;

  EngineResult res;
  ThetaSequence theta(tau, n);
  std::vector<double> u(n, 0.0);
  std::vector<double> z(x0.begin(), x0.end());
  LinCache cu, cz;
  p.build_cache(u, false, cu);
  p.build_cache(z, true, cz);

  SubsetSampler sampler(n, tau);
  SplitMix64 rng(sampling.seed);
  std::vector<int> subset;
  std::vector<double> grads(tau);
  std::vector<double> x_scratch(n);

  // y_k = theta_k^2 u_k + z_k and x_{k+1} = theta_k^2 u_{k+1} + z_{k+1}
  // (u_0 = 0, z_0 = x_0); validated against the naive dense reference.
  auto reconstruct = [&](double theta_sq, std::span<double> out) {
    for (int i = 0; i < n; ++i) out[i] = theta_sq * u[i] + z[i];
  };

  long long next_gap_at =
      (opt.gap_eps > 0.0 && opt.gap_stride > 0)
          ? ctx.coord_updates + opt.gap_stride
          : -1;
  double theta_sq_last = theta.at(0) * theta.at(0);

  for (long long k = 0; k < K; ++k) {
    const double th = theta.at(static_cast<std::size_t>(k));
    const double th2 = th * th;
    theta_sq_last = th2;
    sampler.draw(rng, subset);

    const int bs = static_cast<int>(subset.size());
#pragma omp parallel for schedule(static) if (bs > 512)
    for (int t = 0; t < bs; ++t)
      grads[t] = p.partial_grad(subset[t], th2, &cu, cz);

    const double ucoef = -(1.0 - n_over_tau * th) / th2;
    for (int t = 0; t < bs; ++t) {
      const int i = subset[t];
      const double w = th * n_over_tau * v.v[i];
      const double znew = p.prox_coord(i, z[i] - grads[t] / w, w);
      if (!std::isfinite(znew)) nonfinite_abort(k, i);
      const double d = znew - z[i];
      if (d != 0.0) {
        z[i] = znew;
        const double du = ucoef * d;
        u[i] += du;
        p.update_cache(i, d, cz);
        p.update_cache(i, du, cu);
        res.stats.col_nnz_touched += 2 * p.col_nnz(i);
      }
    }

    ++ctx.iterations;
    ctx.coord_updates += tau;
    ++res.stats.iterations;
    res.stats.coord_updates += tau;

    if ((k + 1) % refresh == 0 && k + 1 < K) {
      p.build_cache(u, false, cu);
      p.build_cache(z, true, cz);
      ++res.stats.cache_rebuilds;
    }

    const bool want_trace = ctx.trace_due();
    const bool want_gap = next_gap_at >= 0 && ctx.coord_updates >= next_gap_at;
    const bool want_obs = static_cast<bool>(opt.observer);
    if (want_trace || want_gap || want_obs) {
      reconstruct(th2, x_scratch);
      if (want_obs) opt.observer(k, x_scratch, z, th);
      if (want_trace) emit_trace(ctx, p, x_scratch, res.stats);
      if (want_gap) {
        while (next_gap_at <= ctx.coord_updates) next_gap_at += opt.gap_stride;
        if (p.duality_gap(x_scratch) <= opt.gap_eps) {
          res.x = x_scratch;
          res.status = StopStatus::GapReached;
          return res;
        }
      }
    }

    if (opt.max_coord_updates > 0 && ctx.coord_updates >= opt.max_coord_updates &&
        k + 1 < K) {
      reconstruct(th2, x_scratch);
      res.x = x_scratch;
      res.status = StopStatus::BudgetExhausted;
      return res;
    }
  }

  res.x.resize(n);
  reconstruct(theta_sq_last, res.x);
  res.status = StopStatus::IterationsDone;
  return res;
}

EngineResult cd_run(const Problem& p, const EsoVector& v,
                    std::span<const double> x0, long long K,
                    const SamplingConfig& sampling, RunContext& ctx,
                    const EngineOptions& opt) {
  check_inputs(p, v, x0, K, sampling);
  const int n = p.dim();
  const int tau = sampling.tau;
  const long long refresh = opt.refresh_interval > 0 ? opt.refresh_interval
                                                     : 10LL * n;

  EngineResult res;
  std::vector<double> x(x0.begin(), x0.end());
  LinCache cx;
  p.build_cache(x, true, cx);

  SubsetSampler sampler(n, tau);
  SplitMix64 rng(sampling.seed);
  std::vector<int> subset;
  std::vector<double> grads(tau);

  long long next_gap_at =
      (opt.gap_eps > 0.0 && opt.gap_stride > 0)
          ? ctx.coord_updates + opt.gap_stride
          : -1;

  for (long long k = 0; k < K; ++k) {
    sampler.draw(rng, subset);
    const int bs = static_cast<int>(subset.size());
#pragma omp parallel for schedule(static) if (bs > 512)
    for (int t = 0; t < bs; ++t)
      grads[t] = p.partial_grad(subset[t], 0.0, nullptr, cx);

    for (int t = 0; t < bs; ++t) {
      const int i = subset[t];
      const double w = v.v[i];
      const double xnew = p.prox_coord(i, x[i] - grads[t] / w, w);
      if (!std::isfinite(xnew)) nonfinite_abort(k, i);
      const double d = xnew - x[i];
      if (d != 0.0) {
        x[i] = xnew;
        p.update_cache(i, d, cx);
        res.stats.col_nnz_touched += p.col_nnz(i);
      }
    }

    ++ctx.iterations;
    ctx.coord_updates += tau;
    ++res.stats.iterations;
    res.stats.coord_updates += tau;

    if ((k + 1) % refresh == 0 && k + 1 < K) {
      p.build_cache(x, true, cx);
      ++res.stats.cache_rebuilds;
    }

    if (opt.observer) opt.observer(k, x, x, 0.0);
    if (ctx.trace_due()) emit_trace(ctx, p, x, res.stats);
    if (next_gap_at >= 0 && ctx.coord_updates >= next_gap_at) {
      while (next_gap_at <= ctx.coord_updates) next_gap_at += opt.gap_stride;
      if (p.duality_gap(x) <= opt.gap_eps) {
        res.x = std::move(x);
        res.status = StopStatus::GapReached;
        return res;
      }
    }
    if (opt.max_coord_updates > 0 && ctx.coord_updates >= opt.max_coord_updates &&
        k + 1 < K) {
      res.x = std::move(x);
      res.status = StopStatus::BudgetExhausted;
      return res;
    }
  }

  res.x = std::move(x);
  res.status = StopStatus::IterationsDone;
  return res;
}

}  // namespace rapcd
