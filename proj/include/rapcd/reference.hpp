#pragma once

#include <span>
#include <vector>

#include "rapcd/engine.hpp"
#include "rapcd/problem.hpp"

namespace rapcd {

// Naive serial reference implementation of the accelerated step, kept for
// testing and benchmarking against the production engine.
//
// It maintains x_k, y_k, z_k as explicit dense vectors and follows the update
// rules literally:
//
//   y_k     = (1 - theta_k) x_k + theta_k z_k
//   z_{k+1} = componentwise prox steps on a sampled subset, from grad f(y_k)
//   x_{k+1} = y_k + (n/tau) theta_k (z_{k+1} - z_k)
//
// recomputing all products from scratch each iteration.  No change of
// variables and no incremental caches, so it is O(nnz) per iteration but
// shares none of the production engine's state bookkeeping — which is what
// makes it a usable equivalence oracle.  Given the same sampling seed it
// draws the same subsets as approx_run.
struct ReferenceResult {
  std::vector<double> x;
};

ReferenceResult reference_approx_run(const Problem& p, const EsoVector& v,
                                     std::span<const double> x0, long long K,
                                     const SamplingConfig& sampling,
                                     const IterObserver& observer = {});

}  // namespace rapcd
