#include "rapcd/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "rapcd/rng.hpp"
#include "rapcd/theta.hpp"

namespace rapcd {

ReferenceResult reference_approx_run(const Problem& p, const EsoVector& v,
                                     std::span<const double> x0, long long K,
                                     const SamplingConfig& sampling,
                                     const IterObserver& observer) {
  const int n = p.dim();
  const int tau = sampling.tau;
  if (sampling.n != n || tau < 1 || tau > n || v.tau != tau || K < 1)
    throw std::invalid_argument("reference_approx_run: bad configuration");
  const double n_over_tau = static_cast<double>(n) / tau;

  ThetaSequence theta(tau, n);
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> z = x;
  std::vector<double> y(n), znew(n);

  SubsetSampler sampler(n, tau);
  SplitMix64 rng(sampling.seed);
  std::vector<int> subset;
  LinCache cy;

  for (long long k = 0; k < K; ++k) {
    const double th = theta.at(static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) y[i] = (1.0 - th) * x[i] + th * z[i];
    p.build_cache(y, true, cy);  // fresh, from scratch

    sampler.draw(rng, subset);
    znew = z;
    for (int i : subset) {
      const double g = p.partial_grad(i, 0.0, nullptr, cy);
      const double w = th * n_over_tau * v.v[i];
      znew[i] = p.prox_coord(i, z[i] - g / w, w);
    }
    for (int i = 0; i < n; ++i) x[i] = y[i] + n_over_tau * th * (znew[i] - z[i]);
    z = znew;
    if (observer) observer(k, x, z, th);
  }
  return {std::move(x)};
}

}  // namespace rapcd
