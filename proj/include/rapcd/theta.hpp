#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace rapcd {

// Momentum coefficients theta_0, theta_1, ... with
//
//   theta_0 = tau / n,   theta_{k+1} = (sqrt(theta_k^4 + 4 theta_k^2) - theta_k^2) / 2,
//
// i.e. theta_{k+1} is the unique positive root of X^2 + theta_k^2 X - theta_k^2.
// The recurrence is evaluated in the rationalized form
//
//   theta_{k+1} = 2 theta_k / (theta_k + sqrt(theta_k^2 + 4)),
//
// which is algebraically identical but avoids the cancellation the printed
// form suffers when theta_k is small.  Values are cached append-only; at(k)
// is deterministic and returns bit-identical values on repeated calls.
//
// The sequence satisfies, for all k >= 0,
//   (1 - theta_{k+1}) / theta_{k+1}^2 = 1 / theta_k^2
// and the sandwich bounds
//   (2 - theta_0) / (k + (2 - theta_0)/theta_0)  <=  theta_k  <=  2 / (k + 2/theta_0).
class ThetaSequence {
 public:
  // theta_0 = tau/n; requires 1 <= tau <= n.
  ThetaSequence(long long tau, long long n);

  // Direct construction from theta_0 in (0, 1].
  explicit ThetaSequence(double theta0);

  double theta0() const { return cache_[0]; }

  // theta_k, extending the cache as needed.  One writer at a time; the engine
  // uses one sequence per solver run.
  double at(std::size_t k);

  std::size_t cached() const { return cache_.size(); }

  // theta_{-1}^2 := theta_0^2 / (1 - theta_0).  Undefined for theta_0 = 1
  // (full sampling is the deterministic regime, excluded from rate tables);
  // throws std::domain_error in that case.
  double theta_minus1_sq() const;

  // Analytic sandwich bounds (lower, upper) for theta_k.
  static std::pair<double, double> bounds(double theta0, std::size_t k);

 private:
  std::vector<double> cache_;
};

}  // namespace rapcd
