#include "rapcd/theta.hpp"

#include <cmath>
#include <stdexcept>

namespace rapcd {

ThetaSequence::ThetaSequence(long long tau, long long n) {
  if (n <= 0) throw std::invalid_argument("ThetaSequence: n must be positive");
  if (tau < 1 || tau > n)
    throw std::invalid_argument("ThetaSequence: need 1 <= tau <= n");
  cache_.push_back(static_cast<double>(tau) / static_cast<double>(n));
}

ThetaSequence::ThetaSequence(double theta0) {
  if (!(theta0 > 0.0) || theta0 > 1.0)
    throw std::invalid_argument("ThetaSequence: theta0 must lie in (0, 1]");
  cache_.push_back(theta0);
}

double ThetaSequence::at(std::size_t k) {
  while (cache_.size() <= k) {
    const double t = cache_.back();
    cache_.push_back(2.0 * t / (t + std::sqrt(t * t + 4.0)));
  }
  return cache_[k];
}

double ThetaSequence::theta_minus1_sq() const {
  const double t0 = cache_[0];
  if (t0 == 1.0)
    throw std::domain_error("theta_minus1_sq: undefined for theta0 = 1");
  return t0 * t0 / (1.0 - t0);
}

std::pair<double, double> ThetaSequence::bounds(double theta0, std::size_t k) {
  const double kk = static_cast<double>(k);
  const double lower = (2.0 - theta0) / (kk + (2.0 - theta0) / theta0);
  const double upper = 2.0 / (kk + 2.0 / theta0);
  return {lower, upper};
}

}  // namespace rapcd
