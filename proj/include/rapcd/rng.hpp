#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rapcd {

// SplitMix64: a counter-based 64-bit generator.  The state advances by a
// fixed odd constant, so the k-th output is a pure function of (seed, k).
// Runs with the same seed are reproducible across platforms, and derived
// streams are independent for parallel use.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection; bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Deterministic seed for a derived stream (per restart round, per worker, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64::mix(seed ^ SplitMix64::mix(stream + 0x51ab5f3c9e1d20efULL));
}

// Standard normal pair via Box-Muller on SplitMix64 output.  Kept hand-rolled
// so that generated datasets are bit-identical across standard libraries.
inline void gaussian_pair(SplitMix64& rng, double& g0, double& g1);

namespace detail {
inline double uniform_open(SplitMix64& rng) {
  // (0, 1): never returns 0 so log() below is safe.
  return (static_cast<double>(rng.next() >> 11) + 0.5) * 0x1.0p-53;
}
}  // namespace detail

inline void gaussian_pair(SplitMix64& rng, double& g0, double& g1) {
  const double u1 = detail::uniform_open(rng);
  const double u2 = detail::uniform_open(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  g0 = r * std::cos(a);
  g1 = r * std::sin(a);
}

// tau-nice sampling: a uniformly random subset of exactly tau distinct
// coordinates of [0, n), so each coordinate has marginal probability tau/n.
// Uses Floyd's algorithm; membership is tracked with a stamp array so a draw
// costs O(tau) after O(n) one-time setup.  Output is sorted ascending, which
// fixes the order coordinate updates are applied in.
class SubsetSampler {
 public:
  SubsetSampler(int n, int tau) : n_(n), tau_(tau), stamp_(n, 0), round_(0) {
    if (n <= 0) throw std::invalid_argument("SubsetSampler: n must be positive");
    if (tau < 1 || tau > n) throw std::invalid_argument("SubsetSampler: need 1 <= tau <= n");
  }

  int n() const { return n_; }
  int tau() const { return tau_; }

  void draw(SplitMix64& rng, std::vector<int>& out) {
    out.clear();
    if (tau_ == n_) {
      for (int i = 0; i < n_; ++i) out.push_back(i);
      return;
    }
    ++round_;
    for (int j = n_ - tau_; j < n_; ++j) {
      const int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(j) + 1));
      if (stamp_[t] == round_) {
        stamp_[j] = round_;
        out.push_back(j);
      } else {
        stamp_[t] = round_;
        out.push_back(t);
      }
    }
    std::sort(out.begin(), out.end());
  }

 private:
  int n_;
  int tau_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t round_;
};

}  // namespace rapcd
