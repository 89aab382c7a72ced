#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "rapcd/rng.hpp"

using namespace rapcd;

TEST_CASE("splitmix64 streams are reproducible and distinct") {
  SplitMix64 a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    CHECK(va == b.next());
  }
  bool any_diff = false;
  SplitMix64 a2(42);
  for (int i = 0; i < 10; ++i) any_diff |= (a2.next() != c.next());
  CHECK(any_diff);
}

TEST_CASE("next_below stays in range and rejects zero bound") {
  SplitMix64 rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(rng.next_below(7) < 7);
  CHECK_THROWS_AS(rng.next_below(0), std::invalid_argument);
}

TEST_CASE("subset sampler: tau = n returns the full set") {
  SubsetSampler s(5, 5);
  SplitMix64 rng(3);
  std::vector<int> out;
  s.draw(rng, out);
  CHECK(out == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("subset sampler: draws are sorted, distinct, exactly tau") {
  SubsetSampler s(20, 6);
  SplitMix64 rng(9);
  std::vector<int> out;
  for (int rep = 0; rep < 200; ++rep) {
    s.draw(rng, out);
    REQUIRE(out.size() == 6);
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i] > out[i - 1]);
    for (int v : out) CHECK((v >= 0 && v < 20));
  }
}

TEST_CASE("subset sampler: tau=1 marginals are uniform within 5 sigma") {
  const int n = 10;
  const int draws = 1000000;
  SubsetSampler s(n, 1);
  SplitMix64 rng(12345);
  std::vector<int> counts(n, 0);
  std::vector<int> out;
  for (int d = 0; d < draws; ++d) {
    s.draw(rng, out);
    counts[out[0]]++;
  }
  const double expect = static_cast<double>(draws) / n;
  const double sigma = std::sqrt(draws * (1.0 / n) * (1.0 - 1.0 / n));
  for (int i = 0; i < n; ++i) CHECK(std::abs(counts[i] - expect) < 5.0 * sigma);
}

TEST_CASE("subset sampler: tau=2, n=4 hits all 6 pairs uniformly") {
  SubsetSampler s(4, 2);
  SplitMix64 rng(777);
  std::map<std::pair<int, int>, int> counts;
  std::vector<int> out;
  const int draws = 600000;
  for (int d = 0; d < draws; ++d) {
    s.draw(rng, out);
    counts[{out[0], out[1]}]++;
  }
  REQUIRE(counts.size() == 6);
  const double expect = draws / 6.0;
  const double sigma = std::sqrt(draws * (1.0 / 6.0) * (5.0 / 6.0));
  for (const auto& [pair, c] : counts) CHECK(std::abs(c - expect) < 5.0 * sigma);
}

TEST_CASE("gaussian pair is deterministic and roughly standard") {
  SplitMix64 rng(2024);
  double mean = 0.0, var = 0.0;
  const int pairs = 50000;
  for (int i = 0; i < pairs; ++i) {
    double g0, g1;
    gaussian_pair(rng, g0, g1);
    mean += g0 + g1;
    var += g0 * g0 + g1 * g1;
  }
  mean /= 2 * pairs;
  var /= 2 * pairs;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}
