#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rapcd/theta.hpp"

using namespace rapcd;

TEST_CASE("theta0 = tau/n") {
  CHECK(ThetaSequence(1, 10).theta0() == 0.1);
  CHECK(ThetaSequence(10, 10).theta0() == 1.0);
  CHECK(ThetaSequence(2, 8).theta0() == 0.25);
  CHECK_THROWS_AS(ThetaSequence(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(ThetaSequence(11, 10), std::invalid_argument);
}

TEST_CASE("recurrence values") {
  ThetaSequence full(1.0);
  CHECK(full.at(0) == 1.0);
  CHECK(full.at(1) == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-15));

  ThetaSequence half(0.5);
  // (sqrt(0.0625 + 1) - 0.25) / 2
  CHECK(half.at(1) == doctest::Approx(0.3903882032022076).epsilon(1e-14));
}

TEST_CASE("theta_at is idempotent and bit-identical") {
  ThetaSequence seq(1, 10);
  const double a = seq.at(57);
  const double b = seq.at(57);
  CHECK(a == b);
  ThetaSequence seq2(1, 10);
  CHECK(seq2.at(57) == a);
}

TEST_CASE("analytic bounds") {
  auto [lo0, up0] = ThetaSequence::bounds(0.1, 0);
  CHECK(lo0 == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(up0 == doctest::Approx(0.1).epsilon(1e-15));

  auto [lo1, up1] = ThetaSequence::bounds(1.0, 1);
  CHECK(lo1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(up1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  auto [lo2, up2] = ThetaSequence::bounds(0.1, 100);
  CHECK(lo2 == doctest::Approx(1.9 / 119.0).epsilon(1e-15));
  CHECK(up2 == doctest::Approx(2.0 / 120.0).epsilon(1e-15));
}

TEST_CASE("recurrence residual and sandwich bounds hold over a medium horizon") {
  // The full 1e5 horizon runs in the acceptance suite; this keeps the unit
  // suite fast while covering the same checks.
  for (double t0 : {1.0, 0.5, 0.1, 1e-3}) {
    ThetaSequence seq(t0);
    double prev = seq.at(0);
    for (std::size_t k = 0; k + 1 <= 5000; ++k) {
      const double next = seq.at(k + 1);
      const double lhs = (1.0 - next) / (next * next);
      const double rhs = 1.0 / (prev * prev);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
      CHECK(next < prev);  // strictly decreasing, also from theta0 = 1
      const auto [lo, up] = ThetaSequence::bounds(t0, k + 1);
      CHECK(next >= lo * (1.0 - 1e-12));
      CHECK(next <= up * (1.0 + 1e-12));
      prev = next;
    }
  }
}

TEST_CASE("theta_{-1}^2 accessor") {
  ThetaSequence seq(0.2);
  CHECK(seq.theta_minus1_sq() == doctest::Approx(0.04 / 0.8).epsilon(1e-15));
  ThetaSequence full(1.0);
  CHECK_THROWS_AS(full.theta_minus1_sq(), std::domain_error);
}
