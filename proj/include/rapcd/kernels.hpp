#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace rapcd::kernels {

// Neumaier-compensated accumulator.  All scalar objective sums in the library
// go through this in a fixed left-to-right order, so a value computed from the
// same inputs is bit-identical from run to run and from thread count to
// thread count.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

// ---------------------------------------------------------------------------
// Parallel kernels.
//
// Only element-wise and per-row/per-column kernels are parallelized: each
// output element is produced by one thread with an unchanged inner summation
// order, so the parallel result is bit-identical to the serial one.  Scalar
// reductions stay serial and compensated.  The serial_* variants are the
// reference implementations the benchmark compares against.
// ---------------------------------------------------------------------------

// y[r] = sum over the r-th row segment [ptr[r], ptr[r+1]) of val[k] * x[ind[k]].
void gather_rows(std::span<const long long> ptr, std::span<const int> ind,
                 std::span<const double> val, std::span<const double> x,
                 std::span<double> y);
void serial_gather_rows(std::span<const long long> ptr, std::span<const int> ind,
                        std::span<const double> val, std::span<const double> x,
                        std::span<double> y);

// out[c] = sum over column segment of val[k]^2 (per-column squared norms).
void column_sq_norms(std::span<const long long> ptr, std::span<const double> val,
                     std::span<double> out);

// out[c] = sum over column segment of val[k].
void column_sums(std::span<const long long> ptr, std::span<const double> val,
                 std::span<double> out);

// max_i |x[i]| (max is exact, so a parallel reduction is still deterministic).
double max_abs(std::span<const double> x);
double serial_max_abs(std::span<const double> x);

// Dense symmetric matvec y = M x, M row-major n x n, parallel over rows.
void dense_symv(std::span<const double> m, int n, std::span<const double> x,
                std::span<double> y);

}  // namespace rapcd::kernels
