// Benchmark comparing the OpenMP kernels against their serial reference
// implementations, plus the production engine against the naive dense one.
// Every parallel kernel is also checked for bitwise agreement with its
// serial counterpart, since the deterministic-trace guarantee depends on it.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rapcd/dataset.hpp"
#include "rapcd/engine.hpp"
#include "rapcd/kernels.hpp"
#include "rapcd/problem.hpp"
#include "rapcd/reference.hpp"
#include "rapcd/rng.hpp"

namespace {

double time_median_ms(const std::function<void()>& fn, int reps = 7) {
  std::vector<double> times;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

void report(const char* name, double serial_ms, double parallel_ms, bool exact) {
  std::printf("%-28s %10.3f ms %10.3f ms %7.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms, exact ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; parallel kernels run serially\n");
#endif
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  const int n = 20000, m = 12000;
  rapcd::SynthLassoResult synth = rapcd::synth_lasso(n, m, 2e-3, 0.01, 42);
  const rapcd::SparseMatrixCsc& A = synth.dataset.matrix;

  std::vector<double> x(n);
  rapcd::SplitMix64 rng(7);
  for (double& xi : x) xi = rng.next_double() - 0.5;

  // A x: per-row gather.  SparseMatrixCsc::multiply uses the parallel kernel,
  // so the serial side runs the serial kernel on a CSR mirror rebuilt here.
  std::vector<double> y_serial(m), y_parallel(m);
  std::vector<long long> row_ptr(m + 1, 0);
  std::vector<int> col_ind(A.nnz());
  std::vector<double> rval(A.nnz());
  {
    const auto& cp = A.col_ptr();
    const auto& ri = A.row_ind();
    const auto& va = A.values();
    for (long long k = 0; k < A.nnz(); ++k) row_ptr[ri[k] + 1]++;
    for (int r = 0; r < m; ++r) row_ptr[r + 1] += row_ptr[r];
    std::vector<long long> next(row_ptr.begin(), row_ptr.end() - 1);
    for (int c = 0; c < n; ++c)
      for (long long k = cp[c]; k < cp[c + 1]; ++k) {
        const long long dst = next[ri[k]]++;
        col_ind[dst] = c;
        rval[dst] = va[k];
      }
  }
  const double spmv_serial = time_median_ms([&] {
    rapcd::kernels::serial_gather_rows(row_ptr, col_ind, rval, x, y_serial);
  });
  const double spmv_parallel = time_median_ms([&] {
    rapcd::kernels::gather_rows(row_ptr, col_ind, rval, x, y_parallel);
  });
  report("A*x (row gather)", spmv_serial, spmv_parallel,
         bitwise_equal(y_serial, y_parallel));

  // A^T r: per-column gather
  std::vector<double> r(m);
  for (double& ri : r) ri = rng.next_double() - 0.5;
  std::vector<double> w_serial(n), w_parallel(n);
  const double spmvt_serial = time_median_ms([&] {
    rapcd::kernels::serial_gather_rows(A.col_ptr(), A.row_ind(), A.values(), r,
                                       w_serial);
  });
  const double spmvt_parallel = time_median_ms([&] {
    rapcd::kernels::gather_rows(A.col_ptr(), A.row_ind(), A.values(), r, w_parallel);
  });
  report("A^T r (col gather)", spmvt_serial, spmvt_parallel,
         bitwise_equal(w_serial, w_parallel));

  // max-norm reduction
  double mx_serial = 0.0, mx_parallel = 0.0;
  const double max_serial_t =
      time_median_ms([&] { mx_serial = rapcd::kernels::serial_max_abs(w_serial); });
  const double max_parallel_t =
      time_median_ms([&] { mx_parallel = rapcd::kernels::max_abs(w_serial); });
  report("max |.| reduction", max_serial_t, max_parallel_t, mx_serial == mx_parallel);

  // batched partial gradients (the tau > 1 inner phase)
  rapcd::LassoProblem lasso(synth.dataset, 0.1);
  rapcd::LinCache cz;
  lasso.build_cache(x, true, cz);
  const int tau = 4096;
  std::vector<int> subset(tau);
  for (int t = 0; t < tau; ++t)
    subset[t] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  const int bs = static_cast<int>(subset.size());
  std::vector<double> g_serial(bs), g_parallel(bs);
  const double grad_serial = time_median_ms([&] {
    for (int t = 0; t < bs; ++t)
      g_serial[t] = lasso.partial_grad(subset[t], 0.0, nullptr, cz);
  });
  const double grad_parallel = time_median_ms([&] {
#pragma omp parallel for schedule(static)
    for (int t = 0; t < bs; ++t)
      g_parallel[t] = lasso.partial_grad(subset[t], 0.0, nullptr, cz);
  });
  report("batch partial gradients", grad_serial, grad_parallel,
         bitwise_equal(g_serial, g_parallel));

  // full engine vs naive dense reference on a small instance
  {
    rapcd::SynthLassoResult small = rapcd::synth_lasso(400, 300, 0.2, 0.01, 3);
    rapcd::LassoProblem p(small.dataset, 0.5);
    rapcd::EsoVector v = p.eso_vector(1);
    rapcd::SamplingConfig s{400, 1, 11};
    std::vector<double> x0(400, 0.0);
    const long long K = 20000;
    rapcd::EngineResult eff;
    const double eng_t = time_median_ms(
        [&] {
          rapcd::RunContext ctx;
          eff = rapcd::approx_run(p, v, x0, K, s, ctx);
        },
        3);
    rapcd::ReferenceResult ref;
    const double ref_t = time_median_ms(
        [&] { ref = rapcd::reference_approx_run(p, v, x0, K, s); }, 3);
    double dev = 0.0;
    for (int i = 0; i < 400; ++i) dev = std::max(dev, std::abs(eff.x[i] - ref.x[i]));
    std::printf("%-28s %10.3f ms %10.3f ms %7.2fx   max|dx|=%.2e\n",
                "engine vs naive reference", ref_t, eng_t, ref_t / eng_t, dev);
  }
  return 0;
}
