// Test-only reference oracles, kept independent of the library's solver
// paths: everything here works on dense row-major arrays with plain loops.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rapcd/dataset.hpp"

namespace oracle {

struct DenseProblem {
  int m = 0, n = 0;
  std::vector<double> A;  // row-major m x n, centering applied explicitly
  std::vector<double> b;
};

inline DenseProblem densify(const rapcd::Dataset& d) {
  DenseProblem out;
  out.m = d.rows();
  out.n = d.cols();
  out.A.assign(static_cast<std::size_t>(out.m) * out.n, 0.0);
  const auto& cp = d.matrix.col_ptr();
  const auto& ri = d.matrix.row_ind();
  const auto& va = d.matrix.values();
  for (int c = 0; c < out.n; ++c)
    for (long long k = cp[c]; k < cp[c + 1]; ++k)
      out.A[static_cast<std::size_t>(ri[k]) * out.n + c] = va[k];
  if (d.centered)
    for (int r = 0; r < out.m; ++r)
      for (int c = 0; c < out.n; ++c)
        out.A[static_cast<std::size_t>(r) * out.n + c] -= d.col_offset[c];
  out.b = d.labels;
  return out;
}

inline std::vector<double> matvec(const DenseProblem& p, const std::vector<double>& x) {
  std::vector<double> y(p.m, 0.0);
  for (int r = 0; r < p.m; ++r)
    for (int c = 0; c < p.n; ++c)
      y[r] += p.A[static_cast<std::size_t>(r) * p.n + c] * x[c];
  return y;
}

inline std::vector<double> matvec_t(const DenseProblem& p, const std::vector<double>& r) {
  std::vector<double> y(p.n, 0.0);
  for (int row = 0; row < p.m; ++row)
    for (int c = 0; c < p.n; ++c)
      y[c] += p.A[static_cast<std::size_t>(row) * p.n + c] * r[row];
  return y;
}

// Largest eigenvalue of A^T A by power iteration (with a safety factor the
// callers apply themselves).
inline double lambda_max_ata(const DenseProblem& p, int iters = 200) {
  std::vector<double> v(p.n, 1.0);
  double lam = 1.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> w = matvec_t(p, matvec(p, v));
    double norm = 0.0;
    for (double wi : w) norm += wi * wi;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    lam = norm;
    for (int i = 0; i < p.n; ++i) v[i] = w[i] / norm;
  }
  return lam;
}

inline double soft(double u, double thr) {
  const double a = std::abs(u) - thr;
  return a <= 0.0 ? 0.0 : std::copysign(a, u);
}

inline double lasso_F(const DenseProblem& p, const std::vector<double>& x,
                      double lambda) {
  const std::vector<double> ax = matvec(p, x);
  double f = 0.0;
  for (int r = 0; r < p.m; ++r) {
    const double d = ax[r] - p.b[r];
    f += 0.5 * d * d;
  }
  for (double xi : x) f += lambda * std::abs(xi);
  return f;
}

// Proximal-gradient (ISTA) reference solve for the Lasso.
inline std::vector<double> ista_lasso(const DenseProblem& p, double lambda,
                                      long long iters) {
  const double L = lambda_max_ata(p) * 1.01;
  std::vector<double> x(p.n, 0.0);
  for (long long it = 0; it < iters; ++it) {
    std::vector<double> r = matvec(p, x);
    for (int j = 0; j < p.m; ++j) r[j] -= p.b[j];
    const std::vector<double> g = matvec_t(p, r);
    for (int i = 0; i < p.n; ++i) x[i] = soft(x[i] - g[i] / L, lambda / L);
  }
  return x;
}

inline double log1pexp(double s) {
  return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
}

inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

inline double logreg_F(const DenseProblem& p, const std::vector<double>& x,
                       double scale) {
  const std::vector<double> t = matvec(p, x);
  double f = 0.0;
  for (int j = 0; j < p.m; ++j) f += log1pexp(p.b[j] * t[j]);
  f *= scale;
  for (double xi : x) f += std::abs(xi);
  return f;
}

// Proximal-gradient reference solve for L1 logistic regression with
// objective scale * sum log(1+exp(b_j a_j^T x)) + ||x||_1.
inline std::vector<double> ista_logreg(const DenseProblem& p, double scale,
                                       long long iters) {
  const double L = 0.25 * scale * lambda_max_ata(p) * 1.01;
  std::vector<double> x(p.n, 0.0);
  std::vector<double> u(p.m);
  for (long long it = 0; it < iters; ++it) {
    const std::vector<double> t = matvec(p, x);
    for (int j = 0; j < p.m; ++j) u[j] = scale * p.b[j] * sigmoid(p.b[j] * t[j]);
    const std::vector<double> g = matvec_t(p, u);
    for (int i = 0; i < p.n; ++i) x[i] = soft(x[i] - g[i] / L, 1.0 / L);
  }
  return x;
}

}  // namespace oracle
