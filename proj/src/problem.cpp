#include "rapcd/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rapcd/kernels.hpp"

namespace rapcd {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double log1pexp(double s) {
  if (s > 0.0) return s + std::log1p(std::exp(-s));
  return std::log1p(std::exp(s));
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double tau_nice_factor(int tau, int omega, int n) {
  return 1.0 + static_cast<double>(tau - 1) * static_cast<double>(omega - 1) /
                   static_cast<double>(std::max(n - 1, 1));
}

void check_tau(int tau, int n) {
  if (tau < 1 || tau > n)
    throw std::invalid_argument("eso_vector: need 1 <= tau <= n");
}

void reject_zero_curvature(const std::vector<double>& v) {
  std::string bad;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > 0.0)) bad += " " + std::to_string(i);
  if (!bad.empty())
    throw std::invalid_argument(
        "eso_vector: zero columns (no curvature) at indices:" + bad +
        "; remove them first (see drop_zero_columns)");
}

}  // namespace

void Problem::require_finite(std::span<const double> x) {
  for (double xi : x)
    if (!std::isfinite(xi))
      throw std::invalid_argument("non-finite input component");
}

double Problem::soft_threshold(double u, double thr) {
  const double a = std::abs(u) - thr;
  return a <= 0.0 ? 0.0 : std::copysign(a, u);
}

std::pair<double, double> mu_v_range(double mu_unweighted, const EsoVector& v) {
  double vmin = v.v[0], vmax = v.v[0];
  for (double vi : v.v) {
    vmin = std::min(vmin, vi);
    vmax = std::max(vmax, vi);
  }
  return {mu_unweighted / vmax, mu_unweighted / vmin};
}

double dist_v_sq(std::span<const double> x, std::span<const double> y,
                 std::span<const double> v) {
  kernels::CompensatedSum s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s.add(v[i] * d * d);
  }
  return s.value();
}

// ---------------------------------------------------------------------------
// Lasso
// ---------------------------------------------------------------------------

LassoProblem::LassoProblem(Dataset data, double lambda)
    : data_(std::move(data)), lambda_(lambda) {
  if (lambda_ < 0.0) throw std::invalid_argument("LassoProblem: lambda must be >= 0");
  if (data_.centered) col_sums_ = data_.matrix.col_sums();
}

void LassoProblem::residual(std::span<const double> x, std::vector<double>& r) const {
  r.assign(data_.rows(), 0.0);
  data_.multiply(x, r);
  for (int j = 0; j < data_.rows(); ++j) r[j] -= data_.labels[j];
}

double LassoProblem::f_value(std::span<const double> x) const {
  require_finite(x);
  std::vector<double> r;
  residual(x, r);
  kernels::CompensatedSum s;
  for (double rj : r) s.add(rj * rj);
  return 0.5 * s.value();
}

double LassoProblem::psi_value(std::span<const double> x) const {
  require_finite(x);
  kernels::CompensatedSum s;
  for (double xi : x) s.add(std::abs(xi));
  return lambda_ * s.value();
}

void LassoProblem::build_cache(std::span<const double> x, bool affine,
                               LinCache& c) const {
  c.v.assign(data_.rows(), 0.0);
  data_.matrix.multiply(x, c.v);
  c.affine = affine;
  if (affine)
    for (int j = 0; j < data_.rows(); ++j) c.v[j] -= data_.labels[j];
  c.t = 0.0;
  c.vsum = 0.0;
  if (data_.centered) {
    kernels::CompensatedSum t, vs;
    for (int i = 0; i < data_.cols(); ++i) t.add(data_.col_offset[i] * x[i]);
    for (double vj : c.v) vs.add(vj);
    c.t = t.value();
    c.vsum = vs.value();
  }
}

void LassoProblem::update_cache(int i, double delta, LinCache& c) const {
  data_.matrix.col_axpy(i, delta, c.v);
  if (data_.centered) {
    c.t += delta * data_.col_offset[i];
    c.vsum += delta * col_sums_[i];
  }
}

double LassoProblem::partial_grad(int i, double a, const LinCache* cu,
                                  const LinCache& cz) const {
  const auto& cp = data_.matrix.col_ptr();
  const auto& ri = data_.matrix.row_ind();
  const auto& va = data_.matrix.values();
  double acc = 0.0;
  if (a != 0.0) {
    for (long long k = cp[i]; k < cp[i + 1]; ++k) {
      const int r = ri[k];
      acc += va[k] * (a * cu->v[r] + cz.v[r]);
    }
  } else {
    for (long long k = cp[i]; k < cp[i + 1]; ++k) acc += va[k] * cz.v[ri[k]];
  }
  if (!data_.centered) return acc;
  const double shift = (a != 0.0 ? a * cu->t : 0.0) + cz.t;
  const double rsum =
      (a != 0.0 ? a * cu->vsum : 0.0) + cz.vsum - data_.rows() * shift;
  return acc - shift * col_sums_[i] - data_.col_offset[i] * rsum;
}

double LassoProblem::prox_coord(int, double point, double weight) const {
  if (!(weight > 0.0)) throw std::invalid_argument("prox_coord: weight must be > 0");
  return soft_threshold(point, lambda_ / weight);
}

EsoVector LassoProblem::eso_vector(int tau) const {
  const int n = dim();
  check_tau(tau, n);
  EsoVector out;
  out.tau = tau;
  out.v = data_.matrix.col_sq_norms();
  if (data_.centered) {
    const int m = data_.rows();
    for (int i = 0; i < n; ++i) {
      const double mu = data_.col_offset[i];
      out.v[i] += -2.0 * mu * col_sums_[i] + m * mu * mu;
    }
  }
  reject_zero_curvature(out.v);
  if (tau > 1) {
    // Centered columns act densely on every row.
    const int omega = data_.centered ? n : data_.matrix.max_row_nnz();
    const double factor = tau_nice_factor(tau, omega, n);
    for (double& vi : out.v) vi *= factor;
  }
  return out;
}

double LassoProblem::duality_gap(std::span<const double> x) const {
  require_finite(x);
  std::vector<double> r;
  residual(x, r);
  std::vector<double> w(data_.cols(), 0.0);
  data_.multiply_transpose(r, w);
  const double wmax = kernels::max_abs(w);
  const double s = (wmax <= lambda_) ? 1.0 : lambda_ / wmax;

  kernels::CompensatedSum rsq, br;
  for (int j = 0; j < data_.rows(); ++j) {
    rsq.add(r[j] * r[j]);
    br.add(data_.labels[j] * r[j]);
  }
  const double primal = 0.5 * rsq.value() + psi_value(x);
  const double dual = -0.5 * s * s * rsq.value() - s * br.value();
  return std::max(primal - dual, 0.0);
}

double LassoProblem::lambda_max() const {
  std::vector<double> w(data_.cols(), 0.0);
  data_.multiply_transpose(data_.labels, w);
  return kernels::max_abs(w);
}

// ---------------------------------------------------------------------------
// Logistic regression
// ---------------------------------------------------------------------------

LogRegProblem::LogRegProblem(Dataset data, double lambda1)
    : data_(std::move(data)), lambda1_(lambda1) {
  if (!(lambda1_ > 0.0))
    throw std::invalid_argument("LogRegProblem: lambda1 must be > 0");
  if (data_.centered)
    throw std::invalid_argument(
        "LogRegProblem: centered datasets are not supported (partial "
        "gradients would no longer cost O(column nnz)); normalize without "
        "centering instead");
  bool zero_one = true, pm_one = true;
  for (double l : data_.labels) {
    if (l != 0.0 && l != 1.0) zero_one = false;
    if (l != -1.0 && l != 1.0) pm_one = false;
  }
  if (!pm_one) {
    if (!zero_one)
      throw std::invalid_argument("LogRegProblem: labels must be in {-1, +1} or {0, 1}");
    for (double& l : data_.labels) l = (l == 0.0) ? -1.0 : 1.0;
  }
  std::vector<double> w(data_.cols(), 0.0);
  data_.multiply_transpose(data_.labels, w);
  const double atb = kernels::max_abs(w);
  if (!(atb > 0.0))
    throw std::invalid_argument("LogRegProblem: ||A^T b||_inf is zero");
  scale_ = lambda1_ / atb;
}

double LogRegProblem::f_value(std::span<const double> x) const {
  require_finite(x);
  std::vector<double> t(data_.rows(), 0.0);
  data_.multiply(x, t);
  kernels::CompensatedSum s;
  for (int j = 0; j < data_.rows(); ++j) s.add(log1pexp(data_.labels[j] * t[j]));
  return scale_ * s.value();
}

double LogRegProblem::psi_value(std::span<const double> x) const {
  require_finite(x);
  kernels::CompensatedSum s;
  for (double xi : x) s.add(std::abs(xi));
  return s.value();
}

void LogRegProblem::build_cache(std::span<const double> x, bool affine,
                                LinCache& c) const {
  c.v.assign(data_.rows(), 0.0);
  data_.matrix.multiply(x, c.v);
  c.affine = affine;  // no constant term for logistic margins
  c.t = 0.0;
  c.vsum = 0.0;
}

void LogRegProblem::update_cache(int i, double delta, LinCache& c) const {
  data_.matrix.col_axpy(i, delta, c.v);
}

double LogRegProblem::partial_grad(int i, double a, const LinCache* cu,
                                   const LinCache& cz) const {
  const auto& cp = data_.matrix.col_ptr();
  const auto& ri = data_.matrix.row_ind();
  const auto& va = data_.matrix.values();
  double acc = 0.0;
  for (long long k = cp[i]; k < cp[i + 1]; ++k) {
    const int r = ri[k];
    const double margin = (a != 0.0 ? a * cu->v[r] : 0.0) + cz.v[r];
    const double bj = data_.labels[r];
    acc += va[k] * bj * sigmoid(bj * margin);
  }
  return scale_ * acc;
}

double LogRegProblem::prox_coord(int, double point, double weight) const {
  if (!(weight > 0.0)) throw std::invalid_argument("prox_coord: weight must be > 0");
  return soft_threshold(point, 1.0 / weight);
}

EsoVector LogRegProblem::eso_vector(int tau) const {
  const int n = dim();
  check_tau(tau, n);
  const auto& cp = data_.matrix.col_ptr();
  const auto& ri = data_.matrix.row_ind();
  const auto& va = data_.matrix.values();
  EsoVector out;
  out.tau = tau;
  out.v.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long long k = cp[i]; k < cp[i + 1]; ++k) {
      const double t = data_.labels[ri[k]] * va[k];
      acc += t * t;
    }
    out.v[i] = 0.25 * scale_ * acc;
  }
  reject_zero_curvature(out.v);
  if (tau > 1) {
    const double factor = tau_nice_factor(tau, data_.matrix.max_row_nnz(), n);
    for (double& vi : out.v) vi *= factor;
  }
  return out;
}

double LogRegProblem::duality_gap(std::span<const double> x) const {
  require_finite(x);
  const int m = data_.rows();
  std::vector<double> t(m, 0.0);
  data_.multiply(x, t);
  std::vector<double> sig(m), u(m);
  for (int j = 0; j < m; ++j) {
    sig[j] = sigmoid(data_.labels[j] * t[j]);
    u[j] = scale_ * data_.labels[j] * sig[j];
  }
  std::vector<double> w(data_.cols(), 0.0);
  data_.multiply_transpose(u, w);
  const double wmax = kernels::max_abs(w);
  const double s = (wmax <= 1.0) ? 1.0 : 1.0 / wmax;

  // conjugate of log(1+e^t): l*(p) = p log p + (1-p) log(1-p) on [0,1]
  kernels::CompensatedSum primal, conj;
  for (int j = 0; j < m; ++j) {
    primal.add(log1pexp(data_.labels[j] * t[j]));
    const double p = s * sig[j];
    const double q = (s == 1.0) ? sigmoid(-data_.labels[j] * t[j]) : 1.0 - p;
    conj.add(xlogx(p) + xlogx(q));
  }
  const double gap = scale_ * primal.value() + psi_value(x) + scale_ * conj.value();
  return std::max(gap, 0.0);
}

// ---------------------------------------------------------------------------
// Quadratic
// ---------------------------------------------------------------------------

QuadraticProblem::QuadraticProblem(std::vector<double> q,
                                   std::vector<double> x_star, double l1)
    : n_(static_cast<int>(x_star.size())), q_(std::move(q)),
      x_star_(std::move(x_star)), l1_(l1) {
  if (q_.size() != static_cast<std::size_t>(n_) * n_)
    throw std::invalid_argument("QuadraticProblem: Q must be n x n");
  if (l1_ < 0.0) throw std::invalid_argument("QuadraticProblem: l1 must be >= 0");
  for (int r = 0; r < n_; ++r) {
    if (!(this->q(r, r) > 0.0))
      throw std::invalid_argument("QuadraticProblem: diagonal must be positive");
    for (int c = r + 1; c < n_; ++c) {
      const double a = this->q(r, c), b = this->q(c, r);
      if (std::abs(a - b) > 1e-12 * (std::abs(a) + std::abs(b) + 1.0))
        throw std::invalid_argument("QuadraticProblem: Q must be symmetric");
    }
  }
}

QuadraticProblem QuadraticProblem::equicorrelation(int n, double mu,
                                                   std::vector<double> x_star) {
  if (!(mu > 0.0) || mu > 1.0)
    throw std::invalid_argument("equicorrelation: mu must lie in (0, 1]");
  const double rho = 1.0 - mu;
  std::vector<double> q(static_cast<std::size_t>(n) * n, rho);
  for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) * n + i] = 1.0;
  return QuadraticProblem(std::move(q), std::move(x_star), 0.0);
}

double QuadraticProblem::f_value(std::span<const double> x) const {
  require_finite(x);
  std::vector<double> d(n_), qd(n_);
  for (int i = 0; i < n_; ++i) d[i] = x[i] - x_star_[i];
  kernels::dense_symv(q_, n_, d, qd);
  kernels::CompensatedSum s;
  for (int i = 0; i < n_; ++i) s.add(d[i] * qd[i]);
  return 0.5 * s.value();
}

double QuadraticProblem::psi_value(std::span<const double> x) const {
  require_finite(x);
  if (l1_ == 0.0) return 0.0;
  kernels::CompensatedSum s;
  for (double xi : x) s.add(std::abs(xi));
  return l1_ * s.value();
}

void QuadraticProblem::build_cache(std::span<const double> x, bool affine,
                                   LinCache& c) const {
  c.v.assign(n_, 0.0);
  c.affine = affine;
  if (affine) {
    std::vector<double> d(n_);
    for (int i = 0; i < n_; ++i) d[i] = x[i] - x_star_[i];
    kernels::dense_symv(q_, n_, d, c.v);
  } else {
    kernels::dense_symv(q_, n_, x, c.v);
  }
  c.t = 0.0;
  c.vsum = 0.0;
}

void QuadraticProblem::update_cache(int i, double delta, LinCache& c) const {
  const double* col = q_.data() + static_cast<std::size_t>(i) * n_;  // row i = col i
  for (int r = 0; r < n_; ++r) c.v[r] += delta * col[r];
}

double QuadraticProblem::partial_grad(int i, double a, const LinCache* cu,
                                      const LinCache& cz) const {
  return (a != 0.0 ? a * cu->v[i] : 0.0) + cz.v[i];
}

double QuadraticProblem::prox_coord(int, double point, double weight) const {
  if (!(weight > 0.0)) throw std::invalid_argument("prox_coord: weight must be > 0");
  if (l1_ == 0.0) return point;
  return soft_threshold(point, l1_ / weight);
}

EsoVector QuadraticProblem::eso_vector(int tau) const {
  check_tau(tau, n_);
  EsoVector out;
  out.tau = tau;
  out.v.resize(n_);
  for (int i = 0; i < n_; ++i) out.v[i] = q(i, i);
  if (tau > 1) {
    const double factor = tau_nice_factor(tau, n_, n_);  // dense rows
    for (double& vi : out.v) vi *= factor;
  }
  return out;
}

double QuadraticProblem::duality_gap(std::span<const double> x) const {
  if (l1_ != 0.0)
    throw std::logic_error(
        "QuadraticProblem::duality_gap: only defined for psi = 0 (F* known)");
  return f_value(x);
}

// ---------------------------------------------------------------------------
// Eigenvalues / exact error bound
// ---------------------------------------------------------------------------

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
  auto at = [&](int r, int c) -> double& {
    return a[static_cast<std::size_t>(r) * n + c];
  };
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) off += at(r, c) * at(r, c);
    if (off < 1e-28 * std::max(1.0, n * n * 1.0)) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p), aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

ErrorBoundEstimate exact_mu_v(const QuadraticProblem& p, const EsoVector& v) {
  const int n = p.dim();
  if (p.l1() != 0.0)
    throw std::invalid_argument("exact_mu_v: requires psi = 0");
  if (static_cast<int>(v.v.size()) != n)
    throw std::invalid_argument("exact_mu_v: dimension mismatch");
  std::vector<double> scaled(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      scaled[static_cast<std::size_t>(r) * n + c] =
          p.q(r, c) / std::sqrt(v.v[r] * v.v[c]);
  const auto ev = symmetric_eigenvalues(std::move(scaled), n);
  if (!(ev.front() > 0.0))
    throw std::invalid_argument("exact_mu_v: Q is not positive definite");
  return {ev.front(), MuProvenance::Exact};
}

}  // namespace rapcd
