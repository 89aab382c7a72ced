#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rapcd/dataset.hpp"

namespace rapcd {

// Incrementally maintained image of a point under the problem's linear map
// (A x for regression models, Q x for quadratics).  `t` and `vsum` carry the
// implicit-centering scalars <col_offset, x> and sum_j v[j]; they are only
// maintained when the problem has column offsets.
struct LinCache {
  std::vector<double> v;
  double t = 0.0;
  double vsum = 0.0;
  bool affine = false;  // constant term (e.g. -b) folded into v
};

// Per-coordinate curvature weights certified by the expected separable
// overapproximation for tau-nice sampling.  For tau = 1 these are the
// coordinate-wise Lipschitz constants of grad f.
struct EsoVector {
  std::vector<double> v;
  int tau = 1;
};

enum class MuProvenance { Exact, UserSupplied, Unknown };

// Quadratic-growth constant in the ||.||_v geometry:
//   F(x) >= F* + (mu_v / 2) dist_v(x, X*)^2   on the relevant sublevel set.
struct ErrorBoundEstimate {
  double mu_v = 0.0;
  MuProvenance provenance = MuProvenance::Unknown;
};

// Conversion range between the unweighted constant mu(x0) and mu(v, x0):
//   min_i mu/v_i <= mu(v, x0) <= max_i mu/v_i.
std::pair<double, double> mu_v_range(double mu_unweighted, const EsoVector& v);

// Composite objective F = f + psi with differentiable convex f and separable
// closed convex psi.  Implementations are immutable after construction and
// safely shareable across concurrent solver runs.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual int dim() const = 0;      // n
  virtual int samples() const = 0;  // m (0 for purely synthetic quadratics)
  virtual std::string name() const = 0;

  // Objective pieces; F_value(x) = f_value(x) + psi_value(x) with a fixed
  // summation order.  Non-finite components of x are rejected.
  virtual double f_value(std::span<const double> x) const = 0;
  virtual double psi_value(std::span<const double> x) const = 0;
  double F_value(std::span<const double> x) const { return f_value(x) + psi_value(x); }

  // --- engine surface -------------------------------------------------
  virtual int cache_rows() const = 0;
  virtual void build_cache(std::span<const double> x, bool affine, LinCache& c) const = 0;
  virtual void update_cache(int i, double delta, LinCache& c) const = 0;

  // grad_i f at the point whose cache decomposes as a * cu + cz; pass
  // a = 0, cu = nullptr to query at the point cached by cz alone.
  virtual double partial_grad(int i, double a, const LinCache* cu,
                              const LinCache& cz) const = 0;

  // argmin_z { (w/2)(z - point)^2 + psi^i(z) }, i.e. the prox of psi^i at
  // `point` with weight w.  The engine supplies point = z0 - g/w.
  virtual double prox_coord(int i, double point, double weight) const = 0;

  virtual EsoVector eso_vector(int tau) const = 0;

  // P(x) - D(u(x)) for a constructed dual-feasible u; an upper bound on
  // F(x) - F*, used as the stopping criterion.
  virtual double duality_gap(std::span<const double> x) const = 0;

  virtual long long col_nnz(int i) const = 0;
  virtual long long nnz() const = 0;

 protected:
  static void require_finite(std::span<const double> x);
  static double soft_threshold(double u, double thr);
};

// Lasso:  F(x) = 1/2 ||A x - b||^2 + lambda ||x||_1.
class LassoProblem : public Problem {
 public:
  LassoProblem(Dataset data, double lambda);

  int dim() const override { return data_.cols(); }
  int samples() const override { return data_.rows(); }
  std::string name() const override { return "lasso"; }
  double lambda() const { return lambda_; }
  const Dataset& data() const { return data_; }

  double f_value(std::span<const double> x) const override;
  double psi_value(std::span<const double> x) const override;
  int cache_rows() const override { return data_.rows(); }
  void build_cache(std::span<const double> x, bool affine, LinCache& c) const override;
  void update_cache(int i, double delta, LinCache& c) const override;
  double partial_grad(int i, double a, const LinCache* cu,
                      const LinCache& cz) const override;
  double prox_coord(int i, double point, double weight) const override;
  EsoVector eso_vector(int tau) const override;
  double duality_gap(std::span<const double> x) const override;
  long long col_nnz(int i) const override { return data_.matrix.col_nnz(i); }
  long long nnz() const override { return data_.matrix.nnz(); }

  // max_i |A_eff^T b|_i, the smallest lambda for which x = 0 is optimal.
  double lambda_max() const;

 private:
  void residual(std::span<const double> x, std::vector<double>& r) const;

  Dataset data_;
  double lambda_;
  std::vector<double> col_sums_;  // for centered partial gradients
};

// L1-regularized logistic regression:
//   F(x) = c * sum_j log(1 + exp(b_j a_j^T x)) + ||x||_1,  c = lambda1 / ||A^T b||_inf.
// Labels must be in {-1, +1}; {0, 1} labels are remapped at construction.
// Centered datasets are rejected: the sigmoid breaks the rank-one correction
// that keeps partial gradients O(column nnz).
class LogRegProblem : public Problem {
 public:
  LogRegProblem(Dataset data, double lambda1);

  int dim() const override { return data_.cols(); }
  int samples() const override { return data_.rows(); }
  std::string name() const override { return "logreg"; }
  double scale() const { return scale_; }  // c above

  double f_value(std::span<const double> x) const override;
  double psi_value(std::span<const double> x) const override;
  int cache_rows() const override { return data_.rows(); }
  void build_cache(std::span<const double> x, bool affine, LinCache& c) const override;
  void update_cache(int i, double delta, LinCache& c) const override;
  double partial_grad(int i, double a, const LinCache* cu,
                      const LinCache& cz) const override;
  double prox_coord(int i, double point, double weight) const override;
  EsoVector eso_vector(int tau) const override;
  double duality_gap(std::span<const double> x) const override;
  long long col_nnz(int i) const override { return data_.matrix.col_nnz(i); }
  long long nnz() const override { return data_.matrix.nnz(); }

 private:
  Dataset data_;
  double lambda1_;
  double scale_;
};

// Synthetic strongly convex test case:
//   F(x) = 1/2 (x - x*)^T Q (x - x*) + l1 ||x||_1,  Q symmetric positive definite.
// With l1 = 0 the optimum is x* and F* = 0 exactly, which the rate and
// restart tests rely on.
class QuadraticProblem : public Problem {
 public:
  // q is row-major n x n and must be symmetric.
  QuadraticProblem(std::vector<double> q, std::vector<double> x_star, double l1 = 0.0);

  // Q = (1 - rho) I + rho 1 1^T with rho = 1 - mu: unit diagonal, smallest
  // eigenvalue exactly mu, so mu_v = mu for the tau=1 ESO weights.
  static QuadraticProblem equicorrelation(int n, double mu,
                                          std::vector<double> x_star);

  int dim() const override { return n_; }
  int samples() const override { return 0; }
  std::string name() const override { return "quadratic"; }
  const std::vector<double>& x_star() const { return x_star_; }
  double l1() const { return l1_; }
  double q(int r, int c) const { return q_[static_cast<std::size_t>(r) * n_ + c]; }

  double f_value(std::span<const double> x) const override;
  double psi_value(std::span<const double> x) const override;
  int cache_rows() const override { return n_; }
  void build_cache(std::span<const double> x, bool affine, LinCache& c) const override;
  void update_cache(int i, double delta, LinCache& c) const override;
  double partial_grad(int i, double a, const LinCache* cu,
                      const LinCache& cz) const override;
  double prox_coord(int i, double point, double weight) const override;
  EsoVector eso_vector(int tau) const override;
  // Defined for l1 = 0 only (F* = 0 at x*): returns F(x) - F* exactly.
  double duality_gap(std::span<const double> x) const override;
  long long col_nnz(int) const override { return n_; }
  long long nnz() const override { return static_cast<long long>(n_) * n_; }

 private:
  int n_;
  std::vector<double> q_;  // row-major
  std::vector<double> x_star_;
  double l1_;
};

// Largest mu satisfying F(x) >= F* + (mu/2)||x - x*||_v^2 for a psi = 0
// quadratic: the smallest eigenvalue of diag(v)^{-1/2} Q diag(v)^{-1/2}.
// Throws if Q is not positive definite.
ErrorBoundEstimate exact_mu_v(const QuadraticProblem& p, const EsoVector& v);

// Eigenvalues of a symmetric matrix (row-major n x n) by cyclic Jacobi
// rotations, ascending.  Small dense matrices only.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

// ||x - y||_v^2 = sum_i v_i (x_i - y_i)^2.
double dist_v_sq(std::span<const double> x, std::span<const double> y,
                 std::span<const double> v);

}  // namespace rapcd
