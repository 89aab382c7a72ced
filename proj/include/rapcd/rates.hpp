#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rapcd/problem.hpp"

namespace rapcd {

// Query for the strong-convexity contraction machinery.  theta0 must be
// strictly below 1 so that theta_{-1}^2 = theta0^2 / (1 - theta0) is finite.
struct RateQuery {
  double theta0 = 0.1;
  double mu = 1e-3;  // strong-convexity constant in the ||.||_v geometry
  long long K = 1;
};

// The multipliers sigma^K_1 .. sigma^K_K of the supermartingale construction:
//
//   sigma^K_k = (1 - (theta_k/theta_{k-1}) (1-theta0)/(1-theta_k))
//                 / (1 + theta_{k-1}/(theta0 mu)),            k < K
//   sigma^K_K = (1 - (theta_{K-1}/theta0)(1-theta0))
//                 / (1 + theta_{K-1}/(theta0 mu)).
//
// The interior elements (k < K) lie in [0, theta0]; the terminal element lies
// in [0, 1) and approaches 1 as K grows, so it is *not* bounded by theta0.
std::vector<double> sigma_sequence(const RateQuery& q);

// Exact one-round contraction factor of the Lyapunov value
//   Delta(x) = (1-theta0)/theta0^2 (F(x) - F*) + 1/(2 theta0^2) dist_v(x, X*)^2:
//
//   rho_K = theta_{K-1}^2/theta_{-1}^2 ( prod_{l=1..K} (1 - sigma^K_l)
//           + sum_{l=0..K-1} theta_{-1}^2/theta_l prod_{j=l+1..K} (1 - sigma^K_j) ).
//
// E[Delta(x_K)] <= rho_K Delta(x_0).  Products switch to log space for
// K > 10^4 to guard against underflow.
double rho_exact(const RateQuery& q);

// rho_exact for every K = 1..K_max at once in O(K_max) total; entry [K]
// holds rho_K and entry [0] is unused.
std::vector<double> rho_exact_sweep(double theta0, double mu, long long k_max);

// Simplified bound:  (1 + (1-theta0) mu) / (1 + theta0^2 mu / (2 theta_{K-1}^2)).
// A strict contraction iff 2 theta_{K-1}^2 < theta0^2/(1-theta0), which holds
// once K >= n/tau.
double rho_bound(const RateQuery& q);

// Per-iteration linear-rate model for the non-accelerated coordinate descent
// baseline.  The default is the standard strongly convex contraction
// 1 - theta0 mu / (1 + mu) in the ||.||_v geometry; it is pluggable so other
// models can be compared.
using CdRateModel = std::function<double(double theta0, double mu)>;
CdRateModel default_cd_rate_model();

struct PerIterRates {
  double approx_bound = 1.0;  // rho_bound^{1/K}
  double approx_exact = 1.0;  // rho_exact^{1/K}
  double cd = 1.0;
};

PerIterRates per_iter_rates(const RateQuery& q, const CdRateModel& cd_model = {});

struct Figure1Row {
  long long K = 0;
  double one_minus_rate_restart_bound = 0.0;
  double one_minus_rate_restart_exact = 0.0;
  double one_minus_rate_cd = 0.0;
};

// Rate-comparison table over a K grid (theta0 = tau/n); rejects mu <= 0.
std::vector<Figure1Row> figure1_table(double mu, int n, int tau,
                                      const std::vector<long long>& k_grid,
                                      const CdRateModel& cd_model = {});

// CSV with header K,one_minus_rate_restart_bound,one_minus_rate_restart_exact,
// one_minus_rate_cd.
void write_figure1_csv(const std::vector<Figure1Row>& rows, const std::string& path);

// Lyapunov value Delta(x) for a problem with unique known minimizer.
double delta_value(const Problem& p, const EsoVector& v, double theta0,
                   std::span<const double> x, double f_star,
                   std::span<const double> x_star);

}  // namespace rapcd
