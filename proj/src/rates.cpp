#include "rapcd/rates.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "rapcd/theta.hpp"

namespace rapcd {

namespace {

void check_query(const RateQuery& q) {
  if (!(q.theta0 > 0.0) || !(q.theta0 < 1.0))
    throw std::invalid_argument("rates: theta0 must lie strictly in (0, 1)");
  if (!(q.mu > 0.0)) throw std::invalid_argument("rates: mu must be > 0");
  if (q.K < 1) throw std::invalid_argument("rates: K must be >= 1");
}

double sigma_interior(double theta0, double mu, double th_k, double th_km1) {
  return (1.0 - (th_k / th_km1) * ((1.0 - theta0) / (1.0 - th_k))) /
         (1.0 + th_km1 / (theta0 * mu));
}

double sigma_terminal(double theta0, double mu, double th_Km1) {
  return (1.0 - (th_Km1 / theta0) * (1.0 - theta0)) /
         (1.0 + th_Km1 / (theta0 * mu));
}

}  // namespace

std::vector<double> sigma_sequence(const RateQuery& q) {
  check_query(q);
  ThetaSequence theta(q.theta0);
  std::vector<double> out(static_cast<std::size_t>(q.K));
  for (long long k = 1; k < q.K; ++k)
    out[k - 1] = sigma_interior(q.theta0, q.mu, theta.at(k), theta.at(k - 1));
  out[q.K - 1] = sigma_terminal(q.theta0, q.mu, theta.at(q.K - 1));
  return out;
}

double rho_exact(const RateQuery& q) {
  check_query(q);
  ThetaSequence theta(q.theta0);
  const std::vector<double> sig = sigma_sequence(q);
  const double tm1_sq = theta.theta_minus1_sq();
  const long long K = q.K;

  if (K <= 10000) {
    // Suffix products P_l = prod_{j=l+1..K} (1 - sigma_j).
    std::vector<double> suffix(static_cast<std::size_t>(K) + 1);
    suffix[K] = 1.0;
    for (long long l = K - 1; l >= 0; --l)
      suffix[l] = suffix[l + 1] * (1.0 - sig[l]);
    double total = suffix[0];
    for (long long l = 0; l < K; ++l)
      total += tm1_sq / theta.at(l) * suffix[l];
    const double thK = theta.at(K - 1);
    return thK * thK / tm1_sq * total;
  }

  // Log-space suffix sums for very long horizons.
  std::vector<double> logsuf(static_cast<std::size_t>(K) + 1);
  logsuf[K] = 0.0;
  for (long long l = K - 1; l >= 0; --l)
    logsuf[l] = logsuf[l + 1] + std::log1p(-sig[l]);
  double max_term = logsuf[0];
  for (long long l = 0; l < K; ++l)
    max_term = std::max(max_term, std::log(tm1_sq / theta.at(l)) + logsuf[l]);
  double acc = std::exp(logsuf[0] - max_term);
  for (long long l = 0; l < K; ++l)
    acc += std::exp(std::log(tm1_sq / theta.at(l)) + logsuf[l] - max_term);
  const double thK = theta.at(K - 1);
  return thK * thK / tm1_sq * std::exp(max_term) * acc;
}

std::vector<double> rho_exact_sweep(double theta0, double mu, long long k_max) {
  RateQuery probe{theta0, mu, 1};
  check_query(probe);
  if (k_max < 1) throw std::invalid_argument("rho_exact_sweep: k_max must be >= 1");
  ThetaSequence theta(theta0);
  const double tm1_sq = theta0 * theta0 / (1.0 - theta0);

  // The interior sigmas do not depend on K and the terminal factor
  // (1 - sigma^K_K) multiplies every term, so the whole sweep advances in
  // O(1) per K:
  //   A_K = prod_{l=1..K-1} (1 - sigma_l),
  //   B_K = sum_{l=0..K-1} theta_{-1}^2/theta_l prod_{j=l+1..K-1} (1 - sigma_j),
  //   rho_K = theta_{K-1}^2/theta_{-1}^2 (1 - sigma^K_K)(A_K + B_K).
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
  double A = 1.0, B = 0.0;
  for (long long K = 1; K <= k_max; ++K) {
    const double th_Km1 = theta.at(K - 1);
    B += tm1_sq / th_Km1;
    const double sK = sigma_terminal(theta0, mu, th_Km1);
    out[K] = th_Km1 * th_Km1 / tm1_sq * (1.0 - sK) * (A + B);
    const double th_K = theta.at(K);
    const double sig = sigma_interior(theta0, mu, th_K, th_Km1);
    A *= (1.0 - sig);
    B *= (1.0 - sig);
  }
  return out;
}

double rho_bound(const RateQuery& q) {
  if (!(q.theta0 > 0.0) || q.theta0 > 1.0)
    throw std::invalid_argument("rho_bound: theta0 must lie in (0, 1]");
  if (!(q.mu > 0.0)) throw std::invalid_argument("rho_bound: mu must be > 0");
  if (q.K < 1) throw std::invalid_argument("rho_bound: K must be >= 1");
  ThetaSequence theta(q.theta0);
  const double thK = theta.at(q.K - 1);
  return (1.0 + (1.0 - q.theta0) * q.mu) /
         (1.0 + q.theta0 * q.theta0 / (2.0 * thK * thK) * q.mu);
}

CdRateModel default_cd_rate_model() {
  return [](double theta0, double mu) { return 1.0 - theta0 * mu / (1.0 + mu); };
}

PerIterRates per_iter_rates(const RateQuery& q, const CdRateModel& cd_model) {
  check_query(q);
  const CdRateModel cd = cd_model ? cd_model : default_cd_rate_model();
  PerIterRates out;
  const double invK = 1.0 / static_cast<double>(q.K);
  out.approx_bound = std::pow(rho_bound(q), invK);
  out.approx_exact = std::pow(rho_exact(q), invK);
  out.cd = cd(q.theta0, q.mu);
  return out;
}

std::vector<Figure1Row> figure1_table(double mu, int n, int tau,
                                      const std::vector<long long>& k_grid,
                                      const CdRateModel& cd_model) {
  if (!(mu > 0.0)) throw std::invalid_argument("figure1_table: mu must be > 0");
  if (n <= 0 || tau < 1 || tau > n)
    throw std::invalid_argument("figure1_table: need 1 <= tau <= n");
  const double theta0 = static_cast<double>(tau) / n;
  if (theta0 >= 1.0)
    throw std::invalid_argument("figure1_table: tau = n is the deterministic regime");
  const CdRateModel cd = cd_model ? cd_model : default_cd_rate_model();

  long long k_max = 1;
  for (long long k : k_grid) {
    if (k < 1) throw std::invalid_argument("figure1_table: K values must be >= 1");
    k_max = std::max(k_max, k);
  }
  const std::vector<double> rho = rho_exact_sweep(theta0, mu, k_max);

  std::vector<Figure1Row> rows;
  rows.reserve(k_grid.size());
  const double cd_rate = cd(theta0, mu);
  for (long long k : k_grid) {
    RateQuery q{theta0, mu, k};
    const double invK = 1.0 / static_cast<double>(k);
    Figure1Row row;
    row.K = k;
    row.one_minus_rate_restart_bound = 1.0 - std::pow(rho_bound(q), invK);
    row.one_minus_rate_restart_exact = 1.0 - std::pow(rho[k], invK);
    row.one_minus_rate_cd = 1.0 - cd_rate;
    rows.push_back(row);
  }
  return rows;
}

void write_figure1_csv(const std::vector<Figure1Row>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "K,one_minus_rate_restart_bound,one_minus_rate_restart_exact,"
         "one_minus_rate_cd\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g\n", r.K,
                  r.one_minus_rate_restart_bound, r.one_minus_rate_restart_exact,
                  r.one_minus_rate_cd);
    out << buf;
  }
}

double delta_value(const Problem& p, const EsoVector& v, double theta0,
                   std::span<const double> x, double f_star,
                   std::span<const double> x_star) {
  if (!(theta0 > 0.0) || !(theta0 < 1.0))
    throw std::invalid_argument("delta_value: theta0 must lie strictly in (0, 1)");
  const double t2 = theta0 * theta0;
  return (1.0 - theta0) / t2 * (p.F_value(x) - f_star) +
         0.5 / t2 * dist_v_sq(x, x_star, v.v);
}

}  // namespace rapcd
