#include "rapcd/dataset.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rapcd/kernels.hpp"
#include "rapcd/rng.hpp"

namespace rapcd {

void Dataset::multiply(std::span<const double> x, std::span<double> y) const {
  matrix.multiply(x, y);
  if (centered) {
    kernels::CompensatedSum t;
    for (int i = 0; i < cols(); ++i) t.add(col_offset[i] * x[i]);
    const double shift = t.value();
    for (int j = 0; j < rows(); ++j) y[j] -= shift;
  }
}

void Dataset::multiply_transpose(std::span<const double> r, std::span<double> y) const {
  matrix.multiply_transpose(r, y);
  if (centered) {
    kernels::CompensatedSum t;
    for (int j = 0; j < rows(); ++j) t.add(r[j]);
    const double rsum = t.value();
    for (int i = 0; i < cols(); ++i) y[i] -= col_offset[i] * rsum;
  }
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("libsvm parse error at line " + std::to_string(line_no) +
                           ": " + what);
}

}  // namespace

Dataset parse_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::vector<double> labels;
  std::vector<int> rows, cols;
  std::vector<double> vals;
  int max_col = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    double label;
    if (!(ss >> label)) parse_fail(line_no, "missing label");
    const int row = static_cast<int>(labels.size());
    labels.push_back(label);

    std::string tok;
    long long prev_idx = 0;
    while (ss >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        parse_fail(line_no, "bad feature token '" + tok + "'");
      long long idx;
      double value;
      try {
        std::size_t used = 0;
        idx = std::stoll(tok.substr(0, colon), &used);
        if (used != colon) parse_fail(line_no, "bad index in '" + tok + "'");
        const std::string vs = tok.substr(colon + 1);
        value = std::stod(vs, &used);
        if (used != vs.size()) parse_fail(line_no, "bad value in '" + tok + "'");
      } catch (const std::invalid_argument&) {
        parse_fail(line_no, "bad feature token '" + tok + "'");
      } catch (const std::out_of_range&) {
        parse_fail(line_no, "number out of range in '" + tok + "'");
      }
      if (idx < 1) parse_fail(line_no, "indices are 1-based");
      if (idx == prev_idx) parse_fail(line_no, "duplicate index " + std::to_string(idx));
      if (idx < prev_idx)
        parse_fail(line_no, "indices not increasing (" + std::to_string(idx) +
                                " after " + std::to_string(prev_idx) + ")");
      prev_idx = idx;
      if (value != 0.0) {
        rows.push_back(row);
        cols.push_back(static_cast<int>(idx - 1));  // to 0-based
        vals.push_back(value);
      }
      if (idx > max_col) max_col = static_cast<int>(idx);
    }
  }

  Dataset d;
  d.matrix = SparseMatrixCsc::from_triplets(static_cast<int>(labels.size()),
                                            max_col, rows, cols, vals);
  d.labels = std::move(labels);
  d.col_scale.assign(max_col, 1.0);
  d.col_offset.assign(max_col, 0.0);
  return d;
}

void write_libsvm(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  // Walk by rows via a per-column cursor over the CSC arrays.
  const auto& cp = d.matrix.col_ptr();
  const auto& ri = d.matrix.row_ind();
  const auto& va = d.matrix.values();
  std::vector<std::vector<std::pair<int, double>>> per_row(d.rows());
  for (int c = 0; c < d.cols(); ++c)
    for (long long k = cp[c]; k < cp[c + 1]; ++k)
      per_row[ri[k]].emplace_back(c, va[k]);
  char buf[64];
  for (int r = 0; r < d.rows(); ++r) {
    std::snprintf(buf, sizeof(buf), "%.17g", d.labels[r]);
    out << buf;
    for (const auto& [c, v] : per_row[r]) {
      std::snprintf(buf, sizeof(buf), " %d:%.17g", c + 1, v);
      out << buf;
    }
    out << '\n';
  }
}

Dataset normalize_columns(const Dataset& d, bool center) {
  const int n = d.cols();
  const int m = d.rows();
  std::vector<double> sq = d.matrix.col_sq_norms();
  std::vector<double> sums = d.matrix.col_sums();

  std::vector<double> scale(n), mean(n, 0.0);
  std::vector<int> zero_cols;
  for (int i = 0; i < n; ++i) {
    double s2 = sq[i];
    if (center) {
      const double mu = sums[i] / m;
      mean[i] = mu;
      // post-centering squared norm: ||a||^2 - m mu^2
      s2 = sq[i] - m * mu * mu;
    }
    if (!(s2 > 0.0)) {
      zero_cols.push_back(i);
      scale[i] = 1.0;
    } else {
      scale[i] = std::sqrt(s2);
    }
  }
  if (!zero_cols.empty()) {
    std::string msg = center ? "normalize_columns: zero post-centering columns:"
                             : "normalize_columns: zero columns:";
    for (int i : zero_cols) msg += " " + std::to_string(i);
    throw std::runtime_error(msg);
  }

  Dataset out = d;
  auto& vals = out.matrix.mutable_values();
  const auto& cp = out.matrix.col_ptr();
  for (int c = 0; c < n; ++c)
    for (long long k = cp[c]; k < cp[c + 1]; ++k) vals[k] /= scale[c];
  out.matrix.sync_mirror();
  for (int i = 0; i < n; ++i) {
    out.col_scale[i] = d.col_scale[i] * scale[i];
    out.col_offset[i] = center ? mean[i] / scale[i] : 0.0;
  }
  out.centered = center;
  return out;
}

Dataset drop_zero_columns(const Dataset& d, std::vector<int>* dropped) {
  std::vector<double> sq = d.matrix.col_sq_norms();
  std::vector<int> keep;
  for (int i = 0; i < d.cols(); ++i) {
    if (sq[i] > 0.0) {
      keep.push_back(i);
    } else if (dropped) {
      dropped->push_back(i);
    }
  }
  const auto& cp = d.matrix.col_ptr();
  const auto& ri = d.matrix.row_ind();
  const auto& va = d.matrix.values();
  std::vector<long long> col_ptr(keep.size() + 1, 0);
  std::vector<int> row_ind;
  std::vector<double> vals;
  Dataset out;
  out.col_scale.clear();
  out.col_offset.clear();
  for (std::size_t t = 0; t < keep.size(); ++t) {
    const int c = keep[t];
    for (long long k = cp[c]; k < cp[c + 1]; ++k) {
      row_ind.push_back(ri[k]);
      vals.push_back(va[k]);
    }
    col_ptr[t + 1] = static_cast<long long>(vals.size());
    out.col_scale.push_back(d.col_scale[c]);
    out.col_offset.push_back(d.col_offset[c]);
  }
  out.matrix = SparseMatrixCsc(d.rows(), static_cast<int>(keep.size()),
                               std::move(col_ptr), std::move(row_ind), std::move(vals));
  out.labels = d.labels;
  out.centered = d.centered;
  return out;
}

SynthLassoResult synth_lasso(int n, int m, double density, double noise,
                             std::uint64_t seed) {
  if (n <= 0 || m <= 0) throw std::invalid_argument("synth_lasso: n, m must be positive");
  if (!(density > 0.0) || density > 1.0)
    throw std::invalid_argument("synth_lasso: density must lie in (0, 1]");
  if (noise < 0.0) throw std::invalid_argument("synth_lasso: noise must be nonnegative");

  SplitMix64 rng(derive_seed(seed, 0));
  std::vector<long long> col_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> row_ind;
  std::vector<double> vals;
  // Column-major fill so the CSC layout is direct.
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < m; ++r) {
      if (rng.next_double() < density) {
        double g0, g1;
        gaussian_pair(rng, g0, g1);
        (void)g1;
        if (g0 == 0.0) g0 = 1.0;  // keep the stored-no-zeros invariant
        row_ind.push_back(r);
        vals.push_back(g0);
      }
    }
    col_ptr[c + 1] = static_cast<long long>(vals.size());
  }

  SynthLassoResult out;
  out.x_star.assign(n, 0.0);
  SplitMix64 rng_x(derive_seed(seed, 1));
  const int support = std::max(1, n / 10);
  for (int s = 0; s < support; ++s) {
    const int i = static_cast<int>(rng_x.next_below(static_cast<std::uint64_t>(n)));
    double g0, g1;
    gaussian_pair(rng_x, g0, g1);
    (void)g1;
    out.x_star[i] = g0;
  }

  Dataset d;
  d.matrix = SparseMatrixCsc(m, n, std::move(col_ptr), std::move(row_ind),
                             std::move(vals));
  d.labels.assign(m, 0.0);
  d.matrix.multiply(out.x_star, d.labels);
  if (noise > 0.0) {
    SplitMix64 rng_b(derive_seed(seed, 2));
    for (int j = 0; j < m; ++j) {
      double g0, g1;
      gaussian_pair(rng_b, g0, g1);
      (void)g1;
      d.labels[j] += noise * g0;
    }
  }
  d.col_scale.assign(n, 1.0);
  d.col_offset.assign(n, 0.0);
  out.dataset = std::move(d);
  return out;
}

}  // namespace rapcd
