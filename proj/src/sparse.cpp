#include "rapcd/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rapcd/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rapcd {

namespace kernels {

void gather_rows(std::span<const long long> ptr, std::span<const int> ind,
                 std::span<const double> val, std::span<const double> x,
                 std::span<double> y) {
  const long long n = static_cast<long long>(y.size());
#pragma omp parallel for schedule(static) if (n > 2048)
  for (long long r = 0; r < n; ++r) {
    double acc = 0.0;
    for (long long k = ptr[r]; k < ptr[r + 1]; ++k) acc += val[k] * x[ind[k]];
    y[r] = acc;
  }
}

void serial_gather_rows(std::span<const long long> ptr, std::span<const int> ind,
                        std::span<const double> val, std::span<const double> x,
                        std::span<double> y) {
  const long long n = static_cast<long long>(y.size());
  for (long long r = 0; r < n; ++r) {
    double acc = 0.0;
    for (long long k = ptr[r]; k < ptr[r + 1]; ++k) acc += val[k] * x[ind[k]];
    y[r] = acc;
  }
}

void column_sq_norms(std::span<const long long> ptr, std::span<const double> val,
                     std::span<double> out) {
  const long long n = static_cast<long long>(out.size());
#pragma omp parallel for schedule(static) if (n > 2048)
  for (long long c = 0; c < n; ++c) {
    double acc = 0.0;
    for (long long k = ptr[c]; k < ptr[c + 1]; ++k) acc += val[k] * val[k];
    out[c] = acc;
  }
}

void column_sums(std::span<const long long> ptr, std::span<const double> val,
                 std::span<double> out) {
  const long long n = static_cast<long long>(out.size());
#pragma omp parallel for schedule(static) if (n > 2048)
  for (long long c = 0; c < n; ++c) {
    double acc = 0.0;
    for (long long k = ptr[c]; k < ptr[c + 1]; ++k) acc += val[k];
    out[c] = acc;
  }
}

double max_abs(std::span<const double> x) {
  const long long n = static_cast<long long>(x.size());
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best) if (n > 4096)
  for (long long i = 0; i < n; ++i) best = std::max(best, std::abs(x[i]));
  return best;
}

double serial_max_abs(std::span<const double> x) {
  double best = 0.0;
  for (double v : x) best = std::max(best, std::abs(v));
  return best;
}

void dense_symv(std::span<const double> m, int n, std::span<const double> x,
                std::span<double> y) {
#pragma omp parallel for schedule(static) if (n > 256)
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    const double* row = m.data() + static_cast<std::size_t>(r) * n;
    for (int c = 0; c < n; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

}  // namespace kernels

SparseMatrixCsc::SparseMatrixCsc(int n_rows, int n_cols,
                                 std::vector<long long> col_ptr,
                                 std::vector<int> row_ind,
                                 std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      col_ptr_(std::move(col_ptr)),
      row_ind_(std::move(row_ind)),
      val_(std::move(values)) {
  validate();
  build_mirror();
}

SparseMatrixCsc SparseMatrixCsc::from_triplets(int n_rows, int n_cols,
                                               std::span<const int> rows,
                                               std::span<const int> cols,
                                               std::span<const double> values) {
  if (rows.size() != cols.size() || rows.size() != values.size())
    throw std::invalid_argument("from_triplets: array length mismatch");
  const std::size_t nnz = rows.size();
  std::vector<std::size_t> order(nnz);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cols[a] != cols[b]) return cols[a] < cols[b];
    return rows[a] < rows[b];
  });

  std::vector<long long> col_ptr(static_cast<std::size_t>(n_cols) + 1, 0);
  std::vector<int> row_ind;
  std::vector<double> val;
  row_ind.reserve(nnz);
  val.reserve(nnz);
  for (std::size_t t = 0; t < nnz; ++t) {
    const std::size_t k = order[t];
    if (values[k] == 0.0) continue;  // no explicit zeros
    if (t > 0) {
      const std::size_t p = order[t - 1];
      if (cols[p] == cols[k] && rows[p] == rows[k])
        throw std::invalid_argument("from_triplets: duplicate entry at (" +
                                    std::to_string(rows[k]) + ", " +
                                    std::to_string(cols[k]) + ")");
    }
    col_ptr[static_cast<std::size_t>(cols[k]) + 1]++;
    row_ind.push_back(rows[k]);
    val.push_back(values[k]);
  }
  for (int c = 0; c < n_cols; ++c) col_ptr[c + 1] += col_ptr[c];
  return SparseMatrixCsc(n_rows, n_cols, std::move(col_ptr), std::move(row_ind),
                         std::move(val));
}

void SparseMatrixCsc::validate() const {
  if (n_rows_ < 0 || n_cols_ < 0)
    throw std::invalid_argument("SparseMatrixCsc: negative dimension");
  if (col_ptr_.size() != static_cast<std::size_t>(n_cols_) + 1)
    throw std::invalid_argument("SparseMatrixCsc: col_ptr length mismatch");
  if (col_ptr_.front() != 0 ||
      col_ptr_.back() != static_cast<long long>(val_.size()) ||
      row_ind_.size() != val_.size())
    throw std::invalid_argument("SparseMatrixCsc: inconsistent arrays");
  for (int c = 0; c < n_cols_; ++c) {
    if (col_ptr_[c] > col_ptr_[c + 1])
      throw std::invalid_argument("SparseMatrixCsc: col_ptr not monotone");
    for (long long k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      if (row_ind_[k] < 0 || row_ind_[k] >= n_rows_)
        throw std::invalid_argument("SparseMatrixCsc: row index out of range");
      if (k > col_ptr_[c] && row_ind_[k] <= row_ind_[k - 1])
        throw std::invalid_argument(
            "SparseMatrixCsc: row indices not strictly increasing in column " +
            std::to_string(c));
      if (val_[k] == 0.0)
        throw std::invalid_argument("SparseMatrixCsc: explicit zero stored");
    }
  }
}

void SparseMatrixCsc::build_mirror() {
  row_ptr_.assign(static_cast<std::size_t>(n_rows_) + 1, 0);
  col_ind_.assign(val_.size(), 0);
  rval_.assign(val_.size(), 0.0);
  for (int r : row_ind_) row_ptr_[static_cast<std::size_t>(r) + 1]++;
  for (int r = 0; r < n_rows_; ++r) row_ptr_[r + 1] += row_ptr_[r];
  std::vector<long long> next(row_ptr_.begin(), row_ptr_.end() - 1);
  for (int c = 0; c < n_cols_; ++c) {
    for (long long k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      const long long dst = next[row_ind_[k]]++;
      col_ind_[dst] = c;
      rval_[dst] = val_[k];
    }
  }
}

void SparseMatrixCsc::sync_mirror() { build_mirror(); }

void SparseMatrixCsc::multiply(std::span<const double> x, std::span<double> y) const {
  kernels::gather_rows(row_ptr_, col_ind_, rval_, x, y);
}

void SparseMatrixCsc::multiply_transpose(std::span<const double> r,
                                         std::span<double> y) const {
  kernels::gather_rows(col_ptr_, row_ind_, val_, r, y);
}

double SparseMatrixCsc::col_dot(int j, std::span<const double> r) const {
  double acc = 0.0;
  for (long long k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
    acc += val_[k] * r[row_ind_[k]];
  return acc;
}

void SparseMatrixCsc::col_axpy(int j, double delta, std::span<double> r) const {
  for (long long k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k)
    r[row_ind_[k]] += delta * val_[k];
}

std::vector<double> SparseMatrixCsc::col_sq_norms() const {
  std::vector<double> out(n_cols_, 0.0);
  kernels::column_sq_norms(col_ptr_, val_, out);
  return out;
}

std::vector<double> SparseMatrixCsc::col_sums() const {
  std::vector<double> out(n_cols_, 0.0);
  kernels::column_sums(col_ptr_, val_, out);
  return out;
}

int SparseMatrixCsc::max_row_nnz() const {
  long long best = 0;
  for (int r = 0; r < n_rows_; ++r)
    best = std::max(best, row_ptr_[r + 1] - row_ptr_[r]);
  return static_cast<int>(best);
}

}  // namespace rapcd
