#pragma once

#include <span>
#include <vector>

namespace rapcd {

// Column-compressed sparse matrix.  Row indices are strictly increasing
// within each column, no explicit zeros are stored, and the pointer array is
// monotone; the constructor validates all three.  A row-compressed mirror is
// built eagerly so products of the form A*x can be computed as per-row
// gathers, which parallelize without changing any summation order.
class SparseMatrixCsc {
 public:
  SparseMatrixCsc() = default;

  // Takes CSC arrays directly; col_ptr has n_cols+1 entries.
  SparseMatrixCsc(int n_rows, int n_cols, std::vector<long long> col_ptr,
                  std::vector<int> row_ind, std::vector<double> values);

  // Builds from (row, col, value) triplets; duplicates are rejected.
  static SparseMatrixCsc from_triplets(int n_rows, int n_cols,
                                       std::span<const int> rows,
                                       std::span<const int> cols,
                                       std::span<const double> values);

  int rows() const { return n_rows_; }
  int cols() const { return n_cols_; }
  long long nnz() const { return static_cast<long long>(val_.size()); }
  long long col_nnz(int j) const { return col_ptr_[j + 1] - col_ptr_[j]; }

  const std::vector<long long>& col_ptr() const { return col_ptr_; }
  const std::vector<int>& row_ind() const { return row_ind_; }
  const std::vector<double>& values() const { return val_; }
  std::vector<double>& mutable_values() { return val_; }

  // y = A x, length rows(); per-row gather via the CSR mirror.
  void multiply(std::span<const double> x, std::span<double> y) const;

  // y = A^T r, length cols(); per-column gather.
  void multiply_transpose(std::span<const double> r, std::span<double> y) const;

  // dot of column j against a dense vector.
  double col_dot(int j, std::span<const double> r) const;

  // r += delta * A[:, j].
  void col_axpy(int j, double delta, std::span<double> r) const;

  std::vector<double> col_sq_norms() const;
  std::vector<double> col_sums() const;

  // Maximum number of stored entries in any row (omega in the tau-nice
  // overapproximation factor).
  int max_row_nnz() const;

  // Rebuild internal values after an external scale of val_ (keeps mirror in sync).
  void sync_mirror();

 private:
  void build_mirror();
  void validate() const;

  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<long long> col_ptr_{0};
  std::vector<int> row_ind_;
  std::vector<double> val_;
  // CSR mirror.
  std::vector<long long> row_ptr_;
  std::vector<int> col_ind_;
  std::vector<double> rval_;
};

}  // namespace rapcd
