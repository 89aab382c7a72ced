#pragma once

#include <string>
#include <vector>

#include "rapcd/sparse.hpp"

namespace rapcd {

// A design matrix with per-sample labels plus the normalization record.
// After normalize_columns the stored values are already scaled; centering is
// implicit: the effective matrix is  A_eff[:, i] = A[:, i] - col_offset[i] * 1
// and problems apply the rank-one correction inside their products, so
// sparsity is preserved.  col_offset is all zeros when centering is off.
struct Dataset {
  SparseMatrixCsc matrix;
  std::vector<double> labels;      // length matrix.rows()
  std::vector<double> col_scale;   // recorded divisor per column (1 if raw)
  std::vector<double> col_offset;  // per-column mean of the scaled column
  bool centered = false;

  int rows() const { return matrix.rows(); }
  int cols() const { return matrix.cols(); }

  // y = A_eff x (length rows()), applying the implicit centering correction.
  void multiply(std::span<const double> x, std::span<double> y) const;
  // y = A_eff^T r (length cols()).
  void multiply_transpose(std::span<const double> r, std::span<double> y) const;
};

// Parses the LibSVM text format: lines "label idx:val idx:val ..." with
// 1-based, strictly increasing indices per line.  The feature count is the
// maximum index seen.  Malformed lines and non-monotone or duplicate indices
// raise std::runtime_error with the offending line number.
Dataset parse_libsvm(const std::string& path);

// Writes a dataset back out in the same format (entries are stored 0-based
// internally and emitted 1-based).
void write_libsvm(const Dataset& d, const std::string& path);

// Scales every column to unit Euclidean norm; with center=true the columns
// are first mean-shifted (implicitly, see Dataset) and scaled to unit
// post-centering norm.  Columns whose (post-centering) norm is zero raise an
// error listing the column indices.
Dataset normalize_columns(const Dataset& d, bool center);

// Removes zero columns, returning the reduced dataset and the dropped
// indices.  Offered as the explicit alternative to the default behaviour of
// rejecting zero columns at problem construction.
Dataset drop_zero_columns(const Dataset& d, std::vector<int>* dropped);

struct SynthLassoResult {
  Dataset dataset;
  std::vector<double> x_star;  // planted sparse coefficient vector
};

// Synthetic Lasso instance: A has iid standard normal entries kept with the
// given density, x_star is sparse with ~n/10 normal entries, and
// b = A x_star + noise * g.  Bit-deterministic for a given seed.
SynthLassoResult synth_lasso(int n, int m, double density, double noise,
                             std::uint64_t seed);

}  // namespace rapcd
