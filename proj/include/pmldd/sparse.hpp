#pragma once

#include <span>
#include <vector>

#include "pmldd/types.hpp"

namespace pmldd {

/// Row-compressed complex matrix with sorted column indices.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int n, std::vector<int> row_ptr, std::vector<int> cols, std::vector<Complex> vals);

  int rows() const { return n_; }
  std::size_t nnz() const { return cols_.size(); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<Complex>& values() const { return vals_; }
  std::vector<Complex>& values() { return vals_; }

  /// Entry (i, j), zero when not stored.
  Complex at(int i, int j) const;
  /// Position of (i, j) in the value array, or -1.
  long find(int i, int j) const;

  /// y = A x, rows distributed over OpenMP threads.
  void multiply(std::span<const Complex> x, std::span<Complex> y) const;
  /// Reference single-threaded product.
  void multiply_serial(std::span<const Complex> x, std::span<Complex> y) const;

  /// Structural and numerical check of A = A^T (no conjugation).
  bool is_symmetric(double tol = 0.0) const;

  /// Drops stored entries that are exactly zero, keeping the diagonal.
  void prune_zeros();

  static SparseMatrix identity(int n);
  /// Builds from dense row-major data, dropping zeros. Test helper.
  static SparseMatrix from_dense(int n, std::span<const Complex> dense);
  std::vector<Complex> to_dense() const;

 private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<Complex> vals_;
};

/// Thread-count-independent reductions: the vector is split into fixed-size
/// blocks whose partial sums are combined in block order.
Complex dot(std::span<const Complex> x, std::span<const Complex> y);  // conj(x) . y
double norm2(std::span<const Complex> x);

}  // namespace pmldd
