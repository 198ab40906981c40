#pragma once

#include <memory>
#include <span>
#include <vector>

#include "pmldd/sparse.hpp"

namespace pmldd {

enum class Ordering { Amd, Metis };

/// Sparse direct factorization of a complex matrix (UMFPACK, symmetric
/// strategy: fill-reducing ordering of A + A^T, diagonal-preferring threshold
/// pivoting). Immutable after construction; concurrent solves on distinct
/// factorizations are safe.
class SparseLU {
 public:
  explicit SparseLU(const SparseMatrix& A, Ordering ordering = Ordering::Metis);
  ~SparseLU();
  SparseLU(SparseLU&&) noexcept;
  SparseLU& operator=(SparseLU&&) noexcept;
  SparseLU(const SparseLU&) = delete;
  SparseLU& operator=(const SparseLU&) = delete;

  int size() const { return n_; }
  void solve(std::span<const Complex> rhs, std::span<Complex> x) const;
  std::vector<Complex> solve(std::span<const Complex> rhs) const;

  /// Nonzeros in L + U, and the ordering UMFPACK reports it used.
  long factor_nnz() const { return factor_nnz_; }
  const char* ordering_used() const { return ordering_used_; }

 private:
  int n_ = 0;
  // UMFPACK consumes the CSR arrays as the CSC arrays of A^T and solves with
  // the non-conjugate transpose.
  std::vector<int> ptr_;
  std::vector<int> idx_;
  std::vector<Complex> vals_;
  void* numeric_ = nullptr;
  long factor_nnz_ = 0;
  const char* ordering_used_ = "none";
};

/// Approximate bytes of the LU factors of A: twice the fill of a symbolic
/// Cholesky analysis of the pattern under the same ordering.
double estimate_factor_bytes(const SparseMatrix& A, Ordering ordering = Ordering::Metis);

}  // namespace pmldd
