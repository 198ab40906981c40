#include "pmldd/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace pmldd {

SparseMatrix::SparseMatrix(int n, std::vector<int> row_ptr, std::vector<int> cols, std::vector<Complex> vals)
    : n_(n), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(std::move(vals)) {
  if (static_cast<int>(row_ptr_.size()) != n_ + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != static_cast<int>(cols_.size()) || cols_.size() != vals_.size())
    throw Error("malformed CSR arrays");
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (cols_[p] < 0 || cols_[p] >= n_) throw Error("CSR column index out of range");
      if (p > row_ptr_[i] && cols_[p] <= cols_[p - 1]) throw Error("CSR columns must be strictly increasing");
    }
}

long SparseMatrix::find(int i, int j) const {
  const auto first = cols_.begin() + row_ptr_[i];
  const auto last = cols_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return -1;
  return static_cast<long>(it - cols_.begin());
}

Complex SparseMatrix::at(int i, int j) const {
  const long p = find(i, j);
  return p < 0 ? Complex(0.0) : vals_[p];
}

void SparseMatrix::multiply(std::span<const Complex> x, std::span<Complex> y) const {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_; ++i) {
    Complex s(0.0);
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += vals_[p] * x[cols_[p]];
    y[i] = s;
  }
}

void SparseMatrix::multiply_serial(std::span<const Complex> x, std::span<Complex> y) const {
  for (int i = 0; i < n_; ++i) {
    Complex s(0.0);
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += vals_[p] * x[cols_[p]];
    y[i] = s;
  }
}

bool SparseMatrix::is_symmetric(double tol) const {
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const long q = find(cols_[p], i);
      if (q < 0) return false;
      if (std::abs(vals_[p] - vals_[q]) > tol * std::abs(vals_[p])) return false;
    }
  return true;
}

void SparseMatrix::prune_zeros() {
  std::size_t out = 0;
  std::vector<int> new_ptr(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (vals_[p] == 0.0 && cols_[p] != i) continue;
      cols_[out] = cols_[p];
      vals_[out] = vals_[p];
      ++out;
    }
    new_ptr[i + 1] = static_cast<int>(out);
  }
  cols_.resize(out);
  vals_.resize(out);
  row_ptr_ = std::move(new_ptr);
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<int> ptr(n + 1), cols(n);
  for (int i = 0; i <= n; ++i) ptr[i] = i;
  for (int i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, std::move(ptr), std::move(cols), std::vector<Complex>(n, Complex(1.0)));
}

SparseMatrix SparseMatrix::from_dense(int n, std::span<const Complex> dense) {
  std::vector<int> ptr{0}, cols;
  std::vector<Complex> vals;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex v = dense[static_cast<std::size_t>(i) * n + j];
      if (v != 0.0) {
        cols.push_back(j);
        vals.push_back(v);
      }
    }
    ptr.push_back(static_cast<int>(cols.size()));
  }
  return SparseMatrix(n, std::move(ptr), std::move(cols), std::move(vals));
}

std::vector<Complex> SparseMatrix::to_dense() const {
  std::vector<Complex> d(static_cast<std::size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) d[static_cast<std::size_t>(i) * n_ + cols_[p]] = vals_[p];
  return d;
}

namespace {
constexpr std::size_t kBlock = 4096;
}

Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  const std::size_t n = x.size();
  const long blocks = static_cast<long>((n + kBlock - 1) / kBlock);
  std::vector<Complex> partial(blocks);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    Complex s(0.0);
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) s += std::conj(x[i]) * y[i];
    partial[b] = s;
  }
  Complex total(0.0);
  for (const auto& p : partial) total += p;
  return total;
}

double norm2(std::span<const Complex> x) {
  const std::size_t n = x.size();
  const long blocks = static_cast<long>((n + kBlock - 1) / kBlock);
  std::vector<double> partial(blocks);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    double s = 0.0;
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) s += std::norm(x[i]);
    partial[b] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return std::sqrt(total);
}

}  // namespace pmldd
