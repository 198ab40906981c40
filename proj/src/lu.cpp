#include "pmldd/lu.hpp"

#include <suitesparse/cholmod.h>
#include <suitesparse/umfpack.h>

#include <cmath>
#include <mutex>
#include <new>
#include <string>

namespace pmldd {

namespace {

const double* as_doubles(const Complex* p) { return reinterpret_cast<const double*>(p); }
double* as_doubles(Complex* p) { return reinterpret_cast<double*>(p); }

// Index (in the original numbering) of the first exactly-zero pivot.
int zero_pivot_index(void* numeric, int n) {
  std::vector<double> udiag(2 * static_cast<std::size_t>(n));
  std::vector<int> P(n), Q(n);
  int do_recip = 0;
  umfpack_zi_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                         P.data(), Q.data(), udiag.data(), nullptr, &do_recip, nullptr, numeric);
  for (int k = 0; k < n; ++k)
    if (udiag[2 * k] == 0.0 && udiag[2 * k + 1] == 0.0) return Q[k];
  return -1;
}

void set_control(double* control, Ordering ordering) {
  umfpack_zi_defaults(control);
  control[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
  control[UMFPACK_ORDERING] = ordering == Ordering::Metis ? UMFPACK_ORDERING_METIS : UMFPACK_ORDERING_AMD;
}

// Held around every fill-reducing ordering: METIS keeps its random state in
// globals.
std::mutex& ordering_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double estimate_factor_bytes(const SparseMatrix& A, Ordering ordering) {
  // Symmetric symbolic analysis of the pattern. With the symmetric strategy
  // and diagonal pivots, L and U share this fill.
  cholmod_common cm;
  cholmod_start(&cm);
  cm.nmethods = 1;
  cm.method[0].ordering = ordering == Ordering::Metis ? CHOLMOD_METIS : CHOLMOD_AMD;
  cm.supernodal = CHOLMOD_SIMPLICIAL;
  cm.print = 0;
  cholmod_sparse pattern{};
  pattern.nrow = pattern.ncol = A.rows();
  pattern.nzmax = A.nnz();
  pattern.p = const_cast<int*>(A.row_ptr().data());
  pattern.i = const_cast<int*>(A.cols().data());
  pattern.stype = 1;
  pattern.itype = CHOLMOD_INT;
  pattern.xtype = CHOLMOD_PATTERN;
  pattern.dtype = CHOLMOD_DOUBLE;
  pattern.sorted = 1;
  pattern.packed = 1;
  cholmod_factor* L = nullptr;
  {
    const std::lock_guard<std::mutex> lock(ordering_mutex());
    L = cholmod_analyze(&pattern, &cm);
  }
  const double lnz = cm.lnz;
  const int status = cm.status;
  cholmod_free_factor(&L, &cm);
  cholmod_finish(&cm);
  if (status == CHOLMOD_OUT_OF_MEMORY) throw std::bad_alloc();
  if (status < CHOLMOD_OK) throw Error("symbolic fill analysis failed (CHOLMOD status " + std::to_string(status) + ")");
  return 2.0 * lnz * static_cast<double>(sizeof(Complex) + sizeof(int));
}

SparseLU::SparseLU(const SparseMatrix& A, Ordering ordering)
    : n_(A.rows()), ptr_(A.row_ptr()), idx_(A.cols()), vals_(A.values()) {
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  set_control(control, ordering);

  void* symbolic = nullptr;
  int status = 0;
  {
    const std::lock_guard<std::mutex> lock(ordering_mutex());
    status = umfpack_zi_symbolic(n_, n_, ptr_.data(), idx_.data(), as_doubles(vals_.data()), nullptr, &symbolic,
                                 control, info);
  }
  if (status == UMFPACK_ERROR_out_of_memory) throw std::bad_alloc();
  if (status != UMFPACK_OK)
    throw Error("sparse LU symbolic analysis failed (UMFPACK status " + std::to_string(status) + ")");
  status = umfpack_zi_numeric(ptr_.data(), idx_.data(), as_doubles(vals_.data()), nullptr, symbolic, &numeric_,
                              control, info);
  umfpack_zi_free_symbolic(&symbolic);
  if (status == UMFPACK_WARNING_singular_matrix) {
    const int pivot = zero_pivot_index(numeric_, n_);
    umfpack_zi_free_numeric(&numeric_);
    throw Error("BREAKDOWN: zero pivot in sparse LU at index " + std::to_string(pivot));
  }
  if (status != UMFPACK_OK) {
    if (numeric_) umfpack_zi_free_numeric(&numeric_);
    if (status == UMFPACK_ERROR_out_of_memory) throw std::bad_alloc();
    throw Error("sparse LU factorization failed (UMFPACK status " + std::to_string(status) + ")");
  }
  factor_nnz_ = static_cast<long>(info[UMFPACK_LNZ] + info[UMFPACK_UNZ]);
  const double used = info[UMFPACK_ORDERING_USED];
  ordering_used_ = used == UMFPACK_ORDERING_METIS ? "metis" : used == UMFPACK_ORDERING_AMD ? "amd" : "other";
}

SparseLU::~SparseLU() {
  if (numeric_) umfpack_zi_free_numeric(&numeric_);
}

SparseLU::SparseLU(SparseLU&& o) noexcept
    : n_(o.n_),
      ptr_(std::move(o.ptr_)),
      idx_(std::move(o.idx_)),
      vals_(std::move(o.vals_)),
      numeric_(o.numeric_),
      factor_nnz_(o.factor_nnz_),
      ordering_used_(o.ordering_used_) {
  o.numeric_ = nullptr;
}

SparseLU& SparseLU::operator=(SparseLU&& o) noexcept {
  if (this != &o) {
    if (numeric_) umfpack_zi_free_numeric(&numeric_);
    n_ = o.n_;
    ptr_ = std::move(o.ptr_);
    idx_ = std::move(o.idx_);
    vals_ = std::move(o.vals_);
    numeric_ = o.numeric_;
    factor_nnz_ = o.factor_nnz_;
    ordering_used_ = o.ordering_used_;
    o.numeric_ = nullptr;
  }
  return *this;
}

void SparseLU::solve(std::span<const Complex> rhs, std::span<Complex> x) const {
  if (static_cast<int>(rhs.size()) != n_ || static_cast<int>(x.size()) != n_)
    throw Error("sparse LU solve: vector size mismatch");
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_zi_defaults(control);
  control[UMFPACK_IRSTEP] = 0;
  const int status = umfpack_zi_solve(UMFPACK_Aat, ptr_.data(), idx_.data(), as_doubles(vals_.data()), nullptr,
                                      as_doubles(x.data()), nullptr, as_doubles(rhs.data()), nullptr, numeric_,
                                      control, info);
  if (status != UMFPACK_OK) throw Error("sparse LU solve failed (UMFPACK status " + std::to_string(status) + ")");
}

std::vector<Complex> SparseLU::solve(std::span<const Complex> rhs) const {
  std::vector<Complex> x(rhs.size());
  solve(rhs, x);
  return x;
}

}  // namespace pmldd
