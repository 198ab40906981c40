#include <omp.h>

#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "pmldd/gmres.hpp"
#include "pmldd/lu.hpp"
#include "pmldd/rng.hpp"
#include "pmldd/sparse.hpp"

using namespace pmldd;

namespace {

std::vector<Complex> random_vector(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Complex> v(n);
  for (auto& x : v) {
    const double re = rng.symmetric();
    x = Complex(re, rng.symmetric());
  }
  return v;
}

// Complex symmetric, diagonally dominant banded test matrix.
SparseMatrix banded(int n, int bandwidth, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Complex> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j <= std::min(n - 1, i + bandwidth); ++j) {
      const double re = rng.symmetric();
      const Complex v(re, rng.symmetric());
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  for (int i = 0; i < n; ++i) d[i * n + i] = Complex(2.0 * bandwidth + 1.0, 0.5);
  return SparseMatrix::from_dense(n, d);
}

LinearOperator as_op(const SparseMatrix& A) {
  return [&A](std::span<const Complex> x, std::span<Complex> y) { A.multiply(x, y); };
}

const LinearOperator kIdentity = [](std::span<const Complex> x, std::span<Complex> y) {
  std::copy(x.begin(), x.end(), y.begin());
};

double residual(const SparseMatrix& A, const std::vector<Complex>& x, const std::vector<Complex>& b) {
  std::vector<Complex> r(b.size());
  A.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return norm2(r) / norm2(b);
}

}  // namespace

TEST_CASE("sparse matrix basics") {
  const std::vector<Complex> d{1.0, 0.0, Complex(0, 2), 0.0, 3.0, 0.0, Complex(0, 2), 0.0, 4.0};
  SparseMatrix A = SparseMatrix::from_dense(3, d);
  CHECK(A.nnz() == 5);
  CHECK(A.at(0, 2) == Complex(0, 2));
  CHECK(A.at(0, 1) == Complex(0.0));
  CHECK(A.find(1, 0) == -1);
  CHECK(A.is_symmetric());
  CHECK(A.to_dense() == d);
  A.values()[A.find(0, 2)] = 5.0;
  CHECK_FALSE(A.is_symmetric());

  const SparseMatrix I = SparseMatrix::identity(4);
  const auto x = random_vector(4, 1);
  std::vector<Complex> y(4);
  I.multiply(x, y);
  CHECK(y == x);
}

TEST_CASE("threaded products and reductions are bit-identical to serial") {
  const SparseMatrix A = banded(3000, 5, 9);
  const auto x = random_vector(3000, 2);
  std::vector<Complex> serial(3000), threaded(3000);
  A.multiply_serial(x, serial);
  const int saved = omp_get_max_threads();
  for (int t : {1, 2, 3, 4}) {
    omp_set_num_threads(t);
    A.multiply(x, threaded);
    CHECK(threaded == serial);
  }
  omp_set_num_threads(1);
  const Complex d1 = dot(x, serial);
  const double n1 = norm2(serial);
  for (int t : {2, 4}) {
    omp_set_num_threads(t);
    CHECK(dot(x, serial) == d1);
    CHECK(norm2(serial) == n1);
  }
  omp_set_num_threads(saved);

  double ref = 0.0;
  for (auto v : serial) ref += std::norm(v);
  CHECK(n1 == doctest::Approx(std::sqrt(ref)).epsilon(1e-12));
  Complex ref_dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ref_dot += std::conj(x[i]) * serial[i];
  CHECK(std::abs(d1 - ref_dot) <= 1e-10 * std::abs(ref_dot));
}

TEST_CASE("sparse LU on a 2x2 complex symmetric system") {
  const SparseMatrix A = SparseMatrix::from_dense(2, std::vector<Complex>{2.0, Complex(0, 1), Complex(0, 1), 2.0});
  const SparseLU lu(A);
  const auto x = lu.solve(std::vector<Complex>{1.0, 0.0});
  CHECK(std::abs(x[0] - Complex(0.4, 0.0)) <= 1e-15);
  CHECK(std::abs(x[1] - Complex(0.0, -0.2)) <= 1e-15);
}

TEST_CASE("sparse LU on the identity") {
  const SparseLU lu(SparseMatrix::identity(10), Ordering::Amd);
  const auto b = random_vector(10, 5);
  CHECK(lu.solve(b) == b);
  CHECK(lu.size() == 10);
}

TEST_CASE("sparse LU matches the dense oracle") {
  for (auto ord : {Ordering::Amd, Ordering::Metis}) {
    const SparseMatrix A = banded(120, 4, 3);
    const SparseLU lu(A, ord);
    const auto b = random_vector(120, 4);
    const auto x = lu.solve(b);
    CHECK(oracle::rel_l2(x, oracle::dense_solve(oracle::Dense::from_sparse(A), b)) <= 1e-12);
    CHECK(residual(A, x, b) <= 1e-13);
    CHECK(lu.factor_nnz() > 0);
  }
}

TEST_CASE("sparse LU reports a zero pivot") {
  std::vector<Complex> d(9, 0.0);
  d[0] = 1.0;
  d[4] = 1.0;
  const SparseMatrix A = SparseMatrix::from_dense(3, d);
  try {
    const SparseLU lu(A);
    FAIL("expected a breakdown");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("BREAKDOWN") != std::string::npos);
  }
  const SparseLU ok(SparseMatrix::identity(3));
  CHECK_THROWS_AS(ok.solve(std::vector<Complex>(2)), Error);
}

TEST_CASE("fill estimate") {
  const SparseMatrix A = banded(400, 3, 8);
  const double est = estimate_factor_bytes(A);
  CHECK(est > 0.0);
  const SparseLU lu(A);
  // Banded pattern: no fill beyond the band in either estimate.
  CHECK(est >= 0.5 * lu.factor_nnz() * (sizeof(Complex) + sizeof(int)));
  CHECK(est <= 4.0 * lu.factor_nnz() * (sizeof(Complex) + sizeof(int)));
}

TEST_CASE("GMRES on trivial operators") {
  GmresOptions o;
  o.tol = 1e-10;
  const auto b = random_vector(50, 7);

  const GmresResult id = gmres_right(as_op(SparseMatrix::identity(50)), kIdentity, b, o);
  CHECK(id.report.status == SolveStatus::Converged);
  CHECK(id.report.iterations == 1);

  std::vector<Complex> diag(4, 0.0);
  diag[0] = 1.0;
  diag[3] = 2.0;
  const SparseMatrix D = SparseMatrix::from_dense(2, diag);
  const GmresResult two = gmres_right(as_op(D), kIdentity, std::vector<Complex>{1.0, 1.0}, o);
  CHECK(two.report.status == SolveStatus::Converged);
  CHECK(two.report.iterations <= 2);
  CHECK(std::abs(two.solution[1] - 0.5) <= 1e-12);

  const GmresResult zero = gmres_right(as_op(D), kIdentity, std::vector<Complex>(2, 0.0), o);
  CHECK(zero.report.status == SolveStatus::Converged);
  CHECK(zero.report.iterations == 0);
  CHECK(zero.solution == std::vector<Complex>(2, 0.0));

  GmresOptions bad = o;
  bad.tol = 0.0;
  CHECK_THROWS_AS(gmres_right(as_op(D), kIdentity, b, bad), Error);
  bad = o;
  bad.max_iter = 0;
  CHECK_THROWS_AS(gmres_right(as_op(D), kIdentity, b, bad), Error);
}

TEST_CASE("GMRES with an exact inverse preconditioner takes one step") {
  const SparseMatrix A = banded(200, 6, 11);
  const SparseLU lu(A);
  const LinearOperator inv = [&lu](std::span<const Complex> x, std::span<Complex> y) { lu.solve(x, y); };
  const auto b = random_vector(200, 12);
  GmresOptions o;
  o.tol = 1e-10;
  const GmresResult r = gmres_right(as_op(A), inv, b, o);
  CHECK(r.report.status == SolveStatus::Converged);
  CHECK(r.report.iterations == 1);
  CHECK(r.report.final_residual <= 1e-10);
}

TEST_CASE("GMRES residual history") {
  const SparseMatrix A = banded(300, 8, 13);
  const auto b = random_vector(300, 14);
  GmresOptions o;
  o.tol = 1e-8;
  o.max_iter = 300;
  const GmresResult r = gmres_right(as_op(A), kIdentity, b, o);
  REQUIRE(r.report.status == SolveStatus::Converged);
  const auto& h = r.report.residual_history;
  CHECK(h.size() == static_cast<std::size_t>(r.report.iterations) + 1);
  CHECK(h.front() == 1.0);
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] <= h[i - 1] * (1.0 + 1e-12));
  CHECK(h.back() <= 1e-8);
  // Least-squares and explicit residuals agree.
  CHECK(r.report.final_residual <= 1e-7);
  CHECK(std::abs(residual(A, r.solution, b) - r.report.final_residual) <= 1e-12);
  CHECK(oracle::rel_l2(r.solution, oracle::dense_solve(oracle::Dense::from_sparse(A), b)) <= 1e-6);
}

TEST_CASE("GMRES hitting the iteration cap") {
  const SparseMatrix A = banded(300, 8, 15);
  const auto b = random_vector(300, 16);
  GmresOptions o;
  o.tol = 1e-14;
  o.max_iter = 3;
  const GmresResult r = gmres_right(as_op(A), kIdentity, b, o);
  CHECK(r.report.status == SolveStatus::MaxIter);
  CHECK(r.report.iterations == 3);
  CHECK(r.report.final_residual < 1.0);
  CHECK(r.report.final_residual == doctest::Approx(r.report.residual_history.back()).epsilon(1e-8));
}

TEST_CASE("restarted GMRES") {
  const SparseMatrix A = banded(300, 8, 17);
  const auto b = random_vector(300, 18);
  GmresOptions o;
  o.tol = 1e-8;
  o.max_iter = 400;
  o.restart = 5;
  const GmresResult r = gmres_right(as_op(A), kIdentity, b, o);
  CHECK(r.report.status == SolveStatus::Converged);
  CHECK(r.report.final_residual <= 1e-7);
  const auto& h = r.report.residual_history;
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] <= h[i - 1] * (1.0 + 1e-9));
}

TEST_CASE("GMRES iterates are independent of the thread count") {
  const SparseMatrix A = banded(2000, 10, 19);
  const auto b = random_vector(2000, 20);
  GmresOptions o;
  o.tol = 1e-9;
  o.max_iter = 500;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const GmresResult one = gmres_right(as_op(A), kIdentity, b, o);
  omp_set_num_threads(4);
  const GmresResult four = gmres_right(as_op(A), kIdentity, b, o);
  omp_set_num_threads(saved);
  CHECK(one.report.iterations == four.report.iterations);
  CHECK(one.report.residual_history == four.report.residual_history);
  CHECK(one.solution == four.solution);
}
