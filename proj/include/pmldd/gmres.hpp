#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pmldd/types.hpp"

namespace pmldd {

/// y = Op(x); x and y have the same length and never alias.
using LinearOperator = std::function<void(std::span<const Complex>, std::span<Complex>)>;

enum class SolveStatus { Converged, MaxIter, Breakdown };
std::string to_string(SolveStatus s);

struct GmresOptions {
  double tol = 1e-6;
  int max_iter = 200;
  int restart = 0;  // 0: no restart
};

struct ConvergenceReport {
  int iterations = 0;
  /// Relative residual ||b - A x_k|| / ||b|| for k = 0..iterations.
  std::vector<double> residual_history;
  SolveStatus status = SolveStatus::MaxIter;
  double wall_time = 0.0;
  /// Explicitly recomputed final residual.
  double final_residual = 0.0;
};

struct GmresResult {
  std::vector<Complex> solution;
  ConvergenceReport report;
};

/// Right-preconditioned GMRES on A M^{-1} y = b, returning u = M^{-1} y. Zero
/// initial guess, modified Gram-Schmidt Arnoldi, Givens least squares. With
/// right preconditioning the least-squares residual is the true residual of
/// the unpreconditioned system.
GmresResult gmres_right(const LinearOperator& A, const LinearOperator& M, std::span<const Complex> b,
                        const GmresOptions& options);

}  // namespace pmldd
