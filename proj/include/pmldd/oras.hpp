#pragma once

#include <span>
#include <vector>

#include "pmldd/ddm.hpp"
#include "pmldd/gmres.hpp"

namespace pmldd {

/// z = sum_s R_s^T D_s A_s^{-1} R_s r. Local solves run concurrently; the
/// weighted scatter-add always proceeds in subdomain order, so the result does
/// not depend on the thread count.
class OrasPreconditioner {
 public:
  OrasPreconditioner(int global_size, std::vector<SubdomainProblem> subdomains);

  int size() const { return n_; }
  const std::vector<SubdomainProblem>& subdomains() const { return subs_; }

  void apply(std::span<const Complex> r, std::span<Complex> z) const;
  /// Reference implementation, one subdomain at a time.
  void apply_serial(std::span<const Complex> r, std::span<Complex> z) const;

  LinearOperator as_operator() const;

 private:
  int n_;
  std::vector<SubdomainProblem> subs_;
};

/// One-shot application of the preconditioner over factorized subdomains.
std::vector<Complex> apply_oras(const std::vector<SubdomainProblem>& subdomains, std::span<const Complex> r);

}  // namespace pmldd
