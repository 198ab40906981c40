#include "pmldd/oras.hpp"

#include <exception>
#include <string>

namespace pmldd {

namespace {

void local_solve(const SubdomainProblem& sp, std::span<const Complex> r, std::vector<Complex>& out) {
  if (!sp.lu) throw Error("subdomain " + std::to_string(sp.index) + " is not factorized");
  std::vector<Complex> local(sp.restriction.size());
  for (std::size_t l = 0; l < local.size(); ++l) local[l] = r[sp.restriction[l]];
  out.resize(local.size());
  try {
    sp.lu->solve(local, out);
  } catch (const Error& e) {
    throw Error("subdomain " + std::to_string(sp.index) + ": " + e.what());
  }
}

void scatter(const SubdomainProblem& sp, const std::vector<Complex>& local, std::span<Complex> z) {
  for (std::size_t l = 0; l < local.size(); ++l)
    if (sp.weights[l] != 0.0) z[sp.restriction[l]] += sp.weights[l] * local[l];
}

}  // namespace

OrasPreconditioner::OrasPreconditioner(int global_size, std::vector<SubdomainProblem> subdomains)
    : n_(global_size), subs_(std::move(subdomains)) {
  std::vector<std::exception_ptr> errors(subs_.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long s = 0; s < static_cast<long>(subs_.size()); ++s) {
    try {
      if (!subs_[s].lu) subs_[s].factorize();
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void OrasPreconditioner::apply(std::span<const Complex> r, std::span<Complex> z) const {
  std::vector<std::vector<Complex>> locals(subs_.size());
  std::vector<std::exception_ptr> errors(subs_.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long s = 0; s < static_cast<long>(subs_.size()); ++s) {
    try {
      local_solve(subs_[s], r, locals[s]);
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::fill(z.begin(), z.end(), Complex(0.0));
  for (std::size_t s = 0; s < subs_.size(); ++s) scatter(subs_[s], locals[s], z);
}

void OrasPreconditioner::apply_serial(std::span<const Complex> r, std::span<Complex> z) const {
  std::fill(z.begin(), z.end(), Complex(0.0));
  std::vector<Complex> local;
  for (const auto& sp : subs_) {
    local_solve(sp, r, local);
    scatter(sp, local, z);
  }
}

LinearOperator OrasPreconditioner::as_operator() const {
  return [this](std::span<const Complex> r, std::span<Complex> z) { apply(r, z); };
}

std::vector<Complex> apply_oras(const std::vector<SubdomainProblem>& subdomains, std::span<const Complex> r) {
  std::vector<Complex> z(r.size(), Complex(0.0));
  std::vector<Complex> local;
  for (const auto& sp : subdomains) {
    local_solve(sp, r, local);
    scatter(sp, local, z);
  }
  return z;
}

}  // namespace pmldd
