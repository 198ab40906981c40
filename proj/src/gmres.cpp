#include "pmldd/gmres.hpp"

#include <chrono>
#include <cmath>

#include "pmldd/sparse.hpp"

namespace pmldd {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIter:
      return "max_iter";
    default:
      return "breakdown";
  }
}

namespace {

struct Givens {
  double c = 1.0;
  Complex s{0.0};

  static Givens annihilate(Complex a, Complex b) {
    const double na = std::abs(a), nb = std::abs(b);
    if (nb == 0.0) return {};
    if (na == 0.0) return {0.0, std::conj(b) / nb};
    const double t = std::hypot(na, nb);
    return {na / t, (a / na) * std::conj(b) / t};
  }

  void apply(Complex& x, Complex& y) const {
    const Complex tx = c * x + s * y;
    y = -std::conj(s) * x + c * y;
    x = tx;
  }
};

void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  const long n = static_cast<long>(y.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

GmresResult gmres_right(const LinearOperator& A, const LinearOperator& M, std::span<const Complex> b,
                        const GmresOptions& options) {
  if (!(options.tol > 0.0)) throw Error("GMRES tolerance must be positive");
  if (options.max_iter < 1) throw Error("GMRES needs max_iter >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = b.size();

  GmresResult out;
  auto& rep = out.report;
  out.solution.assign(n, Complex(0.0));
  auto& x = out.solution;

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.status = SolveStatus::Converged;
    rep.residual_history = {0.0};
    return out;
  }
  rep.residual_history.push_back(1.0);

  const int cycle = options.restart > 0 ? options.restart : options.max_iter;
  std::vector<Complex> r(b.begin(), b.end());
  std::vector<Complex> w(n), z(n);
  bool done = false;

  while (!done && rep.iterations < options.max_iter) {
    const double beta = norm2(r);
    std::vector<std::vector<Complex>> V;
    V.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / beta;

    std::vector<std::vector<Complex>> H;  // column-major Hessenberg, H[j] has j + 2 entries
    std::vector<Givens> rot;
    std::vector<Complex> g{Complex(beta)};

    int k = 0;  // Arnoldi steps in this cycle
    while (k < cycle && rep.iterations < options.max_iter) {
      M(V[k], z);
      A(z, w);
      std::vector<Complex> h(k + 2);
      for (int i = 0; i <= k; ++i) {
        h[i] = dot(V[i], w);
        axpy(-h[i], V[i], w);
      }
      const double hnext = norm2(w);
      h[k + 1] = hnext;
      for (int i = 0; i < k; ++i) rot[i].apply(h[i], h[i + 1]);
      rot.push_back(Givens::annihilate(h[k], h[k + 1]));
      rot[k].apply(h[k], h[k + 1]);
      g.push_back(Complex(0.0));
      rot[k].apply(g[k], g[k + 1]);
      H.push_back(std::move(h));
      ++k;
      ++rep.iterations;

      const double res = std::abs(g[k]) / bnorm;
      rep.residual_history.push_back(res);
      if (!std::isfinite(res)) {
        rep.status = SolveStatus::Breakdown;
        done = true;
        break;
      }
      if (res <= options.tol) {
        rep.status = SolveStatus::Converged;
        done = true;
        break;
      }
      // Invariant subspace reached without meeting the tolerance.
      if (hnext <= 1e-14 * beta) {
        rep.status = SolveStatus::Breakdown;
        done = true;
        break;
      }
      V.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i) V[k][i] = w[i] / hnext;
    }

    // Back substitution on the rotated triangle, then x += M^{-1} (V y).
    std::vector<Complex> y(k);
    for (int i = k - 1; i >= 0; --i) {
      Complex s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[j][i] * y[j];
      y[i] = s / H[i][i];
    }
    std::vector<Complex> vy(n, Complex(0.0));
    for (int j = 0; j < k; ++j) axpy(y[j], V[j], vy);
    M(vy, z);
    for (std::size_t i = 0; i < n; ++i) x[i] += z[i];

    if (!done) {
      A(x, w);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
    }
  }

  A(x, w);
  for (std::size_t i = 0; i < n; ++i) w[i] = b[i] - w[i];
  rep.final_residual = norm2(w) / bnorm;
  if (!std::isfinite(rep.final_residual)) rep.status = SolveStatus::Breakdown;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace pmldd
