#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "pmldd/sparse.hpp"
#include "pmldd/types.hpp"

namespace oracle {

using pmldd::Complex;

/// Dense row-major matrix.
struct Dense {
  int n = 0;
  std::vector<Complex> a;

  explicit Dense(int size) : n(size), a(static_cast<std::size_t>(size) * size) {}
  Complex& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  Complex operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  static Dense from_sparse(const pmldd::SparseMatrix& A) {
    Dense d(A.rows());
    for (int i = 0; i < A.rows(); ++i)
      for (int p = A.row_ptr()[i]; p < A.row_ptr()[i + 1]; ++p) d(i, A.cols()[p]) = A.values()[p];
    return d;
  }

  std::vector<Complex> apply(const std::vector<Complex>& x) const {
    std::vector<Complex> y(n);
    for (int i = 0; i < n; ++i) {
      Complex s = 0.0;
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }
};

/// Gaussian elimination with partial pivoting on a copy of A.
inline std::vector<Complex> dense_solve(Dense A, std::vector<Complex> b) {
  const int n = A.n;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
    if (std::abs(A(piv, k)) == 0.0) throw std::runtime_error("dense oracle: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const Complex f = A(i, k) / A(k, k);
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) A(i, j) -= f * A(k, j);
      b[i] -= f * b[k];
    }
  }
  std::vector<Complex> x(n);
  for (int i = n - 1; i >= 0; --i) {
    Complex s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
inline Dense dense_inverse(Dense A) {
  const int n = A.n;
  Dense X(n);
  for (int i = 0; i < n; ++i) X(i, i) = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
    if (std::abs(A(piv, k)) == 0.0) throw std::runtime_error("dense oracle: singular matrix");
    if (piv != k)
      for (int j = 0; j < n; ++j) {
        std::swap(A(k, j), A(piv, j));
        std::swap(X(k, j), X(piv, j));
      }
    const Complex inv = 1.0 / A(k, k);
    for (int j = 0; j < n; ++j) {
      A(k, j) *= inv;
      X(k, j) *= inv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const Complex f = A(i, k);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        A(i, j) -= f * A(k, j);
        X(i, j) -= f * X(k, j);
      }
    }
  }
  return X;
}

inline double rel_l2(const std::vector<Complex>& x, const std::vector<Complex>& ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += std::norm(x[i] - ref[i]);
    den += std::norm(ref[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

/// Multilinear polynomial on the unit cube: c[a + 2b + 4c] is the coefficient
/// of xi^a eta^b zeta^c with a, b, c in {0, 1}.
struct Poly {
  double c[8] = {};

  static Poly lagrange(int axis, int which) {
    Poly p;
    const int bit = 1 << axis;
    if (which == 0) {
      p.c[0] = 1.0;
      p.c[bit] = -1.0;
    } else {
      p.c[bit] = 1.0;
    }
    return p;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        if (i & j) continue;  // never needed: factors in distinct variables
        r.c[i | j] += c[i] * o.c[j];
      }
    return r;
  }
  Poly derivative(int axis) const {
    Poly r;
    const int bit = 1 << axis;
    for (int i = 0; i < 8; ++i)
      if (i & bit) r.c[i & ~bit] += c[i];
    return r;
  }
  Poly scaled(double s) const {
    Poly r;
    for (int i = 0; i < 8; ++i) r.c[i] = s * c[i];
    return r;
  }
};

/// Exact integral over the unit cube of the product of two multilinear
/// polynomials (degree up to 2 per variable).
inline double integrate_product(const Poly& p, const Poly& q) {
  double s = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      double w = p.c[i] * q.c[j];
      if (w == 0.0) continue;
      for (int d = 0; d < 3; ++d) {
        const int e = ((i >> d) & 1) + ((j >> d) & 1);
        w *= 1.0 / (e + 1);
      }
      s += w;
    }
  return s;
}

/// Symbolic 12x12 element matrices of the lowest-order edge element on a cube
/// of side h: stiffness int curl N_i . curl N_j and mass int N_i . N_j, in the
/// local order x-edges (b + 2c), y-edges 4 + (a + 2c), z-edges 8 + (a + 2b).
struct ElementOracle {
  double K[144] = {};
  double M[144] = {};

  explicit ElementOracle(double h) {
    struct Fn {
      Poly v[3];
    };
    Fn N[12];
    for (int e = 0; e < 12; ++e) {
      const int axis = e / 4;
      const int l = e % 4;
      const int t1 = (axis + 1) % 3, t2 = (axis + 2) % 3;
      // local index l = first + 2 * second over the two transverse axes in
      // increasing axis order
      const int lo_axis = std::min(t1, t2), hi_axis = std::max(t1, t2);
      const Poly p = Poly::lagrange(lo_axis, l % 2) * Poly::lagrange(hi_axis, l / 2);
      N[e].v[axis] = p.scaled(1.0 / h);
    }
    // physical derivative d/dx_k = (1/h) d/dxi_k
    Fn C[12];
    for (int e = 0; e < 12; ++e) {
      auto d = [&](int comp, int axis) { return N[e].v[comp].derivative(axis).scaled(1.0 / h); };
      Poly cx = d(2, 1), cy = d(0, 2), cz = d(1, 0);
      const Poly mx = d(1, 2), my = d(2, 0), mz = d(0, 1);
      for (int i = 0; i < 8; ++i) {
        cx.c[i] -= mx.c[i];
        cy.c[i] -= my.c[i];
        cz.c[i] -= mz.c[i];
      }
      C[e].v[0] = cx;
      C[e].v[1] = cy;
      C[e].v[2] = cz;
    }
    const double vol = h * h * h;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        double k = 0.0, m = 0.0;
        for (int d = 0; d < 3; ++d) {
          k += integrate_product(C[i].v[d], C[j].v[d]);
          m += integrate_product(N[i].v[d], N[j].v[d]);
        }
        K[i * 12 + j] = vol * k;
        M[i * 12 + j] = vol * m;
      }
  }
};

}  // namespace oracle
