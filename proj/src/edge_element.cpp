#include "pmldd/edge_element.hpp"

namespace pmldd {

namespace {

double lin(int side, double t) { return side ? t : 1.0 - t; }
double dlin(int side) { return side ? 1.0 : -1.0; }

}  // namespace

std::array<EdgeShape, 12> edge_shapes(const Vec3& ref, double h) {
  const auto [xi, eta, zeta] = ref;
  const double inv_h = 1.0 / h;
  const double inv_h2 = inv_h * inv_h;
  std::array<EdgeShape, 12> n{};
  for (int c = 0; c < 2; ++c)
    for (int b = 0; b < 2; ++b) {
      // x-edge at (y = b, z = c): phi = L_b(eta) L_c(zeta) / h
      auto& ex = n[b + 2 * c];
      ex.value = {lin(b, eta) * lin(c, zeta) * inv_h, 0.0, 0.0};
      ex.curl = {0.0, lin(b, eta) * dlin(c) * inv_h2, -dlin(b) * lin(c, zeta) * inv_h2};

      // y-edge at (x = b, z = c)
      auto& ey = n[4 + b + 2 * c];
      ey.value = {0.0, lin(b, xi) * lin(c, zeta) * inv_h, 0.0};
      ey.curl = {-lin(b, xi) * dlin(c) * inv_h2, 0.0, dlin(b) * lin(c, zeta) * inv_h2};

      // z-edge at (x = b, y = c)
      auto& ez = n[8 + b + 2 * c];
      ez.value = {0.0, 0.0, lin(b, xi) * lin(c, eta) * inv_h};
      ez.curl = {lin(b, xi) * dlin(c) * inv_h2, -dlin(b) * lin(c, eta) * inv_h2, 0.0};
    }
  return n;
}

LocalEdge local_edge(int e) {
  const int axis = e / 4;
  const int b = e % 2;
  const int c = (e / 2) % 2;
  Vec3 start{};
  // Transverse axes in increasing order carry offsets b and c.
  const int t0 = axis == 0 ? 1 : 0;
  const int t1 = axis == 2 ? 1 : 2;
  start[t0] = b;
  start[t1] = c;
  return {axis, start};
}

}  // namespace pmldd
