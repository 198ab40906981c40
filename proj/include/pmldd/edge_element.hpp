#pragma once

#include <array>

#include "pmldd/types.hpp"

namespace pmldd {

/// Value and curl of one lowest-order hexahedral edge basis function.
struct EdgeShape {
  Vec3 value{};
  Vec3 curl{};
};

/// Basis functions of a cube cell of side h at reference point `ref` in
/// [0,1]^3, in the local edge order of Mesh::cell_edges. All edges are oriented
/// along +axis, e.g. the x-edge at (y = b, z = c) is
///   N = L_b(eta) L_c(zeta) / h * x_hat,  L_0(t) = 1 - t, L_1(t) = t.
std::array<EdgeShape, 12> edge_shapes(const Vec3& ref, double h);

/// Axis and reference-coordinate start point of a local edge.
struct LocalEdge {
  int axis;
  Vec3 start;
};
LocalEdge local_edge(int e);

/// Gauss-Legendre points on [0,1].
inline constexpr double kGaussLo = 0.21132486540518711775;  // (1 - 1/sqrt(3)) / 2
inline constexpr double kGaussHi = 0.78867513459481288225;  // (1 + 1/sqrt(3)) / 2
inline constexpr std::array<double, 2> kGauss2 = {kGaussLo, kGaussHi};

}  // namespace pmldd
