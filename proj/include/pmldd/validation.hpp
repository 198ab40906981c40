#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pmldd/assembly.hpp"
#include "pmldd/grid.hpp"
#include "pmldd/physics.hpp"
#include "pmldd/pml.hpp"

namespace pmldd {

/// Plane-wave guide: PEC on the x-faces, natural condition on the y-faces,
/// Robin excitation of E = x_hat exp(-i k z) at z = 0 and a PEC-closed PML
/// collar beyond z = L. Lengths are in wavelengths.
struct GuideSpec {
  PhysicsSpec physics;
  double n_lambda = 10.0;
  Vec3 lengths_in_wavelengths{0.5, 0.5, 3.0};
  double pml_wavelengths = 2.0;
  StretchKind stretch_kind = StretchKind::SigmaM2;
  /// Distance (in wavelengths) kept from both ends of the physical z range.
  double strip_margin = 1.0;
};

struct GuideResult {
  Mesh mesh;
  std::vector<Complex> solution;
  double strip_lo = 0.0;
  double strip_hi = 0.0;
  /// Relative L2 error against the exact plane wave over the strip.
  double strip_error = 0.0;
};

Mesh build_guide_mesh(const GuideSpec& spec);
BoundarySetup guide_boundary(const Mesh& mesh, const GuideSpec& spec);

/// Assembles and solves the guide with a sparse direct solver.
GuideResult solve_planewave_guide(const GuideSpec& spec);

/// Relative L2 error of the discrete field against `exact` over the cells whose
/// z range lies inside [z_lo, z_hi], with 2x2x2 Gauss quadrature per cell.
double relative_l2_error(const Mesh& mesh, std::span<const Complex> u, const std::function<CVec3(const Vec3&)>& exact,
                         double z_lo, double z_hi);

}  // namespace pmldd
