#include "pmldd/validation.hpp"

#include <cmath>

#include "pmldd/edge_element.hpp"
#include "pmldd/lu.hpp"

namespace pmldd {

Mesh build_guide_mesh(const GuideSpec& spec) {
  const double lambda = spec.physics.wavelength();
  DiscretizationSpec d;
  d.domain_lengths = {spec.lengths_in_wavelengths[0] * lambda, spec.lengths_in_wavelengths[1] * lambda,
                      spec.lengths_in_wavelengths[2] * lambda};
  d.n_lambda = spec.n_lambda;
  d.pml_wavelengths = spec.pml_wavelengths;
  return build_grid(d, spec.physics, std::nullopt, GlobalBc::Pml, face_bit(Face::ZPlus));
}

BoundarySetup guide_boundary(const Mesh& mesh, const GuideSpec& spec) {
  BoundarySetup bnd = global_boundary(mesh, GlobalBc::Pml, spec.stretch_kind);
  bnd.faces[static_cast<int>(Face::XMinus)] = FaceCondition::Pec;
  bnd.faces[static_cast<int>(Face::XPlus)] = FaceCondition::Pec;
  bnd.faces[static_cast<int>(Face::YMinus)] = FaceCondition::Natural;
  bnd.faces[static_cast<int>(Face::YPlus)] = FaceCondition::Natural;
  return bnd;
}

GuideResult solve_planewave_guide(const GuideSpec& spec) {
  GuideResult r;
  r.mesh = build_guide_mesh(spec);
  const BoundarySetup bnd = guide_boundary(r.mesh, spec);
  AssembledSystem sys = assemble_global(r.mesh, spec.physics, bnd);
  sys.b = assemble_rhs_planewave(r.mesh, spec.physics, bnd, {1.0, 0.0, 0.0});
  const std::vector<char> mask = sys.dirichlet;
  sys = apply_dirichlet(std::move(sys), mask);
  const SparseLU lu(sys.A);
  r.solution = lu.solve(sys.b);

  const double lambda = spec.physics.wavelength();
  r.strip_lo = spec.strip_margin * lambda;
  r.strip_hi = r.mesh.physical_lengths[2] - spec.strip_margin * lambda;
  const double k = spec.physics.wavenumber();
  auto exact = [k](const Vec3& x) { return CVec3{std::exp(Complex(0.0, -k * x[2])), 0.0, 0.0}; };
  r.strip_error = relative_l2_error(r.mesh, r.solution, exact, r.strip_lo, r.strip_hi);
  return r;
}

double relative_l2_error(const Mesh& mesh, std::span<const Complex> u, const std::function<CVec3(const Vec3&)>& exact,
                         double z_lo, double z_hi) {
  const double h = mesh.h();
  const double tol = 1e-9 * h;
  double num = 0.0, den = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Index3 idx = mesh.cell_index(c);
    const Vec3 lo = mesh.cell_corner(idx[0], idx[1], idx[2]);
    if (lo[2] < z_lo - tol || lo[2] + h > z_hi + tol) continue;
    const auto edges = mesh.cell_edges(idx[0], idx[1], idx[2]);
    for (double gz : kGauss2)
      for (double gy : kGauss2)
        for (double gx : kGauss2) {
          const auto sh = edge_shapes({gx, gy, gz}, h);
          CVec3 eh{};
          for (int i = 0; i < 12; ++i)
            for (int d = 0; d < 3; ++d) eh[d] += u[edges[i]] * sh[i].value[d];
          const CVec3 ex = exact({lo[0] + h * gx, lo[1] + h * gy, lo[2] + h * gz});
          for (int d = 0; d < 3; ++d) {
            num += std::norm(eh[d] - ex[d]);
            den += std::norm(ex[d]);
          }
        }
  }
  if (!(den > 0.0)) throw Error("error strip contains no cells");
  return std::sqrt(num / den);
}

}  // namespace pmldd
