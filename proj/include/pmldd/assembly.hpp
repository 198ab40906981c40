#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pmldd/grid.hpp"
#include "pmldd/physics.hpp"
#include "pmldd/pml.hpp"
#include "pmldd/sparse.hpp"

namespace pmldd {

/// Condition on one face of a mesh box:
///   Natural: (curl E) x n = 0, nothing assembled
///   Robin:   (curl E) x n + i (omega / c) n x (E x n) = g
///   Pec:     n x E = 0, eliminated
enum class FaceCondition { Natural, Robin, Pec };

struct BoundarySetup {
  std::array<FaceCondition, 6> faces{FaceCondition::Robin, FaceCondition::Robin, FaceCondition::Robin,
                                     FaceCondition::Robin, FaceCondition::Robin, FaceCondition::Robin};
  StretchField stretch;

  FaceCondition face(Face f) const { return faces[static_cast<int>(f)]; }
};

/// Boundary setup of the global problem. Impedance puts Robin on every face.
/// Pml stretches every collared face (profile from the collar's inner plane to
/// the mesh boundary) and closes it with PEC; uncollared faces stay Robin.
BoundarySetup global_boundary(const Mesh& mesh, GlobalBc bc, StretchKind kind, double m2_constant = 2.0);

using ElementBlock = std::array<Complex, 144>;

/// Volume integrals of one cell, 2x2x2 Gauss:
///   curl(i,j) = int (Lambda_c curl N_i) . curl N_j
///   mass(i,j) = int (Lambda_m N_i) . N_j
struct VolumeTerms {
  ElementBlock curl{};
  ElementBlock mass{};
};
VolumeTerms volume_terms(const Mesh& mesh, int cell, const StretchField& stretch, double omega);

/// Tangential surface mass int_face (N_i x n) . (N_j x n) on a cell face, 2x2 Gauss.
std::array<double, 144> face_terms(double h, Face f);

/// Same surface term written in the stretched variables: tangential component
/// t on a face with normal axis a carries the weight Lambda_m[t] / s_a, which
/// is exactly one outside every PML layer.
ElementBlock face_terms(const Mesh& mesh, int cell, Face f, const StretchField& stretch, double omega);

/// Element matrix curl - omega^2 mu0 eps_sigma mass + i (omega / c) sum_robin face_terms.
ElementBlock element_matrix(const Mesh& mesh, int cell, const PhysicsSpec& phys, const BoundarySetup& bnd);

/// Row pattern of the edge-element matrix: each row lists the edges of all
/// cells incident to that edge.
SparseMatrix build_pattern(const Mesh& mesh);

/// Global matrix, element integration and row gathering parallel over OpenMP
/// threads. Each entry accumulates cell contributions in increasing cell id.
SparseMatrix assemble_matrix(const Mesh& mesh, const PhysicsSpec& phys, const BoundarySetup& bnd);
/// Reference cell-by-cell scatter-add; bit-identical to assemble_matrix.
SparseMatrix assemble_matrix_serial(const Mesh& mesh, const PhysicsSpec& phys, const BoundarySetup& bnd);

/// Edges lying on PEC faces.
std::vector<char> dirichlet_mask(const Mesh& mesh, const BoundarySetup& bnd);

struct AssembledSystem {
  SparseMatrix A;
  std::vector<Complex> b;
  std::vector<char> dirichlet;
  bool complex_symmetric = true;
};

/// Matrix (not yet eliminated), zero right-hand side and the PEC mask.
AssembledSystem assemble_global(const Mesh& mesh, const PhysicsSpec& phys, const BoundarySetup& bnd);

/// Symmetric elimination of homogeneous Dirichlet DoFs: masked rows and
/// columns are removed, the diagonal set to one and the load zeroed.
AssembledSystem apply_dirichlet(AssembledSystem system, const std::vector<char>& mask);

/// Robin data of the incident field E = p exp(-i k z) on the z = 0 face,
/// restricted to the non-PML part of the face. Requires a Robin z- face.
std::vector<Complex> assemble_rhs_planewave(const Mesh& mesh, const PhysicsSpec& phys, const BoundarySetup& bnd,
                                            const Vec3& polarization);

/// Robin datum g = (curl E) x n + i k n x (E x n) of the incident plane wave at
/// a point of the z- face (n = -z).
CVec3 planewave_robin_data(const PhysicsSpec& phys, const Vec3& polarization, const Vec3& x);

/// SplitMix64 entries, real and imaginary parts uniform in [-1, 1), drawn in
/// DoF order; entries flagged in `dirichlet` are zeroed.
std::vector<Complex> assemble_rhs_random(int n, std::uint64_t seed, const std::vector<char>& dirichlet);

}  // namespace pmldd
