#pragma once

#include <array>
#include <memory>
#include <vector>

#include "pmldd/assembly.hpp"
#include "pmldd/grid.hpp"
#include "pmldd/lu.hpp"

namespace pmldd {

/// Cuboid decomposition of the cell grid. Cores partition the cells; each
/// extended box grows its core by `overlap` layers per face, clipped at the
/// mesh boundary.
struct DecompositionPlan {
  Index3 grid{1, 1, 1};
  int overlap = 1;
  std::vector<CellBox> core;
  std::vector<CellBox> extended;
  /// Per axis, start index of each part plus the end sentinel.
  std::array<std::vector<int>, 3> cuts;

  int size() const { return static_cast<int>(core.size()); }
  int subdomain_index(const Index3& p) const { return p[0] + grid[0] * (p[1] + grid[1] * p[2]); }
  /// Subdomain whose core contains the cell.
  int owner_of_cell(const Index3& cell) const;
};

DecompositionPlan plan_decomposition(const Mesh& mesh, const Index3& grid, int overlap);

/// Global ids of every edge of the extended box, increasing. This is also the
/// local edge numbering of the box's sub-mesh.
std::vector<int> build_restriction(const DecompositionPlan& plan, const Mesh& mesh, int s);

/// Boolean weights aligned with each restriction list. An edge belongs to the
/// subdomain whose core holds its lowest-id incident cell.
std::vector<std::vector<double>> build_partition_of_unity(const DecompositionPlan& plan, const Mesh& mesh);

struct LocalProblemOptions {
  InterfaceCondition ic = InterfaceCondition::Impedance;
  StretchKind stretch_kind = StretchKind::SigmaM2;
  int interface_layers = 0;
  double m2_constant = 2.0;
};

/// Faces of the extended box that lie inside the global mesh.
std::array<bool, 6> interface_faces(const DecompositionPlan& plan, const Mesh& mesh, int s);

/// Boundary setup of a subdomain's sub-mesh. Faces on the global boundary
/// inherit the global condition and the global stretching carries over.
/// Interface faces get Robin (impedance IC), or a PML of `interface_layers`
/// cells ending at the face with PEC closure (PML IC).
BoundarySetup local_boundary(const DecompositionPlan& plan, const Mesh& mesh, const BoundarySetup& global, int s,
                             const LocalProblemOptions& opts);

struct SubdomainProblem {
  int index = 0;
  CellBox box;
  std::vector<int> restriction;
  std::vector<double> weights;
  SparseMatrix matrix;
  std::unique_ptr<SparseLU> lu;
  InterfaceCondition ic = InterfaceCondition::Impedance;
  /// Set when an interface PML is at least as wide as the overlap.
  bool narrow_overlap = false;

  int size() const { return static_cast<int>(restriction.size()); }
  void factorize(Ordering ordering = Ordering::Metis) { lu = std::make_unique<SparseLU>(matrix, ordering); }
};

/// Local matrix A_s (Dirichlet-eliminated), restriction and weights. Not factorized.
SubdomainProblem build_local_problem(const DecompositionPlan& plan, const Mesh& mesh, const PhysicsSpec& phys,
                                     const BoundarySetup& global, int s, const LocalProblemOptions& opts,
                                     const std::vector<std::vector<double>>& pou);

/// All subdomain problems, built and factorized in parallel over subdomains.
std::vector<SubdomainProblem> build_subdomain_problems(const DecompositionPlan& plan, const Mesh& mesh,
                                                       const PhysicsSpec& phys, const BoundarySetup& global,
                                                       const LocalProblemOptions& opts, bool factorize = true);

}  // namespace pmldd
