#include "pmldd/ddm.hpp"

#include <algorithm>
#include <exception>
#include <string>

namespace pmldd {

int DecompositionPlan::owner_of_cell(const Index3& cell) const {
  Index3 p{};
  for (int d = 0; d < 3; ++d) {
    const auto& c = cuts[d];
    p[d] = static_cast<int>(std::upper_bound(c.begin(), c.end(), cell[d]) - c.begin()) - 1;
  }
  return subdomain_index(p);
}

DecompositionPlan plan_decomposition(const Mesh& mesh, const Index3& grid, int overlap) {
  if (overlap < 1) throw Error("overlap must be at least one layer");
  DecompositionPlan plan;
  plan.grid = grid;
  plan.overlap = overlap;
  for (int d = 0; d < 3; ++d) {
    const int n = mesh.cells()[d];
    if (grid[d] < 1) throw Error("subdomain counts must be positive");
    if (grid[d] > n)
      throw Error("cannot split " + std::to_string(n) + " cells into " + std::to_string(grid[d]) + " subdomains");
    const int q = n / grid[d], rem = n % grid[d];
    plan.cuts[d].push_back(0);
    for (int p = 0; p < grid[d]; ++p) plan.cuts[d].push_back(plan.cuts[d].back() + q + (p < rem ? 1 : 0));
  }
  for (int pz = 0; pz < grid[2]; ++pz)
    for (int py = 0; py < grid[1]; ++py)
      for (int px = 0; px < grid[0]; ++px) {
        const Index3 p{px, py, pz};
        CellBox core, ext;
        for (int d = 0; d < 3; ++d) {
          core.lo[d] = plan.cuts[d][p[d]];
          core.hi[d] = plan.cuts[d][p[d] + 1] - 1;
          ext.lo[d] = std::max(0, core.lo[d] - overlap);
          ext.hi[d] = std::min(mesh.cells()[d] - 1, core.hi[d] + overlap);
        }
        plan.core.push_back(core);
        plan.extended.push_back(ext);
      }
  return plan;
}

std::vector<int> build_restriction(const DecompositionPlan& plan, const Mesh& mesh, int s) {
  const CellBox& b = plan.extended.at(s);
  std::vector<int> ids;
  ids.reserve(static_cast<std::size_t>(count_dofs(b.extents())));
  for (int axis = 0; axis < 3; ++axis) {
    Index3 hi = b.hi;
    for (int d = 0; d < 3; ++d)
      if (d != axis) hi[d] += 1;  // vertex planes
    for (int k = b.lo[2]; k <= hi[2]; ++k)
      for (int j = b.lo[1]; j <= hi[1]; ++j)
        for (int i = b.lo[0]; i <= hi[0]; ++i) ids.push_back(mesh.edge_id(axis, i, j, k));
  }
  return ids;
}

std::vector<std::vector<double>> build_partition_of_unity(const DecompositionPlan& plan, const Mesh& mesh) {
  const int n = mesh.edge_count();
  std::vector<int> owner(n);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < n; ++e) {
    std::array<int, 4> cells{}, local{};
    mesh.incident_cells(e, cells, local);
    owner[e] = plan.owner_of_cell(mesh.cell_index(cells[0]));
  }
  std::vector<std::vector<double>> w(plan.size());
  for (int s = 0; s < plan.size(); ++s) {
    const auto r = build_restriction(plan, mesh, s);
    w[s].resize(r.size());
    for (std::size_t l = 0; l < r.size(); ++l) w[s][l] = owner[r[l]] == s ? 1.0 : 0.0;
  }
  return w;
}

std::array<bool, 6> interface_faces(const DecompositionPlan& plan, const Mesh& mesh, int s) {
  const CellBox& b = plan.extended.at(s);
  std::array<bool, 6> out{};
  for (int d = 0; d < 3; ++d) {
    out[2 * d] = b.lo[d] > 0;
    out[2 * d + 1] = b.hi[d] < mesh.cells()[d] - 1;
  }
  return out;
}

BoundarySetup local_boundary(const DecompositionPlan& plan, const Mesh& mesh, const BoundarySetup& global, int s,
                             const LocalProblemOptions& opts) {
  const CellBox& b = plan.extended.at(s);
  const auto inner = interface_faces(plan, mesh, s);
  BoundarySetup bnd;
  bnd.stretch = global.stretch;
  const double h = mesh.h();
  for (Face f : kAllFaces) {
    const int fi = static_cast<int>(f);
    if (!inner[fi]) {
      bnd.faces[fi] = global.faces[fi];
      continue;
    }
    if (opts.ic == InterfaceCondition::Impedance) {
      bnd.faces[fi] = FaceCondition::Robin;
      continue;
    }
    const int a = face_axis(f);
    const int layers = opts.interface_layers;
    if (layers < 1) throw Error("PML interface conditions need at least one PML layer");
    if (layers > b.extent(a))
      throw Error("interface PML (" + std::to_string(layers) + " layers) is thicker than subdomain " +
                  std::to_string(s) + " (" + std::to_string(b.extent(a)) + " layers)");
    const double outer = mesh.origin()[a] + (face_is_upper(f) ? b.hi[a] + 1 : b.lo[a]) * h;
    const double start = face_is_upper(f) ? outer - layers * h : outer + layers * h;
    bnd.stretch.add(a, StretchProfile{opts.stretch_kind, start, outer, opts.m2_constant});
    bnd.faces[fi] = FaceCondition::Pec;
  }
  return bnd;
}

SubdomainProblem build_local_problem(const DecompositionPlan& plan, const Mesh& mesh, const PhysicsSpec& phys,
                                     const BoundarySetup& global, int s, const LocalProblemOptions& opts,
                                     const std::vector<std::vector<double>>& pou) {
  SubdomainProblem sp;
  sp.index = s;
  sp.box = plan.extended.at(s);
  sp.ic = opts.ic;
  sp.restriction = build_restriction(plan, mesh, s);
  sp.weights = pou.at(s);
  bool has_interface = false;
  for (bool f : interface_faces(plan, mesh, s)) has_interface = has_interface || f;
  sp.narrow_overlap = has_interface && opts.ic == InterfaceCondition::Pml && plan.overlap <= opts.interface_layers;

  const Mesh sub = mesh.sub_mesh(sp.box);
  const BoundarySetup bnd = local_boundary(plan, mesh, global, s, opts);
  AssembledSystem sys;
  sys.A = assemble_matrix(sub, phys, bnd);
  sys = apply_dirichlet(std::move(sys), dirichlet_mask(sub, bnd));
  sp.matrix = std::move(sys.A);
  return sp;
}

std::vector<SubdomainProblem> build_subdomain_problems(const DecompositionPlan& plan, const Mesh& mesh,
                                                       const PhysicsSpec& phys, const BoundarySetup& global,
                                                       const LocalProblemOptions& opts, bool factorize) {
  const auto pou = build_partition_of_unity(plan, mesh);
  std::vector<SubdomainProblem> subs(plan.size());
  std::vector<std::exception_ptr> errors(plan.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < plan.size(); ++s) {
    try {
      subs[s] = build_local_problem(plan, mesh, phys, global, s, opts, pou);
      if (factorize) subs[s].factorize();
    } catch (const Error& e) {
      errors[s] = std::make_exception_ptr(Error("subdomain " + std::to_string(s) + ": " + e.what()));
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return subs;
}

}  // namespace pmldd
