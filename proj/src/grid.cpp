#include "pmldd/grid.hpp"

#include <cmath>
#include <string>

namespace pmldd {

std::string to_string(GlobalBc bc) { return bc == GlobalBc::Pml ? "pml" : "imp"; }
std::string to_string(InterfaceCondition ic) { return ic == InterfaceCondition::Pml ? "pml" : "imp"; }

void DiscretizationSpec::validate() const {
  for (double l : domain_lengths)
    if (!(l > 0.0)) throw Error("domain lengths must be positive");
  if (!(n_lambda >= 2.0)) throw Error("n_lambda must be at least 2");
  if (!(pml_wavelengths >= 0.0)) throw Error("global PML thickness must be nonnegative");
  if (interface_pml_layers < 0) throw Error("interface PML layers must be nonnegative");
  if (overlap_layers < 1) throw Error("overlap must be at least one layer");
}

Mesh::Mesh(Index3 cells, double h, Vec3 origin, std::vector<std::uint8_t> region, double background_eps_r,
           double box_eps_r)
    : cells_(cells),
      h_(h),
      origin_(origin),
      region_(std::move(region)),
      background_eps_r_(background_eps_r),
      box_eps_r_(box_eps_r) {
  const auto [nx, ny, nz] = cells_;
  if (nx < 1 || ny < 1 || nz < 1) throw Error("mesh needs at least one cell per direction");
  if (static_cast<int>(region_.size()) != nx * ny * nz) throw Error("region tag count does not match cell count");
  offset_[0] = 0;
  offset_[1] = nx * (ny + 1) * (nz + 1);
  offset_[2] = offset_[1] + (nx + 1) * ny * (nz + 1);
  offset_[3] = offset_[2] + (nx + 1) * (ny + 1) * nz;
}

Index3 Mesh::cell_index(int id) const {
  const int i = id % cells_[0];
  const int rest = id / cells_[0];
  return {i, rest % cells_[1], rest / cells_[1]};
}

int Mesh::edge_id(int axis, int i, int j, int k) const {
  const auto [nx, ny, nz] = cells_;
  switch (axis) {
    case 0:
      return i + nx * (j + (ny + 1) * k);
    case 1:
      return offset_[1] + i + (nx + 1) * (j + ny * k);
    default:
      return offset_[2] + i + (nx + 1) * (j + (ny + 1) * k);
  }
}

std::array<int, 4> Mesh::edge_location(int id) const {
  const auto [nx, ny, nz] = cells_;
  int axis = 0;
  while (id >= offset_[axis + 1]) ++axis;
  int r = id - offset_[axis];
  const int sx = axis == 0 ? nx : nx + 1;
  const int sy = axis == 1 ? ny : ny + 1;
  const int i = r % sx;
  r /= sx;
  return {axis, i, r % sy, r / sy};
}

std::array<int, 12> Mesh::cell_edges(int i, int j, int k) const {
  std::array<int, 12> e{};
  for (int c = 0; c < 2; ++c)
    for (int b = 0; b < 2; ++b) {
      e[b + 2 * c] = edge_id(0, i, j + b, k + c);
      e[4 + b + 2 * c] = edge_id(1, i + b, j, k + c);
      e[8 + b + 2 * c] = edge_id(2, i + b, j + c, k);
    }
  return e;
}

int Mesh::incident_cells(int edge, std::array<int, 4>& cell_ids, std::array<int, 4>& local) const {
  const auto [axis, i, j, k] = edge_location(edge);
  // The two transverse axes, in increasing order; the edge sits at offset
  // (p, q) in the cell spanning [v-1, v] along each.
  const int t0 = axis == 0 ? 1 : 0;
  const int t1 = axis == 2 ? 1 : 2;
  const Index3 base{i, j, k};
  int n = 0;
  for (int dq = -1; dq <= 0; ++dq)
    for (int dp = -1; dp <= 0; ++dp) {
      Index3 c = base;
      c[t0] += dp;
      c[t1] += dq;
      if (c[t0] < 0 || c[t0] >= cells_[t0] || c[t1] < 0 || c[t1] >= cells_[t1]) continue;
      cell_ids[n] = cell_id(c);
      local[n] = 4 * axis + (dp == -1 ? 1 : 0) + 2 * (dq == -1 ? 1 : 0);
      ++n;
    }
  return n;
}

bool Mesh::edge_on_face(int edge, Face f) const {
  const auto loc = edge_location(edge);
  const int a = face_axis(f);
  if (loc[0] == a) return false;
  const int plane = face_is_upper(f) ? cells_[a] : 0;
  return loc[1 + a] == plane;
}

Mesh Mesh::sub_mesh(const CellBox& box) const {
  const Index3 ext = box.extents();
  for (int d = 0; d < 3; ++d)
    if (box.lo[d] < 0 || box.hi[d] >= cells_[d] || ext[d] < 1) throw Error("sub-mesh box outside the mesh");
  std::vector<std::uint8_t> reg(static_cast<std::size_t>(ext[0]) * ext[1] * ext[2]);
  std::size_t n = 0;
  for (int k = box.lo[2]; k <= box.hi[2]; ++k)
    for (int j = box.lo[1]; j <= box.hi[1]; ++j)
      for (int i = box.lo[0]; i <= box.hi[0]; ++i) reg[n++] = region_[cell_id(i, j, k)];
  Mesh sub(ext, h_, cell_corner(box.lo[0], box.lo[1], box.lo[2]), std::move(reg), background_eps_r_, box_eps_r_);
  sub.physical_lengths = {ext[0] * h_, ext[1] * h_, ext[2] * h_};
  return sub;
}

long long count_dofs(const Index3& cells) {
  const long long nx = cells[0], ny = cells[1], nz = cells[2];
  if (nx < 1 || ny < 1 || nz < 1) throw Error("cell counts must be positive");
  return nx * (ny + 1) * (nz + 1) + (nx + 1) * ny * (nz + 1) + (nx + 1) * (ny + 1) * nz;
}

int collar_layers(double pml_wavelengths, double n_lambda) {
  // Tolerance absorbs round-off in products such as 2 * 5.
  return static_cast<int>(std::ceil(pml_wavelengths * n_lambda - 1e-9));
}

Mesh build_grid(const DiscretizationSpec& disc, const PhysicsSpec& phys, const std::optional<MaterialBox>& box,
                GlobalBc global_bc, FaceMask collar_faces) {
  disc.validate();
  phys.validate();
  if (global_bc == GlobalBc::Pml && !(disc.pml_wavelengths > 0.0))
    throw Error("a PML global boundary needs a positive PML thickness");

  const double h = disc.mesh_size(phys);
  Index3 phys_cells{};
  for (int d = 0; d < 3; ++d) phys_cells[d] = std::max(1, static_cast<int>(std::lround(disc.domain_lengths[d] / h)));

  std::array<int, 6> collar{};
  if (global_bc == GlobalBc::Pml) {
    const int layers = collar_layers(disc.pml_wavelengths, disc.n_lambda);
    for (Face f : kAllFaces)
      if (collar_faces & face_bit(f)) collar[static_cast<int>(f)] = layers;
  }

  Index3 cells{};
  Vec3 origin{};
  for (int d = 0; d < 3; ++d) {
    cells[d] = phys_cells[d] + collar[2 * d] + collar[2 * d + 1];
    origin[d] = -collar[2 * d] * h;
  }

  // Snap the inclusion to cell boundaries of the physical region.
  std::array<std::array<int, 2>, 3> box_cells{};
  if (box) {
    if (!(box->eps_r >= 1.0)) throw Error("material box eps_r must be >= 1");
    for (int d = 0; d < 3; ++d) {
      const auto [lo, hi] = box->extents[d];
      if (!(lo > 0.0 && hi < disc.domain_lengths[d] && lo < hi))
        throw Error("material box must lie strictly inside the physical region");
      box_cells[d] = {static_cast<int>(std::lround(lo / h)), static_cast<int>(std::lround(hi / h))};
      box_cells[d][1] = std::min(box_cells[d][1], phys_cells[d]);
      if (box_cells[d][1] <= box_cells[d][0]) throw Error("material box is thinner than one cell");
    }
  }

  std::vector<std::uint8_t> reg(static_cast<std::size_t>(cells[0]) * cells[1] * cells[2], region::kInterior);
  std::size_t n = 0;
  for (int k = 0; k < cells[2]; ++k)
    for (int j = 0; j < cells[1]; ++j)
      for (int i = 0; i < cells[0]; ++i, ++n) {
        const Index3 c{i, j, k};
        std::uint8_t tag = 0;
        bool in_box = box.has_value();
        for (int d = 0; d < 3; ++d) {
          if (c[d] < collar[2 * d]) tag |= region::pml_bit(make_face(d, false));
          if (c[d] >= cells[d] - collar[2 * d + 1]) tag |= region::pml_bit(make_face(d, true));
          const int p = c[d] - collar[2 * d];
          if (box && (p < box_cells[d][0] || p >= box_cells[d][1])) in_box = false;
        }
        if (in_box) {
          if (tag & region::kPmlAny) throw Error("material box extends into the PML collar");
          tag |= region::kMaterialBox;
        }
        reg[n] = tag;
      }

  Mesh mesh(cells, h, origin, std::move(reg), phys.eps_r_background, box ? box->eps_r : phys.eps_r_background);
  mesh.collar = collar;
  for (int d = 0; d < 3; ++d) mesh.physical_lengths[d] = phys_cells[d] * h;
  return mesh;
}

std::uint8_t region_at(const Mesh& mesh, const Index3& cell) {
  for (int d = 0; d < 3; ++d)
    if (cell[d] < 0 || cell[d] >= mesh.cells()[d]) throw Error("cell index out of range");
  return mesh.region_tag(mesh.cell_id(cell));
}

}  // namespace pmldd
