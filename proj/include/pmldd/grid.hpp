#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pmldd/physics.hpp"
#include "pmldd/types.hpp"

namespace pmldd {

struct DiscretizationSpec {
  Vec3 domain_lengths{1.0, 1.0, 1.0};
  double n_lambda = 5.0;
  double pml_wavelengths = 0.0;  // global PML thickness in wavelengths
  int interface_pml_layers = 0;
  int overlap_layers = 1;

  double mesh_size(const PhysicsSpec& phys) const { return phys.wavelength() / n_lambda; }
  void validate() const;
};

/// Dielectric inclusion, extents given in physical coordinates (the physical
/// region spans [0, L] per axis).
struct MaterialBox {
  double eps_r = 1.0;
  std::array<std::array<double, 2>, 3> extents{};
};

namespace region {
inline constexpr std::uint8_t kInterior = 0;
inline constexpr std::uint8_t kPmlXMinus = 1u << 0;
inline constexpr std::uint8_t kPmlXPlus = 1u << 1;
inline constexpr std::uint8_t kPmlYMinus = 1u << 2;
inline constexpr std::uint8_t kPmlYPlus = 1u << 3;
inline constexpr std::uint8_t kPmlZMinus = 1u << 4;
inline constexpr std::uint8_t kPmlZPlus = 1u << 5;
inline constexpr std::uint8_t kMaterialBox = 1u << 6;
inline constexpr std::uint8_t kPmlAny = 0x3f;

constexpr std::uint8_t pml_bit(Face f) { return static_cast<std::uint8_t>(1u << static_cast<int>(f)); }
}  // namespace region

/// Inclusive box of cell indices.
struct CellBox {
  Index3 lo{0, 0, 0};
  Index3 hi{0, 0, 0};

  int extent(int axis) const { return hi[axis] - lo[axis] + 1; }
  Index3 extents() const { return {extent(0), extent(1), extent(2)}; }
  bool contains(const Index3& c) const {
    for (int d = 0; d < 3; ++d)
      if (c[d] < lo[d] || c[d] > hi[d]) return false;
    return true;
  }
  long long cell_count() const { return 1LL * extent(0) * extent(1) * extent(2); }
  bool operator==(const CellBox&) const = default;
};

/// Bit mask over faces; bit f set means a PML collar is placed on face f.
using FaceMask = std::uint8_t;
inline constexpr FaceMask kAllFacesMask = 0x3f;
constexpr FaceMask face_bit(Face f) { return static_cast<FaceMask>(1u << static_cast<int>(f)); }

/// Structured hexahedral grid with lowest-order edge DoFs.
///
/// Edges are numbered x-edges first, then y-edges, then z-edges; within each
/// block lexicographically with x fastest. Every edge is oriented along the
/// positive axis direction (lower to higher vertex index).
class Mesh {
 public:
  Mesh() = default;
  Mesh(Index3 cells, double h, Vec3 origin, std::vector<std::uint8_t> region, double background_eps_r,
       double box_eps_r);

  const Index3& cells() const { return cells_; }
  double h() const { return h_; }
  const Vec3& origin() const { return origin_; }

  int cell_count() const { return cells_[0] * cells_[1] * cells_[2]; }
  int edge_count() const { return offset_[3]; }
  int axis_edge_offset(int axis) const { return offset_[axis]; }

  int cell_id(int i, int j, int k) const { return i + cells_[0] * (j + cells_[1] * k); }
  int cell_id(const Index3& c) const { return cell_id(c[0], c[1], c[2]); }
  Index3 cell_index(int id) const;

  /// Global id of the axis-directed edge whose lower vertex is (i, j, k).
  int edge_id(int axis, int i, int j, int k) const;
  /// Inverse of edge_id: returns {axis, i, j, k}.
  std::array<int, 4> edge_location(int id) const;

  /// The 12 global edge ids of a cell in local order: x-edges (y,z offsets
  /// b + 2c), y-edges 4 + (a + 2c), z-edges 8 + (a + 2b).
  std::array<int, 12> cell_edges(int i, int j, int k) const;

  /// Cells sharing an edge, in increasing cell id, with the edge's local index
  /// in each. Returns the number of incident cells (1 to 4).
  int incident_cells(int edge, std::array<int, 4>& cell_ids, std::array<int, 4>& local) const;

  std::uint8_t region_tag(int cell) const { return region_[cell]; }
  const std::vector<std::uint8_t>& regions() const { return region_; }
  double eps_r(int cell) const {
    return (region_[cell] & region::kMaterialBox) ? box_eps_r_ : background_eps_r_;
  }
  double background_eps_r() const { return background_eps_r_; }
  double box_eps_r() const { return box_eps_r_; }

  /// Lower corner of a cell in physical coordinates.
  Vec3 cell_corner(int i, int j, int k) const {
    return {origin_[0] + i * h_, origin_[1] + j * h_, origin_[2] + k * h_};
  }
  /// Coordinate of the mesh boundary plane on a face.
  double face_coordinate(Face f) const {
    const int a = face_axis(f);
    return origin_[a] + (face_is_upper(f) ? cells_[a] * h_ : 0.0);
  }

  /// True when the edge lies in the plane of the given boundary face (and is
  /// therefore tangential to it).
  bool edge_on_face(int edge, Face f) const;

  /// Extract the cells of a box as a standalone mesh. Local edge ids of the
  /// result follow the same convention, so they enumerate the box's edges in
  /// increasing global id.
  Mesh sub_mesh(const CellBox& box) const;

  CellBox full_box() const { return {{0, 0, 0}, {cells_[0] - 1, cells_[1] - 1, cells_[2] - 1}}; }

  /// PML collar thickness (in cell layers) on each face; zero for sub-meshes.
  std::array<int, 6> collar{};
  /// Realized physical lengths (round(L/h) * h).
  Vec3 physical_lengths{};

 private:
  Index3 cells_{0, 0, 0};
  double h_ = 0.0;
  Vec3 origin_{};
  std::array<int, 4> offset_{};
  std::vector<std::uint8_t> region_;
  double background_eps_r_ = 1.0;
  double box_eps_r_ = 1.0;
};

/// Closed-form number of edges of a structured grid.
long long count_dofs(const Index3& cells);

/// Builds the global mesh. With GlobalBc::Pml a collar of
/// ceil(pml_wavelengths * n_lambda) layers is added on every face in
/// `collar_faces`.
Mesh build_grid(const DiscretizationSpec& disc, const PhysicsSpec& phys, const std::optional<MaterialBox>& box,
                GlobalBc global_bc, FaceMask collar_faces = kAllFacesMask);

/// Region tag of a cell; throws on out-of-range indices.
std::uint8_t region_at(const Mesh& mesh, const Index3& cell);

/// Number of collar layers for a PML thickness given in wavelengths.
int collar_layers(double pml_wavelengths, double n_lambda);

}  // namespace pmldd
