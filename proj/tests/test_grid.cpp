#include <set>
#include <tuple>

#include "doctest.h"
#include "pmldd/grid.hpp"

using namespace pmldd;

namespace {

// Edges of the vertex lattice as unordered vertex pairs.
std::size_t lattice_edges(const Index3& n) {
  std::set<std::tuple<int, int, int, int>> edges;
  for (int k = 0; k <= n[2]; ++k)
    for (int j = 0; j <= n[1]; ++j)
      for (int i = 0; i <= n[0]; ++i) {
        if (i < n[0]) edges.insert({0, i, j, k});
        if (j < n[1]) edges.insert({1, i, j, k});
        if (k < n[2]) edges.insert({2, i, j, k});
      }
  return edges.size();
}

Mesh plain_mesh(const Index3& cells, double h = 1.0) {
  return Mesh(cells, h, {0.0, 0.0, 0.0}, std::vector<std::uint8_t>(cells[0] * cells[1] * cells[2], 0), 1.0, 1.0);
}

PhysicsSpec freq(double f) {
  PhysicsSpec p;
  p.frequency = f;
  return p;
}

}  // namespace

TEST_CASE("edge counts") {
  CHECK(count_dofs({1, 1, 1}) == 12);
  CHECK(count_dofs({2, 2, 2}) == 54);
  CHECK(count_dofs({25, 25, 25}) == 50700);
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      for (int c = 1; c <= 4; ++c) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(c);
        CHECK(count_dofs({a, b, c}) == static_cast<long long>(lattice_edges({a, b, c})));
        CHECK(plain_mesh({a, b, c}).edge_count() == count_dofs({a, b, c}));
      }
}

TEST_CASE("large grid with a two-wavelength collar") {
  DiscretizationSpec d;
  d.domain_lengths = {10.0, 10.0, 10.0};
  d.n_lambda = 5;
  d.pml_wavelengths = 2.0;
  const PhysicsSpec p = freq(0.5);
  CHECK(p.wavelength() == doctest::Approx(2.0));
  CHECK(d.mesh_size(p) == doctest::Approx(0.4));
  const Mesh m = build_grid(d, p, std::nullopt, GlobalBc::Pml);
  CHECK(m.cells() == Index3{45, 45, 45});
  for (int c : m.collar) CHECK(c == 10);
  CHECK(m.origin()[0] == doctest::Approx(-4.0));
  CHECK(m.physical_lengths[0] == doctest::Approx(10.0));

  const Mesh imp = build_grid(d, p, std::nullopt, GlobalBc::Impedance);
  CHECK(imp.cells() == Index3{25, 25, 25});
  CHECK(imp.edge_count() == 50700);

  const Mesh open_bottom =
      build_grid(d, p, std::nullopt, GlobalBc::Pml, kAllFacesMask & ~face_bit(Face::ZMinus));
  CHECK(open_bottom.cells() == Index3{45, 45, 35});
  CHECK(open_bottom.origin()[2] == 0.0);
}

TEST_CASE("cell counts round the requested length") {
  DiscretizationSpec d;
  d.domain_lengths = {1.04, 0.96, 0.05};
  d.n_lambda = 10;
  const Mesh m = build_grid(d, freq(1.0), std::nullopt, GlobalBc::Impedance);
  CHECK(m.cells() == Index3{10, 10, 1});
  for (int a = 0; a < 3; ++a) CHECK(std::abs(m.physical_lengths[a] - d.domain_lengths[a]) <= m.h() / 2 + 1e-12);
}

TEST_CASE("region tags") {
  DiscretizationSpec d;
  d.domain_lengths = {4.0, 4.0, 4.0};
  d.n_lambda = 5;
  d.pml_wavelengths = 0.4;  // 2 layers
  MaterialBox box;
  box.eps_r = 4.0;
  box.extents = {{{1.0, 3.0}, {1.0, 3.0}, {1.6, 2.4}}};
  const Mesh m = build_grid(d, freq(1.0), box, GlobalBc::Pml);
  REQUIRE(m.cells() == Index3{24, 24, 24});

  CHECK(region_at(m, {12, 12, 12}) == region::kMaterialBox);
  CHECK(region_at(m, {12, 12, 3}) == region::kInterior);
  CHECK(region_at(m, {0, 0, 0}) == (region::kPmlXMinus | region::kPmlYMinus | region::kPmlZMinus));
  CHECK(region_at(m, {23, 5, 5}) == region::kPmlXPlus);
  CHECK(m.eps_r(m.cell_id(12, 12, 12)) == 4.0);
  CHECK(m.eps_r(m.cell_id(3, 3, 3)) == 1.0);
  CHECK_THROWS_AS(region_at(m, {24, 0, 0}), Error);

  // PML tags only within the outer collar layers of their direction.
  for (int c = 0; c < m.cell_count(); ++c) {
    const Index3 idx = m.cell_index(c);
    const std::uint8_t t = m.region_tag(c);
    for (Face f : kAllFaces) {
      const int a = face_axis(f);
      const int depth = face_is_upper(f) ? m.cells()[a] - 1 - idx[a] : idx[a];
      CHECK(((t & region::pml_bit(f)) != 0) == (depth < 2));
    }
  }

  // Box snapped to cell boundaries: z from 1.6 to 2.4 is cells 8..11 of the
  // physical region, offset by the collar.
  for (int k = 0; k < m.cells()[2]; ++k) {
    const bool inside = k >= 2 + 8 && k < 2 + 12;
    CHECK(((region_at(m, {12, 12, k}) & region::kMaterialBox) != 0) == inside);
  }
}

TEST_CASE("region tagging is repeatable") {
  DiscretizationSpec d;
  d.domain_lengths = {2.0, 3.0, 2.0};
  d.n_lambda = 4;
  d.pml_wavelengths = 0.5;
  MaterialBox box;
  box.extents = {{{0.5, 1.5}, {1.0, 2.0}, {0.5, 1.5}}};
  box.eps_r = 2.0;
  const Mesh a = build_grid(d, freq(1.0), box, GlobalBc::Pml);
  const Mesh b = build_grid(d, freq(1.0), box, GlobalBc::Pml);
  CHECK(a.regions() == b.regions());
  for (int c = a.cell_count() - 1; c >= 0; --c) CHECK(region_at(a, a.cell_index(c)) == a.region_tag(c));
}

TEST_CASE("material box validation") {
  DiscretizationSpec d;
  d.domain_lengths = {2.0, 2.0, 2.0};
  d.n_lambda = 5;
  MaterialBox box;
  box.extents = {{{0.0, 1.0}, {0.5, 1.5}, {0.5, 1.5}}};
  CHECK_THROWS_AS(build_grid(d, freq(1.0), box, GlobalBc::Impedance), Error);
  box.extents = {{{0.5, 0.52}, {0.5, 1.5}, {0.5, 1.5}}};
  CHECK_THROWS_AS(build_grid(d, freq(1.0), box, GlobalBc::Impedance), Error);
}

TEST_CASE("edge enumeration is a bijection") {
  for (const Index3 n : {Index3{1, 1, 1}, Index3{3, 2, 4}, Index3{4, 4, 4}}) {
    const Mesh m = plain_mesh(n);
    std::vector<int> seen(m.edge_count(), 0);
    for (int c = 0; c < m.cell_count(); ++c) {
      const Index3 idx = m.cell_index(c);
      CHECK(m.cell_id(idx) == c);
      const auto edges = m.cell_edges(idx[0], idx[1], idx[2]);
      CHECK(std::set<int>(edges.begin(), edges.end()).size() == 12);
      for (int l = 0; l < 12; ++l) {
        ++seen[edges[l]];
        std::array<int, 4> cells{}, local{};
        const int nc = m.incident_cells(edges[l], cells, local);
        bool found = false;
        for (int q = 0; q < nc; ++q) found = found || (cells[q] == c && local[q] == l);
        CHECK(found);
      }
    }
    for (int e = 0; e < m.edge_count(); ++e) {
      std::array<int, 4> cells{}, local{};
      const int nc = m.incident_cells(e, cells, local);
      CHECK(seen[e] == nc);
      CHECK(nc >= 1);
      CHECK(nc <= 4);
      for (int q = 1; q < nc; ++q) CHECK(cells[q - 1] < cells[q]);
      const auto loc = m.edge_location(e);
      CHECK(m.edge_id(loc[0], loc[1], loc[2], loc[3]) == e);
    }
  }
}

TEST_CASE("sub-mesh numbering follows global order") {
  const Mesh m = plain_mesh({5, 4, 3}, 0.5);
  const CellBox box{{1, 1, 0}, {3, 2, 2}};
  const Mesh s = m.sub_mesh(box);
  CHECK(s.cells() == Index3{3, 2, 3});
  CHECK(s.origin()[0] == doctest::Approx(0.5));
  int prev = -1;
  for (int e = 0; e < s.edge_count(); ++e) {
    const auto loc = s.edge_location(e);
    const int g = m.edge_id(loc[0], loc[1] + box.lo[0], loc[2] + box.lo[1], loc[3] + box.lo[2]);
    CHECK(g > prev);
    prev = g;
  }
  CHECK_THROWS_AS(m.sub_mesh({{0, 0, 0}, {5, 1, 1}}), Error);
}

TEST_CASE("edges on boundary faces") {
  const Mesh m = plain_mesh({2, 2, 2});
  int on_zminus = 0;
  for (int e = 0; e < m.edge_count(); ++e)
    if (m.edge_on_face(e, Face::ZMinus)) {
      ++on_zminus;
      CHECK(m.edge_location(e)[0] != 2);
      CHECK(m.edge_location(e)[3] == 0);
    }
  CHECK(on_zminus == 12);
}

TEST_CASE("collar layer count") {
  CHECK(collar_layers(2.0, 5.0) == 10);
  CHECK(collar_layers(1.0, 5.0) == 5);
  CHECK(collar_layers(0.5, 5.0) == 3);
  CHECK(collar_layers(0.0, 5.0) == 0);
}

TEST_CASE("discretization validation") {
  DiscretizationSpec d;
  d.n_lambda = 1.0;
  CHECK_THROWS_AS(d.validate(), Error);
  d.n_lambda = 5.0;
  d.domain_lengths = {1.0, 0.0, 1.0};
  CHECK_THROWS_AS(d.validate(), Error);
  d.domain_lengths = {1.0, 1.0, 1.0};
  d.overlap_layers = 0;
  CHECK_THROWS_AS(d.validate(), Error);
  d.overlap_layers = 1;
  CHECK_NOTHROW(d.validate());
  CHECK_THROWS_AS(build_grid(d, freq(1.0), std::nullopt, GlobalBc::Pml), Error);
}
