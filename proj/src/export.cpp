#include "pmldd/export.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

#include "pmldd/edge_element.hpp"

namespace pmldd {

CVec3 cell_center_field(const Mesh& mesh, std::span<const Complex> u, int cell) {
  const Index3 c = mesh.cell_index(cell);
  const auto edges = mesh.cell_edges(c[0], c[1], c[2]);
  const auto sh = edge_shapes({0.5, 0.5, 0.5}, mesh.h());
  CVec3 e{};
  for (int i = 0; i < 12; ++i)
    for (int d = 0; d < 3; ++d) e[d] += u[edges[i]] * sh[i].value[d];
  return e;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

}  // namespace

void export_fields(const Mesh& mesh, std::span<const Complex> u, const std::string& path, FieldFormat format) {
  if (static_cast<int>(u.size()) != mesh.edge_count())
    throw Error("field export: solution has " + std::to_string(u.size()) + " entries, mesh has " +
                std::to_string(mesh.edge_count()) + " edges");
  const int n = mesh.cell_count();
  std::vector<CVec3> field(n);
  for (int c = 0; c < n; ++c) field[c] = cell_center_field(mesh, u, c);

  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "w"));
  if (!f) throw Error("cannot open " + path + " for writing");
  std::FILE* out = f.get();
  const Index3& cells = mesh.cells();
  const Vec3& o = mesh.origin();
  const double h = mesh.h();
  static const char* names[6] = {"Ex_re", "Ex_im", "Ey_re", "Ey_im", "Ez_re", "Ez_im"};
  auto component = [&](const CVec3& e, int k) { return k % 2 == 0 ? e[k / 2].real() : e[k / 2].imag(); };

  if (format == FieldFormat::Vtk) {
    std::fprintf(out, "# vtk DataFile Version 3.0\n");
    std::fprintf(out, "edge element E field, cell centred\n");
    std::fprintf(out, "ASCII\nDATASET STRUCTURED_POINTS\n");
    std::fprintf(out, "DIMENSIONS %d %d %d\n", cells[0] + 1, cells[1] + 1, cells[2] + 1);
    std::fprintf(out, "ORIGIN %.17g %.17g %.17g\n", o[0], o[1], o[2]);
    std::fprintf(out, "SPACING %.17g %.17g %.17g\n", h, h, h);
    std::fprintf(out, "CELL_DATA %d\n", n);
    for (int k = 0; k < 6; ++k) {
      std::fprintf(out, "SCALARS %s double 1\nLOOKUP_TABLE default\n", names[k]);
      for (int c = 0; c < n; ++c) std::fprintf(out, "%.9g\n", component(field[c], k));
    }
  } else {
    std::fprintf(out, "x,y,z");
    for (const char* name : names) std::fprintf(out, ",%s", name);
    std::fprintf(out, "\n");
    for (int c = 0; c < n; ++c) {
      const Index3 idx = mesh.cell_index(c);
      const Vec3 lo = mesh.cell_corner(idx[0], idx[1], idx[2]);
      std::fprintf(out, "%.9g,%.9g,%.9g", lo[0] + h / 2, lo[1] + h / 2, lo[2] + h / 2);
      for (int k = 0; k < 6; ++k) std::fprintf(out, ",%.9g", component(field[c], k));
      std::fprintf(out, "\n");
    }
  }
  if (std::ferror(out)) throw Error("failed writing " + path);
}

std::string field_path_for_row(const std::string& base, int overlap, bool sweep) {
  if (!sweep) return base;
  std::filesystem::path p(base);
  const std::string stem = p.stem().string() + "_ov" + std::to_string(overlap);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

}  // namespace pmldd
