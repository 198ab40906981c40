#include "pmldd/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "pmldd/edge_element.hpp"
#include "pmldd/rng.hpp"

namespace pmldd {

BoundarySetup global_boundary(const Mesh& mesh, GlobalBc bc, StretchKind kind, double m2_constant) {
  BoundarySetup bnd;
  if (bc == GlobalBc::Impedance) return bnd;
  if (kind == StretchKind::None) throw Error("a PML global boundary needs a stretching function");
  const double h = mesh.h();
  for (Face f : kAllFaces) {
    const int layers = mesh.collar[static_cast<int>(f)];
    if (layers == 0) continue;
    const int a = face_axis(f);
    const double outer = mesh.face_coordinate(f);
    const double inner = face_is_upper(f) ? outer - layers * h : outer + layers * h;
    bnd.stretch.add(a, StretchProfile{kind, inner, outer, m2_constant});
    bnd.faces[static_cast<int>(f)] = FaceCondition::Pec;
  }
  return bnd;
}

VolumeTerms volume_terms(const Mesh& mesh, int cell, const StretchField& stretch, double omega) {
  const double h = mesh.h();
  const Index3 c = mesh.cell_index(cell);
  const Vec3 corner = mesh.cell_corner(c[0], c[1], c[2]);
  const double w = h * h * h / 8.0;
  VolumeTerms t;
  for (double gz : kGauss2)
    for (double gy : kGauss2)
      for (double gx : kGauss2) {
        const Vec3 ref{gx, gy, gz};
        const Vec3 x{corner[0] + h * gx, corner[1] + h * gy, corner[2] + h * gz};
        const PmlTensors lam = pml_tensors(stretch.state_at(x, omega));
        const auto sh = edge_shapes(ref, h);
        for (int i = 0; i < 12; ++i) {
          CVec3 wc{}, wm{};
          for (int d = 0; d < 3; ++d) {
            wc[d] = w * lam.curl[d] * sh[i].curl[d];
            wm[d] = w * lam.mass[d] * sh[i].value[d];
          }
          for (int j = i; j < 12; ++j) {
            Complex kc(0.0), km(0.0);
            for (int d = 0; d < 3; ++d) {
              kc += wc[d] * sh[j].curl[d];
              km += wm[d] * sh[j].value[d];
            }
            t.curl[i * 12 + j] += kc;
            t.mass[i * 12 + j] += km;
          }
        }
      }
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < i; ++j) {
      t.curl[i * 12 + j] = t.curl[j * 12 + i];
      t.mass[i * 12 + j] = t.mass[j * 12 + i];
    }
  return t;
}

std::array<double, 144> face_terms(double h, Face f) {
  const int a = face_axis(f);
  const double plane = face_is_upper(f) ? 1.0 : 0.0;
  const double w = h * h / 4.0;
  std::array<double, 144> b{};
  for (double g1 : kGauss2)
    for (double g0 : kGauss2) {
      Vec3 ref{};
      ref[a] = plane;
      ref[(a + 1) % 3] = g0;
      ref[(a + 2) % 3] = g1;
      const auto sh = edge_shapes(ref, h);
      for (int i = 0; i < 12; ++i)
        for (int j = i; j < 12; ++j) {
          double s = 0.0;
          for (int d = 0; d < 3; ++d)
            if (d != a) s += sh[i].value[d] * sh[j].value[d];
          b[i * 12 + j] += w * s;
        }
    }
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < i; ++j) b[i * 12 + j] = b[j * 12 + i];
  return b;
}

ElementBlock face_terms(const Mesh& mesh, int cell, Face f, const StretchField& stretch, double omega) {
  const double h = mesh.h();
  const Index3 c = mesh.cell_index(cell);
  const Vec3 corner = mesh.cell_corner(c[0], c[1], c[2]);
  const int a = face_axis(f);
  const double plane = face_is_upper(f) ? 1.0 : 0.0;
  const double w = h * h / 4.0;
  ElementBlock b{};
  for (double g1 : kGauss2)
    for (double g0 : kGauss2) {
      Vec3 ref{};
      ref[a] = plane;
      ref[(a + 1) % 3] = g0;
      ref[(a + 2) % 3] = g1;
      const Vec3 x{corner[0] + h * ref[0], corner[1] + h * ref[1], corner[2] + h * ref[2]};
      const StretchState st = stretch.state_at(x, omega);
      const PmlTensors lam = pml_tensors(st);
      CVec3 weight{};
      for (int d = 0; d < 3; ++d) weight[d] = d == a ? Complex(0.0) : w * lam.mass[d] / st.s[a];
      const auto sh = edge_shapes(ref, h);
      for (int i = 0; i < 12; ++i)
        for (int j = i; j < 12; ++j) {
          Complex s(0.0);
          for (int d = 0; d < 3; ++d)
            if (d != a) s += weight[d] * sh[i].value[d] * sh[j].value[d];
          b[i * 12 + j] += s;
        }
    }
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < i; ++j) b[i * 12 + j] = b[j * 12 + i];
  return b;
}

namespace {

// Robin faces of the mesh boundary that this cell touches.
std::uint8_t robin_faces(const Mesh& mesh, const BoundarySetup& bnd, const Index3& c) {
  std::uint8_t m = 0;
  for (Face f : kAllFaces) {
    if (bnd.face(f) != FaceCondition::Robin) continue;
    const int a = face_axis(f);
    const int plane = face_is_upper(f) ? mesh.cells()[a] - 1 : 0;
    if (c[a] == plane) m |= face_bit(f);
  }
  return m;
}

bool cell_is_stretched(const Mesh& mesh, const StretchField& stretch, const Index3& c) {
  const Vec3 lo = mesh.cell_corner(c[0], c[1], c[2]);
  const Vec3 hi{lo[0] + mesh.h(), lo[1] + mesh.h(), lo[2] + mesh.h()};
  return stretch.touches(lo, hi);
}

}  // namespace

ElementBlock element_matrix(const Mesh& mesh, int cell, const PhysicsSpec& phys, const BoundarySetup& bnd) {
  const VolumeTerms v = volume_terms(mesh, cell, bnd.stretch, phys.omega());
  const Complex cm = phys.mass_coefficient(mesh.eps_r(cell));
  ElementBlock e{};
  for (int p = 0; p < 144; ++p) e[p] = v.curl[p] - cm * v.mass[p];
  const std::uint8_t faces = robin_faces(mesh, bnd, mesh.cell_index(cell));
  if (faces) {
    const Complex ik(0.0, phys.omega() / phys.wave_speed);
    for (Face f : kAllFaces) {
      if (!(faces & face_bit(f))) continue;
      const auto b = face_terms(mesh, cell, f, bnd.stretch, phys.omega());
      for (int p = 0; p < 144; ++p) e[p] += ik * b[p];
    }
  }
  return e;
}

SparseMatrix build_pattern(const Mesh& mesh) {
  const int n = mesh.edge_count();
  auto row_entries = [&](int e, std::array<int, 48>& buf) {
    std::array<int, 4> cells{}, local{};
    const int nc = mesh.incident_cells(e, cells, local);
    int len = 0;
    for (int q = 0; q < nc; ++q) {
      const Index3 c = mesh.cell_index(cells[q]);
      for (int id : mesh.cell_edges(c[0], c[1], c[2])) buf[len++] = id;
    }
    std::sort(buf.begin(), buf.begin() + len);
    return static_cast<int>(std::unique(buf.begin(), buf.begin() + len) - buf.begin());
  };

  std::vector<int> ptr(n + 1, 0);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < n; ++e) {
    std::array<int, 48> buf{};
    ptr[e + 1] = row_entries(e, buf);
  }
  for (int e = 0; e < n; ++e) ptr[e + 1] += ptr[e];
  std::vector<int> cols(ptr[n]);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < n; ++e) {
    std::array<int, 48> buf{};
    const int len = row_entries(e, buf);
    std::copy(buf.begin(), buf.begin() + len, cols.begin() + ptr[e]);
  }
  std::vector<Complex> vals(cols.size());
  return SparseMatrix(n, std::move(ptr), std::move(cols), std::move(vals));
}

SparseMatrix assemble_matrix(const Mesh& mesh, const PhysicsSpec& phys, const BoundarySetup& bnd) {
  SparseMatrix A = build_pattern(mesh);
  const int ncell = mesh.cell_count();

  // Unstretched cells with equal permittivity and Robin faces share one
  // element matrix; stretched cells get their own.
  std::vector<int> slot(ncell);
  std::vector<int> representative;
  std::map<std::pair<double, std::uint8_t>, int> shared;
  for (int c = 0; c < ncell; ++c) {
    const Index3 idx = mesh.cell_index(c);
    if (cell_is_stretched(mesh, bnd.stretch, idx)) {
      slot[c] = static_cast<int>(representative.size());
      representative.push_back(c);
      continue;
    }
    const auto key = std::make_pair(mesh.eps_r(c), robin_faces(mesh, bnd, idx));
    const auto [it, inserted] = shared.try_emplace(key, static_cast<int>(representative.size()));
    if (inserted) representative.push_back(c);
    slot[c] = it->second;
  }

  std::vector<ElementBlock> elems(representative.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long s = 0; s < static_cast<long>(representative.size()); ++s)
    elems[s] = element_matrix(mesh, representative[s], phys, bnd);

  const auto& ptr = A.row_ptr();
  const auto& cols = A.cols();
  auto& vals = A.values();
#pragma omp parallel for schedule(static)
  for (int e = 0; e < A.rows(); ++e) {
    std::array<int, 4> cells{}, local{};
    const int nc = mesh.incident_cells(e, cells, local);
    const auto first = cols.begin() + ptr[e];
    const auto last = cols.begin() + ptr[e + 1];
    for (int q = 0; q < nc; ++q) {
      const Index3 c = mesh.cell_index(cells[q]);
      const auto edges = mesh.cell_edges(c[0], c[1], c[2]);
      const ElementBlock& el = elems[slot[cells[q]]];
      for (int m = 0; m < 12; ++m) {
        const auto pos = std::lower_bound(first, last, edges[m]) - cols.begin();
        vals[pos] += el[local[q] * 12 + m];
      }
    }
  }
  A.prune_zeros();
  return A;
}

SparseMatrix assemble_matrix_serial(const Mesh& mesh, const PhysicsSpec& phys, const BoundarySetup& bnd) {
  SparseMatrix A = build_pattern(mesh);
  auto& vals = A.values();
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Index3 idx = mesh.cell_index(c);
    const auto edges = mesh.cell_edges(idx[0], idx[1], idx[2]);
    const ElementBlock el = element_matrix(mesh, c, phys, bnd);
    for (int l = 0; l < 12; ++l)
      for (int m = 0; m < 12; ++m) vals[A.find(edges[l], edges[m])] += el[l * 12 + m];
  }
  A.prune_zeros();
  return A;
}

std::vector<char> dirichlet_mask(const Mesh& mesh, const BoundarySetup& bnd) {
  std::vector<char> mask(mesh.edge_count(), 0);
  for (Face f : kAllFaces) {
    if (bnd.face(f) != FaceCondition::Pec) continue;
    for (int e = 0; e < mesh.edge_count(); ++e)
      if (mesh.edge_on_face(e, f)) mask[e] = 1;
  }
  return mask;
}

AssembledSystem assemble_global(const Mesh& mesh, const PhysicsSpec& phys, const BoundarySetup& bnd) {
  AssembledSystem sys;
  sys.A = assemble_matrix(mesh, phys, bnd);
  sys.b.assign(mesh.edge_count(), Complex(0.0));
  sys.dirichlet = dirichlet_mask(mesh, bnd);
  return sys;
}

AssembledSystem apply_dirichlet(AssembledSystem system, const std::vector<char>& mask) {
  const int n = system.A.rows();
  if (static_cast<int>(mask.size()) != n) throw Error("Dirichlet mask size does not match the system");
  if (system.b.empty()) system.b.assign(n, Complex(0.0));
  if (system.dirichlet.size() != mask.size()) system.dirichlet.assign(n, 0);
  const auto& ptr = system.A.row_ptr();
  const auto& cols = system.A.cols();
  const auto& vals = system.A.values();
  std::vector<int> new_ptr(n + 1, 0), new_cols;
  std::vector<Complex> new_vals;
  new_cols.reserve(cols.size());
  new_vals.reserve(vals.size());
  for (int i = 0; i < n; ++i) {
    if (mask[i]) {
      new_cols.push_back(i);
      new_vals.emplace_back(1.0);
      system.b[i] = 0.0;
      system.dirichlet[i] = 1;
    } else {
      for (int p = ptr[i]; p < ptr[i + 1]; ++p) {
        if (mask[cols[p]]) continue;
        new_cols.push_back(cols[p]);
        new_vals.push_back(vals[p]);
      }
    }
    new_ptr[i + 1] = static_cast<int>(new_cols.size());
  }
  system.A = SparseMatrix(n, std::move(new_ptr), std::move(new_cols), std::move(new_vals));
  return system;
}

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

CVec3 cross(const CVec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

CVec3 cross(const Vec3& a, const CVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

CVec3 planewave_robin_data(const PhysicsSpec& phys, const Vec3& p, const Vec3& x) {
  const double k = phys.wavenumber();
  const Vec3 n{0.0, 0.0, -1.0};
  const Complex phase = std::exp(Complex(0.0, -k * x[2]));
  // curl(p e^{-ikz}) = grad(e^{-ikz}) x p = -ik (z_hat x p) e^{-ikz}
  const Vec3 zxp = cross(Vec3{0.0, 0.0, 1.0}, p);
  CVec3 curl_e{}, e{};
  for (int d = 0; d < 3; ++d) {
    curl_e[d] = Complex(0.0, -k) * zxp[d] * phase;
    e[d] = p[d] * phase;
  }
  const CVec3 t1 = cross(curl_e, n);
  const CVec3 t2 = cross(n, cross(e, n));
  const Complex ik(0.0, phys.omega() / phys.wave_speed);
  return {t1[0] + ik * t2[0], t1[1] + ik * t2[1], t1[2] + ik * t2[2]};
}

std::vector<Complex> assemble_rhs_planewave(const Mesh& mesh, const PhysicsSpec& phys, const BoundarySetup& bnd,
                                            const Vec3& polarization) {
  if (bnd.face(Face::ZMinus) != FaceCondition::Robin)
    throw Error("plane-wave excitation needs an impedance condition on the z = 0 face");
  const double pn = std::hypot(polarization[0], polarization[1], polarization[2]);
  if (!(pn > 0.0) || std::abs(polarization[2]) > 1e-12 * pn)
    throw Error("polarization must be tangential to the excitation face (z component zero)");
  const Vec3 p{polarization[0] / pn, polarization[1] / pn, 0.0};

  const double h = mesh.h();
  const double w = h * h / 4.0;
  std::vector<Complex> b(mesh.edge_count(), Complex(0.0));
  for (int j = 0; j < mesh.cells()[1]; ++j)
    for (int i = 0; i < mesh.cells()[0]; ++i) {
      const int cell = mesh.cell_id(i, j, 0);
      if (mesh.region_tag(cell) & region::kPmlAny) continue;
      const Vec3 corner = mesh.cell_corner(i, j, 0);
      const auto edges = mesh.cell_edges(i, j, 0);
      for (double gy : kGauss2)
        for (double gx : kGauss2) {
          const Vec3 ref{gx, gy, 0.0};
          const Vec3 x{corner[0] + h * gx, corner[1] + h * gy, corner[2]};
          const CVec3 g = planewave_robin_data(phys, p, x);
          const auto sh = edge_shapes(ref, h);
          for (int e = 0; e < 12; ++e) {
            const Complex v = g[0] * sh[e].value[0] + g[1] * sh[e].value[1];
            if (v != 0.0) b[edges[e]] += w * v;
          }
        }
    }
  return b;
}

std::vector<Complex> assemble_rhs_random(int n, std::uint64_t seed, const std::vector<char>& dirichlet) {
  SplitMix64 rng(seed);
  std::vector<Complex> b(n);
  for (int i = 0; i < n; ++i) {
    const double re = rng.symmetric();
    const double im = rng.symmetric();
    b[i] = Complex(re, im);
  }
  for (int i = 0; i < n && i < static_cast<int>(dirichlet.size()); ++i)
    if (dirichlet[i]) b[i] = 0.0;
  return b;
}

}  // namespace pmldd
