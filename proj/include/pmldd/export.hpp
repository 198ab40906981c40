#pragma once

#include <span>
#include <string>

#include "pmldd/config.hpp"
#include "pmldd/grid.hpp"

namespace pmldd {

/// E at the centre of a cell, summed over its 12 edge basis functions.
CVec3 cell_center_field(const Mesh& mesh, std::span<const Complex> u, int cell);

/// Cell-centred E on the whole mesh (PML collar included).
///
/// Vtk: legacy ASCII STRUCTURED_POINTS with CELL_DATA scalars Ex_re, Ex_im,
/// Ey_re, Ey_im, Ez_re, Ez_im. Csv: header x,y,z,Ex_re,Ex_im,Ey_re,Ey_im,
/// Ez_re,Ez_im and one line per cell centre, x fastest.
void export_fields(const Mesh& mesh, std::span<const Complex> u, const std::string& path, FieldFormat format);

/// Path of one row's field file: `base` unchanged for a single-overlap sweep,
/// otherwise with "_ov<overlap>" inserted before the extension.
std::string field_path_for_row(const std::string& base, int overlap, bool sweep);

}  // namespace pmldd
