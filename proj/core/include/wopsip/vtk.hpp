#pragma once

#include "wopsip/fem.hpp"
#include "wopsip/mesh.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace wopsip {

struct CellScalar {
    std::string name;
    std::vector<double> values; // one per cell
};

/// Legacy ASCII VTK unstructured grid (cell type 5 or 10) with cell scalars.
void write_vtk_mesh(std::ostream& out, const Mesh& mesh, const std::vector<CellScalar>& cell_data = {});

/// Discontinuous P¹ field: every cell gets its own copy of its vertices so
/// the point data can jump across faces.
void write_vtk_field(std::ostream& out, const FeField& field, const std::string& name = "u_h");

} // namespace wopsip
