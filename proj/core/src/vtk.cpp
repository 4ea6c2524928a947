#include "wopsip/vtk.hpp"

#include "wopsip/errors.hpp"

#include <ostream>

namespace wopsip {

namespace {

void header(std::ostream& out, const std::string& title) {
    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
}

void point(std::ostream& out, const Vec& x) { out << x(0) << ' ' << x(1) << ' ' << (x.size() > 2 ? x(2) : 0.0) << '\n'; }

void cell_types(std::ostream& out, const Mesh& mesh) {
    out << "CELL_TYPES " << mesh.num_cells() << '\n';
    const int type = mesh.dim() == 2 ? 5 : 10;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) out << type << '\n';
}

} // namespace

void write_vtk_mesh(std::ostream& out, const Mesh& mesh, const std::vector<CellScalar>& cell_data) {
    out.precision(17);
    header(out, "wopsip mesh");
    out << "POINTS " << mesh.num_vertices() << " double\n";
    for (const Vec& v : mesh.vertices()) point(out, v);
    const int n = mesh.dim() + 1;
    out << "CELLS " << mesh.num_cells() << ' ' << mesh.num_cells() * (n + 1) << '\n';
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        out << n;
        for (int v : mesh.cell(static_cast<int>(c))) out << ' ' << v;
        out << '\n';
    }
    cell_types(out, mesh);
    if (cell_data.empty()) return;
    out << "CELL_DATA " << mesh.num_cells() << '\n';
    for (const CellScalar& s : cell_data) {
        if (s.values.size() != mesh.num_cells()) throw DimensionMismatch("cell data '" + s.name + "' has wrong length");
        out << "SCALARS " << s.name << " double 1\nLOOKUP_TABLE default\n";
        for (double v : s.values) out << v << '\n';
    }
}

void write_vtk_field(std::ostream& out, const FeField& field, const std::string& name) {
    const Mesh& mesh = field.mesh();
    out.precision(17);
    header(out, "wopsip discontinuous field");
    const int n = mesh.dim() + 1;
    const std::size_t np = mesh.num_cells() * n;
    out << "POINTS " << np << " double\n";
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        for (int v : mesh.cell(static_cast<int>(c))) point(out, mesh.vertex(v));
    out << "CELLS " << mesh.num_cells() << ' ' << mesh.num_cells() * (n + 1) << '\n';
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        out << n;
        for (int i = 0; i < n; ++i) out << ' ' << c * n + i;
        out << '\n';
    }
    cell_types(out, mesh);
    out << "POINT_DATA " << np << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const Simplex s = mesh.simplex(static_cast<int>(c));
        for (int i = 0; i < n; ++i) out << field.value(s, static_cast<int>(c), s.vertex(i)) << '\n';
    }
}

} // namespace wopsip
