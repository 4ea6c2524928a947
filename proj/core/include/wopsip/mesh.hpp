#pragma once

#include "wopsip/geometry.hpp"
#include "wopsip/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace wopsip {

using Cell = std::array<int, 4>; // vertex indices; entry 3 unused (-1) in 2D

/// A mesh face. Interior faces are owned by the lower-index cell, whose
/// outward normal is n_F; boundary faces have neighbor == -1.
struct Face {
    std::array<int, 3> vertices{-1, -1, -1}; // sorted vertex ids (d used)
    int owner = -1;
    int owner_local = -1; // local face index in owner (= opposite local vertex)
    int neighbor = -1;
    int neighbor_local = -1;

    bool is_boundary() const { return neighbor < 0; }
};

/// Conformal simplicial mesh with full face connectivity. Immutable once built.
class Mesh {
public:
    int dim() const { return dim_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_cells() const { return cells_.size(); }
    std::size_t num_faces() const { return faces_.size(); }
    std::size_t num_boundary_faces() const { return boundary_faces_; }

    const std::vector<Vec>& vertices() const { return vertices_; }
    const Vec& vertex(int v) const { return vertices_[v]; }
    std::span<const int> cell(int c) const { return {cells_[c].data(), static_cast<std::size_t>(dim_ + 1)}; }
    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(int f) const { return faces_[f]; }
    /// Global face index of local face i of cell c.
    int cell_face(int c, int i) const { return cell_faces_[c][i]; }

    Simplex simplex(int c) const;
    /// h = max_T diam(T).
    double h() const { return h_; }

private:
    friend Mesh build_connectivity(int dim, std::vector<Vec> vertices, std::vector<Cell> cells);

    int dim_ = 0;
    std::vector<Vec> vertices_;
    std::vector<Cell> cells_;
    std::vector<Face> faces_;
    std::vector<std::array<int, 4>> cell_faces_;
    std::size_t boundary_faces_ = 0;
    double h_ = 0.0;
};

/// Orients cells positively, builds and classifies faces, and checks
/// conformity. Throws NonConformal (a face shared by more than two cells, or a
/// vertex lying inside another cell's boundary face) or DegenerateSimplex.
Mesh build_connectivity(int dim, std::vector<Vec> vertices, std::vector<Cell> cells);

enum class SquarePattern { Diagonal, CrissCross };

/// [0,1]² split into n_x × n_y rectangles. Diagonal: two right triangles per
/// rectangle; CrissCross: four triangles through the rectangle centre.
Mesh generate_square(int n_x, int n_y, SquarePattern pattern = SquarePattern::Diagonal);

/// Diagonal pattern with rows graded geometrically towards y = 0:
/// y_j = (exp(g j/n_y) - 1)/(exp(g) - 1). grading = 0 gives the uniform mesh.
Mesh generate_graded_square(int n_x, int n_y, double grading);

/// [0,1]³ split into n_x × n_y × n_z boxes, six Kuhn tetrahedra per box.
Mesh generate_cube(int n_x, int n_y, int n_z);

/// Same mesh with cells reordered: new cell k is old cell permutation[k].
Mesh permute_cells(const Mesh& mesh, std::span<const int> permutation);

struct MeshStats {
    double h = 0.0;
    double min_h = 0.0;
    double max_angle = 0.0;
    double gamma0 = 0.0;     // max_T H_T / h_T
    double max_aspect = 0.0; // max_T max_i h_i / min_i h_i
    std::size_t cell_count = 0;
    std::size_t face_count = 0;
    std::size_t boundary_face_count = 0;
    std::size_t type2_count = 0; // 3D cells tagged TypeII
};

MeshStats stats(const Mesh& mesh);

/// Minimal ASCII format: "dim num_vertices num_cells", then one vertex per
/// line, then one cell (d+1 zero-based vertex ids) per line.
void write_ascii_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_ascii_mesh(std::istream& in);

} // namespace wopsip
