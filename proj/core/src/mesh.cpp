#include "wopsip/mesh.hpp"

#include "wopsip/errors.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

namespace wopsip {

namespace {

struct KeyHash {
    std::size_t operator()(const std::array<int, 3>& k) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (int v : k) h = (h ^ static_cast<std::size_t>(v + 1)) * 1099511628211ull;
        return h;
    }
};

// True when p lies on the closed facet spanned by the columns of `face`.
bool on_facet(const Vec& p, const PointSet& face, double tol) {
    const int k = static_cast<int>(face.cols()) - 1;
    Eigen::MatrixXd edges(face.rows(), k);
    for (int j = 0; j < k; ++j) edges.col(j) = face.col(j + 1) - face.col(0);
    const Eigen::VectorXd rhs = edges.transpose() * (p - face.col(0));
    const Eigen::VectorXd coords = (edges.transpose() * edges).ldlt().solve(rhs);
    const Vec proj = face.col(0) + edges * coords;
    const double diam = edges.colwise().norm().maxCoeff();
    if ((p - proj).norm() > tol * diam) return false;
    return coords.minCoeff() >= -tol && coords.sum() <= 1.0 + tol;
}

// Rejects vertices lying on a boundary face of some cell: that is the
// signature of a hanging node (the face is only partially shared).
void check_hanging_nodes(const Mesh& mesh) {
    const auto& verts = mesh.vertices();
    std::vector<int> by_x(verts.size());
    std::iota(by_x.begin(), by_x.end(), 0);
    std::sort(by_x.begin(), by_x.end(), [&](int a, int b) { return verts[a](0) < verts[b](0); });

    constexpr double tol = 1e-10;
    for (const Face& f : mesh.faces()) {
        if (!f.is_boundary()) continue;
        PointSet pts(mesh.dim(), mesh.dim());
        for (int k = 0; k < mesh.dim(); ++k) pts.col(k) = verts[f.vertices[k]];
        const Vec lo = pts.rowwise().minCoeff();
        const Vec hi = pts.rowwise().maxCoeff();
        const double pad = tol * (hi - lo).norm();
        auto first = std::lower_bound(by_x.begin(), by_x.end(), lo(0) - pad,
                                      [&](int v, double x) { return verts[v](0) < x; });
        for (auto it = first; it != by_x.end() && verts[*it](0) <= hi(0) + pad; ++it) {
            const int v = *it;
            if (std::find(f.vertices.begin(), f.vertices.begin() + mesh.dim(), v) != f.vertices.begin() + mesh.dim())
                continue;
            const Vec& p = verts[v];
            if (((p - lo).array() < -pad).any() || ((p - hi).array() > pad).any()) continue;
            if (on_facet(p, pts, tol))
                throw NonConformal("vertex " + std::to_string(v) + " lies on boundary face of cell " +
                                   std::to_string(f.owner) + " (hanging node)");
        }
    }
}

} // namespace

Simplex Mesh::simplex(int c) const {
    std::array<Vec, 4> pts;
    const auto ids = cell(c);
    for (int i = 0; i <= dim_; ++i) pts[i] = vertices_[ids[i]];
    return Simplex(std::span<const Vec>(pts.data(), dim_ + 1), ids);
}

Mesh build_connectivity(int dim, std::vector<Vec> vertices, std::vector<Cell> cells) {
    if (dim != 2 && dim != 3) throw InvalidParameter("mesh dimension must be 2 or 3");
    for (const Vec& v : vertices)
        if (v.size() != dim) throw DimensionMismatch("vertex dimension does not match mesh dimension");

    Mesh mesh;
    mesh.dim_ = dim;
    mesh.vertices_ = std::move(vertices);
    mesh.cells_ = std::move(cells);
    const int nv = static_cast<int>(mesh.vertices_.size());
    const int nloc = dim + 1;

    for (std::size_t c = 0; c < mesh.cells_.size(); ++c) {
        Cell& cell = mesh.cells_[c];
        for (int i = 0; i < nloc; ++i)
            if (cell[i] < 0 || cell[i] >= nv) throw InvalidParameter("cell vertex index out of range");
        if (dim == 2) cell[3] = -1;
        const Simplex s = mesh.simplex(static_cast<int>(c));
        if (s.signed_volume() < 0) std::swap(cell[0], cell[1]);
        mesh.h_ = std::max(mesh.h_, s.diameter());
    }

    std::unordered_map<std::array<int, 3>, int, KeyHash> lookup;
    lookup.reserve(mesh.cells_.size() * nloc);
    mesh.cell_faces_.assign(mesh.cells_.size(), {-1, -1, -1, -1});
    for (std::size_t c = 0; c < mesh.cells_.size(); ++c) {
        for (int i = 0; i < nloc; ++i) {
            std::array<int, 3> key{-1, -1, -1};
            int k = 0;
            for (int j = 0; j < nloc; ++j)
                if (j != i) key[k++] = mesh.cells_[c][j];
            std::sort(key.begin(), key.begin() + dim);
            auto [it, inserted] = lookup.try_emplace(key, static_cast<int>(mesh.faces_.size()));
            if (inserted) {
                Face f;
                f.vertices = key;
                f.owner = static_cast<int>(c);
                f.owner_local = i;
                mesh.faces_.push_back(f);
            } else {
                Face& f = mesh.faces_[it->second];
                if (f.neighbor >= 0)
                    throw NonConformal("face shared by more than two cells (cell " + std::to_string(c) + ")");
                if (f.owner == static_cast<int>(c)) throw NonConformal("cell repeats a face");
                f.neighbor = static_cast<int>(c);
                f.neighbor_local = i;
            }
            mesh.cell_faces_[c][i] = it->second;
        }
    }
    mesh.boundary_faces_ = static_cast<std::size_t>(
        std::count_if(mesh.faces_.begin(), mesh.faces_.end(), [](const Face& f) { return f.is_boundary(); }));

    check_hanging_nodes(mesh);
    return mesh;
}

Mesh generate_square(int n_x, int n_y, SquarePattern pattern) {
    if (n_x < 1 || n_y < 1) throw InvalidParameter("generate_square needs n_x, n_y >= 1");
    std::vector<Vec> verts;
    std::vector<Cell> cells;
    auto grid = [&](int i, int j) { return j * (n_x + 1) + i; };
    for (int j = 0; j <= n_y; ++j)
        for (int i = 0; i <= n_x; ++i) verts.push_back(make_vec(static_cast<double>(i) / n_x, static_cast<double>(j) / n_y));

    for (int j = 0; j < n_y; ++j) {
        for (int i = 0; i < n_x; ++i) {
            const int v00 = grid(i, j), v10 = grid(i + 1, j), v01 = grid(i, j + 1), v11 = grid(i + 1, j + 1);
            if (pattern == SquarePattern::Diagonal) {
                cells.push_back({v00, v10, v11, -1});
                cells.push_back({v00, v11, v01, -1});
            } else {
                const int c = static_cast<int>(verts.size());
                verts.push_back(make_vec((i + 0.5) / n_x, (j + 0.5) / n_y));
                cells.push_back({v00, v10, c, -1});
                cells.push_back({v10, v11, c, -1});
                cells.push_back({v11, v01, c, -1});
                cells.push_back({v01, v00, c, -1});
            }
        }
    }
    return build_connectivity(2, std::move(verts), std::move(cells));
}

Mesh generate_graded_square(int n_x, int n_y, double grading) {
    if (n_x < 1 || n_y < 1) throw InvalidParameter("generate_graded_square needs n_x, n_y >= 1");
    if (!(grading >= 0.0)) throw InvalidParameter("grading must be non-negative");
    Mesh uniform = generate_square(n_x, n_y, SquarePattern::Diagonal);
    std::vector<Vec> verts = uniform.vertices();
    if (grading > 0.0) {
        const double denom = std::expm1(grading);
        for (Vec& v : verts) v(1) = std::expm1(grading * v(1)) / denom;
    }
    for (Vec& v : verts) v(1) = std::clamp(v(1), 0.0, 1.0);
    return build_connectivity(2, std::move(verts), uniform.cells());
}

Mesh generate_cube(int n_x, int n_y, int n_z) {
    if (n_x < 1 || n_y < 1 || n_z < 1) throw InvalidParameter("generate_cube needs counts >= 1");
    std::vector<Vec> verts;
    std::vector<Cell> cells;
    auto grid = [&](int i, int j, int k) { return (k * (n_y + 1) + j) * (n_x + 1) + i; };
    for (int k = 0; k <= n_z; ++k)
        for (int j = 0; j <= n_y; ++j)
            for (int i = 0; i <= n_x; ++i)
                verts.push_back(make_vec(static_cast<double>(i) / n_x, static_cast<double>(j) / n_y,
                                         static_cast<double>(k) / n_z));

    // Each Kuhn simplex follows a monotone lattice path from (0,0,0) to (1,1,1).
    constexpr std::array<std::array<int, 3>, 6> paths{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (int k = 0; k < n_z; ++k) {
        for (int j = 0; j < n_y; ++j) {
            for (int i = 0; i < n_x; ++i) {
                for (const auto& path : paths) {
                    std::array<int, 3> off{0, 0, 0};
                    Cell cell{grid(i, j, k), -1, -1, -1};
                    for (int s = 0; s < 3; ++s) {
                        off[path[s]] = 1;
                        cell[s + 1] = grid(i + off[0], j + off[1], k + off[2]);
                    }
                    cells.push_back(cell);
                }
            }
        }
    }
    return build_connectivity(3, std::move(verts), std::move(cells));
}

Mesh permute_cells(const Mesh& mesh, std::span<const int> permutation) {
    if (permutation.size() != mesh.num_cells()) throw InvalidParameter("permutation size mismatch");
    std::vector<Cell> cells(mesh.num_cells());
    std::vector<char> seen(mesh.num_cells(), 0);
    for (std::size_t k = 0; k < permutation.size(); ++k) {
        const int old = permutation[k];
        if (old < 0 || old >= static_cast<int>(mesh.num_cells()) || seen[old]) throw InvalidParameter("not a permutation");
        seen[old] = 1;
        cells[k] = mesh.cells()[old];
    }
    return build_connectivity(mesh.dim(), mesh.vertices(), std::move(cells));
}

MeshStats stats(const Mesh& mesh) {
    MeshStats s;
    s.min_h = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const Simplex t = mesh.simplex(static_cast<int>(c));
        const ElementCharacterization ch = characterize(t);
        s.h = std::max(s.h, t.diameter());
        s.min_h = std::min(s.min_h, t.diameter());
        s.max_angle = std::max(s.max_angle, max_angle(t));
        s.gamma0 = std::max(s.gamma0, ch.H_over_h);
        const auto hs = std::span<const double>(ch.h.data(), mesh.dim());
        s.max_aspect = std::max(s.max_aspect, *std::max_element(hs.begin(), hs.end()) / *std::min_element(hs.begin(), hs.end()));
        if (mesh.dim() == 3 && ch.shape_type == ShapeType::TypeII) ++s.type2_count;
    }
    if (mesh.num_cells() == 0) s.min_h = 0.0;
    s.cell_count = mesh.num_cells();
    s.face_count = mesh.num_faces();
    s.boundary_face_count = mesh.num_boundary_faces();
    return s;
}

void write_ascii_mesh(std::ostream& out, const Mesh& mesh) {
    out.precision(17);
    out << mesh.dim() << ' ' << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
    for (const Vec& v : mesh.vertices()) {
        for (int k = 0; k < mesh.dim(); ++k) out << (k ? " " : "") << v(k);
        out << '\n';
    }
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto cell = mesh.cell(static_cast<int>(c));
        for (std::size_t k = 0; k < cell.size(); ++k) out << (k ? " " : "") << cell[k];
        out << '\n';
    }
}

Mesh read_ascii_mesh(std::istream& in) {
    int dim = 0;
    std::size_t nv = 0, nc = 0;
    if (!(in >> dim >> nv >> nc)) throw InvalidParameter("mesh header must be 'dim num_vertices num_cells'");
    if (dim != 2 && dim != 3) throw InvalidParameter("mesh dimension must be 2 or 3");
    std::vector<Vec> verts(nv, Vec::Zero(dim));
    for (auto& v : verts)
        for (int k = 0; k < dim; ++k)
            if (!(in >> v(k))) throw InvalidParameter("truncated vertex list");
    std::vector<Cell> cells(nc, Cell{-1, -1, -1, -1});
    for (auto& c : cells)
        for (int k = 0; k <= dim; ++k)
            if (!(in >> c[k])) throw InvalidParameter("truncated cell list");
    return build_connectivity(dim, std::move(verts), std::move(cells));
}

} // namespace wopsip
