#include "test_support.hpp"

#include "wopsip/errors.hpp"
#include "wopsip/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <algorithm>
#include <map>
#include <random>
#include <sstream>

using namespace wopsip;
using namespace wopsip::testing;
using doctest::Approx;

namespace {

double total_measure(const Mesh& m) {
    double s = 0.0;
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) s += m.simplex(c).measure();
    return s;
}

// Independent edge/face count from cell lists, by brute-force enumeration.
std::pair<int, int> count_faces(const Mesh& m) {
    std::map<std::vector<int>, int> count;
    for (const auto& c : m.cells()) {
        const int n = m.dim() + 1;
        for (int i = 0; i < n; ++i) {
            std::vector<int> f;
            for (int j = 0; j < n; ++j)
                if (j != i) f.push_back(c[j]);
            std::sort(f.begin(), f.end());
            ++count[f];
        }
    }
    int interior = 0, boundary = 0;
    for (auto& [f, k] : count) (k == 2 ? interior : boundary)++;
    return {interior, boundary};
}

void check_structure(const Mesh& m) {
    const auto [interior, boundary] = count_faces(m);
    CHECK(static_cast<int>(m.num_faces()) == interior + boundary);
    CHECK(static_cast<int>(m.num_boundary_faces()) == boundary);
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) CHECK(m.simplex(c).signed_volume() > 0.0);
    for (int f = 0; f < static_cast<int>(m.num_faces()); ++f) {
        const Face& face = m.face(f);
        CHECK(m.cell_face(face.owner, face.owner_local) == f);
        if (face.is_boundary()) continue;
        CHECK(face.owner < face.neighbor);
        CHECK(m.cell_face(face.neighbor, face.neighbor_local) == f);
        const Vec n1 = m.simplex(face.owner).face(face.owner_local).normal;
        const Vec n2 = m.simplex(face.neighbor).face(face.neighbor_local).normal;
        CHECK((n1 + n2).norm() < 1e-12);
    }
    // The boundary is closed: Σ |F| n_F over boundary faces vanishes.
    Vec s = Vec::Zero(m.dim());
    for (const Face& face : m.faces())
        if (face.is_boundary()) {
            const FaceGeometry g = m.simplex(face.owner).face(face.owner_local);
            s += g.measure * g.normal;
        }
    CHECK(s.norm() < 1e-12);
}

} // namespace

TEST_CASE("two-triangle square") {
    const Mesh m = generate_square(1, 1);
    CHECK(m.num_cells() == 2);
    CHECK(m.num_faces() == 5);
    CHECK(m.num_boundary_faces() == 4);
    CHECK(m.h() == Approx(std::sqrt(2.0)));
    check_structure(m);
}

TEST_CASE("2x2 diagonal split has 8 triangles and 16 faces") {
    const Mesh m = generate_square(2, 2, SquarePattern::Diagonal);
    CHECK(m.num_cells() == 8);
    CHECK(m.num_faces() == 16);
    CHECK(m.num_faces() - m.num_boundary_faces() == 8);
    CHECK(m.num_boundary_faces() == 8);
}

TEST_CASE("2x2 criss-cross has 16 cells") {
    const Mesh m = generate_square(2, 2, SquarePattern::CrissCross);
    CHECK(m.num_cells() == 16);
    CHECK(m.num_faces() == 28);
    CHECK(m.num_boundary_faces() == 8);
    check_structure(m);
    CHECK(stats(m).max_angle == Approx(std::numbers::pi / 2));
}

TEST_CASE("non-conformal inputs are rejected") {
    // Hanging node: a big triangle next to two small ones sharing a split edge.
    std::vector<Vec> v{make_vec(0, 0), make_vec(1, 0), make_vec(1, 1), make_vec(1, 0.5), make_vec(2, 0.5)};
    std::vector<Cell> cells{{0, 1, 2, -1}, {1, 3, 4, -1}, {3, 2, 4, -1}};
    CHECK_THROWS_AS(build_connectivity(2, v, cells), NonConformal);

    // Three triangles on one edge.
    std::vector<Vec> w{make_vec(0, 0), make_vec(1, 0), make_vec(0.5, 1), make_vec(0.5, -1), make_vec(0.5, 2)};
    std::vector<Cell> fan{{0, 1, 2, -1}, {0, 1, 3, -1}, {0, 1, 4, -1}};
    CHECK_THROWS_AS(build_connectivity(2, w, fan), NonConformal);

    std::vector<Cell> bad_index{{0, 1, 7, -1}};
    CHECK_THROWS_AS(build_connectivity(2, w, bad_index), InvalidParameter);
    std::vector<Cell> flat{{0, 1, 1, -1}};
    CHECK_THROWS(build_connectivity(2, w, flat));
}

TEST_CASE("cells are reoriented positively") {
    std::vector<Vec> v{make_vec(0, 0), make_vec(0, 1), make_vec(1, 0)};
    const Mesh m = build_connectivity(2, v, {{0, 1, 2, -1}});
    CHECK(m.simplex(0).signed_volume() > 0.0);
}

TEST_CASE("generators cover the unit domain conformally") {
    for (int nx : {1, 2, 4, 8, 16, 32})
        for (int ny : {1, 2, 4, 8, 16, 32}) {
            for (auto p : {SquarePattern::Diagonal, SquarePattern::CrissCross}) {
                const Mesh m = generate_square(nx, ny, p);
                CHECK(total_measure(m) == Approx(1.0).epsilon(1e-12));
                const auto [interior, boundary] = count_faces(m);
                CHECK(static_cast<int>(m.num_faces()) == interior + boundary);
                CHECK(boundary == 2 * (nx + ny));
            }
        }
    for (int n : {1, 2, 4}) {
        const Mesh m = generate_cube(n, n, n);
        CHECK(m.num_cells() == static_cast<std::size_t>(6 * n * n * n));
        CHECK(total_measure(m) == Approx(1.0).epsilon(1e-12));
        check_structure(m);
    }
    check_structure(generate_square(3, 5));
    check_structure(generate_square(3, 5, SquarePattern::CrissCross));
    check_structure(generate_graded_square(4, 8, 3.0));
    CHECK(total_measure(generate_graded_square(4, 8, 3.0)) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mesh statistics") {
    std::vector<Vec> v{make_vec(0, 0), make_vec(1, 0), make_vec(0, 1)};
    const MeshStats one = stats(build_connectivity(2, v, {{0, 1, 2, -1}}));
    CHECK(one.h == Approx(std::sqrt(2.0)));
    CHECK(one.gamma0 == Approx(2.0));
    CHECK(one.max_angle == Approx(std::numbers::pi / 2));

    const Mesh aniso = generate_square(4, 16);
    CHECK(aniso.num_cells() == 128);
    const MeshStats s = stats(aniso);
    CHECK(s.gamma0 == Approx(2.0).epsilon(1e-12));
    for (int c = 0; c < 128; ++c) CHECK(characterize(aniso.simplex(c)).H_over_h == Approx(2.0).epsilon(1e-12));
    CHECK(s.max_aspect == Approx(4.0));
    CHECK(s.cell_count == 128);

    const MeshStats k1 = stats(generate_cube(1, 1, 1));
    CHECK(k1.max_angle == Approx(std::numbers::pi / 2));
    CHECK(k1.cell_count == 6);

    const MeshStats k2 = stats(generate_cube(2, 2, 2));
    CHECK(k2.cell_count == 48);

    const MeshStats k4 = stats(generate_cube(4, 4, 16));
    CHECK(k4.max_angle < std::numbers::pi - 0.1);
    CHECK(std::isfinite(k4.gamma0));
}

TEST_CASE("gamma0 is constant under refinement of the diagonal family") {
    const double g = stats(generate_square(2, 8)).gamma0;
    for (int k = 1; k <= 3; ++k) CHECK(stats(generate_square(2 << k, 8 << k)).gamma0 == Approx(g).epsilon(1e-12));
}

TEST_CASE("graded mesh rows follow the exponential law") {
    const double g = 3.0;
    const Mesh m = generate_graded_square(2, 4, g);
    for (const Vec& v : m.vertices()) {
        const double j = std::round(std::log1p(v(1) * std::expm1(g)) / g * 4);
        CHECK(v(1) == Approx(std::expm1(g * j / 4) / std::expm1(g)).epsilon(1e-12));
    }
    const Mesh flat = generate_graded_square(2, 4, 0.0);
    CHECK((flat.vertices()[5] - generate_square(2, 4).vertices()[5]).norm() == Approx(0.0));
}

TEST_CASE("generator argument validation") {
    CHECK_THROWS_AS(generate_square(0, 2), InvalidParameter);
    CHECK_THROWS_AS(generate_cube(1, 0, 1), InvalidParameter);
    CHECK_THROWS_AS(generate_graded_square(2, 2, -1.0), InvalidParameter);
}

TEST_CASE("cell permutation keeps geometry") {
    const Mesh m = generate_square(3, 3);
    std::vector<int> perm(m.num_cells());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(1);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Mesh p = permute_cells(m, perm);
    CHECK(p.num_faces() == m.num_faces());
    CHECK(total_measure(p) == Approx(1.0));
    CHECK(p.simplex(0).centroid().isApprox(m.simplex(perm[0]).centroid()));
    std::vector<int> bad(m.num_cells(), 0);
    CHECK_THROWS_AS(permute_cells(m, bad), InvalidParameter);
}

TEST_CASE("ascii mesh round trip") {
    const Mesh m = generate_cube(2, 1, 1);
    std::stringstream ss;
    write_ascii_mesh(ss, m);
    const Mesh r = read_ascii_mesh(ss);
    CHECK(r.num_cells() == m.num_cells());
    CHECK(r.num_faces() == m.num_faces());
    for (std::size_t v = 0; v < m.num_vertices(); ++v) CHECK((r.vertices()[v] - m.vertices()[v]).norm() == 0.0);
    std::stringstream bad("2 3 1\n0 0\n1 0\n");
    CHECK_THROWS_AS(read_ascii_mesh(bad), InvalidParameter);
}
