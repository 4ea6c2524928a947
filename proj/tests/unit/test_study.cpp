#include "wopsip/analysis.hpp"
#include "wopsip/errors.hpp"
#include "wopsip/study.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

using namespace wopsip;
using doctest::Approx;

TEST_CASE("name parsing round-trips") {
    for (MeshFamily f : {MeshFamily::Diagonal, MeshFamily::CrissCross, MeshFamily::Kuhn, MeshFamily::Graded})
        CHECK(parse_family(to_string(f)) == f);
    for (Scheme s : {Scheme::Wopsip, Scheme::Sip, Scheme::Rsip}) CHECK(parse_scheme(to_string(s)) == s);
    CHECK_THROWS_AS(parse_family("hex"), InvalidParameter);
    CHECK_THROWS_AS(parse_scheme("nipg"), InvalidParameter);
}

TEST_CASE("family meshes") {
    const Mesh d = family_mesh({MeshFamily::Diagonal, 2, 4}, 1);
    CHECK(d.num_cells() == 2u * 4 * 16);
    const Mesh c = family_mesh({MeshFamily::CrissCross, 2, 1}, 0);
    CHECK(c.num_cells() == 16u);
    const Mesh k = family_mesh({MeshFamily::Kuhn, 2, 1}, 0);
    CHECK(k.dim() == 3);
    CHECK(k.num_cells() == 48u);
    const Mesh g = family_mesh({MeshFamily::Graded, 4, 1, 3.0}, 0);
    CHECK(g.num_cells() == 32u);
    CHECK(family_mesh({MeshFamily::Diagonal, 8, 1}, 1).h() < family_mesh({MeshFamily::Diagonal, 8, 1}, 0).h());
    CHECK_THROWS_AS(family_mesh({MeshFamily::Diagonal, 0, 1}, 0), InvalidParameter);
    CHECK_THROWS_AS(family_mesh({MeshFamily::Diagonal, 2, 0}, 0), InvalidParameter);
}

TEST_CASE("discrete solution satisfies the Galerkin equations") {
    const ExactSolution s = exact_solution("sinsin", 2);
    const Mesh m = generate_square(8, 8);
    const DiscreteSolution sol = solve_poisson(m, {}, s.source());
    const DofMap dofs(m);
    const SparseMatrix a = assemble_wopsip(m, dofs);
    const Eigen::VectorXd r = assemble_load(m, dofs, s.source());
    const Eigen::VectorXd res = a * sol.field.coefficients() - r;
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-9 * r.cwiseAbs().maxCoeff());
}

TEST_CASE("measure_level fills a record") {
    const ExactSolution s = exact_solution("sinsin", 2);
    const Mesh m = generate_square(8, 8);
    const DiscreteSolution sol = solve_poisson(m, {}, s.source());
    const ConvergenceRecord rec = measure_level(m, sol.field, s, 3);
    CHECK(rec.level == 3);
    CHECK(rec.h == m.h());
    CHECK(rec.dofs == 3 * 128);
    CHECK(rec.energy_error > 0.0);
    CHECK(rec.l2_error > 0.0);
    CHECK(rec.l2_error < rec.energy_error);
    CHECK(rec.jump_seminorm >= 0.0);
    CHECK_FALSE(rec.rate_energy.has_value());
}

TEST_CASE("solution is invariant under cell permutation") {
    const ExactSolution s = exact_solution("sinsin", 2);
    const Mesh m = generate_square(8, 16);
    std::vector<int> perm(m.num_cells());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(17));
    const Mesh p = permute_cells(m, perm);
    for (Scheme sch : {Scheme::Wopsip, Scheme::Rsip, Scheme::Sip}) {
        const PenaltyConfig cfg{sch, 1.0, 10.0};
        const double e1 = energy_error(m, solve_poisson(m, cfg, s.source()).field, s, m.h());
        const double e2 = energy_error(p, solve_poisson(p, cfg, s.source()).field, s, p.h());
        CHECK(std::abs(e1 - e2) <= 1e-9);
    }
}

TEST_CASE("indefinite interior penalty is reported") {
    const Mesh m = generate_square(8, 8);
    CHECK_THROWS_AS(solve_poisson(m, {Scheme::Rsip, 1.0, 1e-6}, [](const Vec&) { return 1.0; }), IndefiniteMatrix);
}
