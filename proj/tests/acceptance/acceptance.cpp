// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "test_support.hpp"

#include "wopsip/analysis.hpp"
#include "wopsip/assembly.hpp"
#include "wopsip/fem.hpp"
#include "wopsip/parallel.hpp"
#include "wopsip/solver.hpp"
#include "wopsip/study.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace wopsip;
using namespace wopsip::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string num(double x, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << x;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Study {
    std::vector<double> h, energy, l2;
};

Study run_study(const std::vector<Mesh>& meshes, const PenaltyConfig& config, const ExactSolution& exact) {
    Study s;
    for (const Mesh& m : meshes) {
        const DiscreteSolution sol = solve_poisson(m, config, exact.source());
        s.h.push_back(m.h());
        s.energy.push_back(energy_error(m, sol.field, exact, m.h()));
        s.l2.push_back(l2_error(m, sol.field, exact));
    }
    return s;
}

Outcome rate_criterion(const std::vector<Mesh>& meshes, const ExactSolution& exact, double energy_lo, double energy_hi,
                       double l2_lo, double l2_hi, double time_limit) {
    const auto start = std::chrono::steady_clock::now();
    const Study s = run_study(meshes, {}, exact);
    const double elapsed = seconds_since(start);
    const double se = least_squares_slope(s.h, s.energy), sl = least_squares_slope(s.h, s.l2);
    Outcome o;
    o.pass = se >= energy_lo && se <= energy_hi && sl >= l2_lo && sl <= l2_hi && elapsed < time_limit;
    o.detail = "energy slope " + num(se) + ", L2 slope " + num(sl) + ", " + num(elapsed, 3) + " s";
    return o;
}

constexpr double k_unbounded = 1e300;

Outcome criterion1() {
    std::vector<Mesh> meshes;
    for (int n : {8, 16, 32, 64}) meshes.push_back(generate_square(n, n));
    return rate_criterion(meshes, exact_solution("sinsin", 2), 0.9, 1.1, 1.8, 2.2, 60.0);
}

Outcome criterion2() {
    std::vector<Mesh> meshes;
    double gamma0_spread = 0.0;
    for (int n : {8, 16, 32, 64}) {
        meshes.push_back(generate_square(n, 4 * n));
        gamma0_spread = std::max(gamma0_spread, std::abs(stats(meshes.back()).gamma0 - 2.0));
    }
    Outcome o = rate_criterion(meshes, exact_solution("sinsin", 2), 0.9, 1.1, 1.8, 2.2, k_unbounded);
    o.pass = o.pass && gamma0_spread < 1e-12;
    o.detail += ", max |gamma0 - 2| " + num(gamma0_spread);
    return o;
}

Outcome criterion3() {
    std::vector<Mesh> meshes;
    for (int n : {2, 4, 8}) meshes.push_back(generate_cube(n, n, n));
    return rate_criterion(meshes, exact_solution("sinsin", 3), 0.85, k_unbounded, 1.7, k_unbounded, 300.0);
}

// Quadratic vector field with random coefficients and its exact divergence.
VectorField random_quadratic_field(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<double, 3> c{};
    std::array<std::array<double, 3>, 3> b{};
    std::array<std::array<std::array<double, 3>, 3>, 3> q{};
    for (int i = 0; i < dim; ++i) {
        c[i] = u(rng);
        for (int j = 0; j < dim; ++j) {
            b[i][j] = u(rng);
            for (int l = 0; l < dim; ++l) q[i][j][l] = u(rng);
        }
    }
    VectorField v;
    v.value = [=](const Vec& x) {
        Vec out = Vec::Zero(dim);
        for (int i = 0; i < dim; ++i) {
            out(i) = c[i];
            for (int j = 0; j < dim; ++j) {
                out(i) += b[i][j] * x(j);
                for (int l = 0; l < dim; ++l) out(i) += q[i][j][l] * x(j) * x(l);
            }
        }
        return out;
    };
    v.divergence = [=](const Vec& x) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            s += b[i][i];
            for (int l = 0; l < dim; ++l) s += (q[i][i][l] + q[i][l][i]) * x(l);
        }
        return s;
    };
    return v;
}

Outcome criterion4() {
    std::mt19937_64 rng(404);
    double worst = 0.0;
    for (const Mesh& m : {generate_square(4, 4), generate_cube(2, 2, 2)})
        for (int t = 0; t < 50; ++t) worst = std::max(worst, commuting_check(m, random_quadratic_field(rng, m.dim())));
    return {worst < 1e-12, "max cell residual " + num(worst)};
}

FeField random_fe_field(const Mesh& m, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::VectorXd c(DofMap(m).total_dofs());
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = g(rng);
    return FeField(m, c);
}

Outcome criterion5() {
    std::mt19937_64 rng(505);
    double worst = 0.0;
    const std::vector<Mesh> meshes{generate_square(4, 4), generate_square(8, 8, SquarePattern::CrissCross),
                                   generate_graded_square(6, 6, 4.0), generate_cube(2, 2, 2)};
    for (const Mesh& m : meshes) {
        const int d = m.dim();
        std::vector<VectorFunction> fields;
        fields.emplace_back([d](const Vec&) {
            Vec w(d);
            for (int k = 0; k < d; ++k) w(k) = 0.5 - 0.4 * k;
            return w;
        });
        fields.emplace_back([](const Vec& x) { return Vec(x); });
        fields.emplace_back([d](const Vec& x) {
            Vec w(d);
            for (int k = 0; k < d; ++k) w(k) = x((k + 1) % d) * x(k) - 0.3 * x((k + 1) % d) * x((k + 1) % d);
            return w;
        });
        for (int t = 0; t < 20; ++t) {
            const FeField psi = random_fe_field(m, rng);
            for (const VectorFunction& w : fields) worst = std::max(worst, identity_probe_wop3(m, w, psi));
        }
    }
    return {worst < 1e-10, "max residual " + num(worst)};
}

Outcome criterion6() {
    std::vector<double> c;
    for (int n : {8, 16, 32}) c.push_back(poincare_probe(generate_square(n, n), 10, 606).eigen_constant);
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    const double variation = (*hi - *lo) / *lo;
    return {variation < 0.05, "constants " + num(c[0], 6) + ", " + num(c[1], 6) + ", " + num(c[2], 6) +
                                  ", variation " + num(100 * variation, 3) + "%"};
}

Outcome criterion7() {
    std::mt19937_64 rng(707);
    double form_gap = 0.0, jump_gap = 0.0;
    const std::vector<Mesh> meshes{generate_square(8, 32), generate_square(6, 6, SquarePattern::CrissCross),
                                   generate_cube(2, 2, 2)};
    for (const Mesh& m : meshes) {
        const SparseMatrix a = assemble_wopsip(m, DofMap(m));
        for (int t = 0; t < 100; ++t) {
            const FeField v = random_fe_field(m, rng);
            const double n = wop_norm(v);
            form_gap = std::max(form_gap, std::abs(quadratic_form(a, v.coefficients()) - n * n) / (n * n));
            const double jw = jump_seminorm(m, v, JumpVariant::Jwop, m.h());
            const double jr = jump_seminorm(m, v, JumpVariant::Jrdg, m.h());
            jump_gap = std::max(jump_gap, std::abs(jr - m.h() * jw) / jr);
        }
    }
    return {form_gap < 1e-12 && jump_gap < 1e-13,
            "max relative form gap " + num(form_gap) + ", max relative jrdg - h jwop " + num(jump_gap)};
}

Outcome criterion8() {
    std::mt19937_64 rng(808);
    double duality = 0.0, p1 = 0.0, rt0 = 0.0, jumps = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = trial % 2 ? 3 : 2;
        const Simplex s = random_simplex(rng, d);
        for (int i = 0; i <= d; ++i) {
            const ScalarFunction th = [&](const Vec& x) { return cr_basis(s, i, x).value; };
            const VectorFunction rt = [&](const Vec& x) { return rt_basis(s, i, x); };
            for (int j = 0; j <= d; ++j) {
                const double delta = i == j ? 1.0 : 0.0;
                duality = std::max({duality, std::abs(cr_dof(th, s, j) - delta), std::abs(rt_dof(rt, s, j) - delta)});
            }
        }
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Vec g(d), a(d);
        for (int k = 0; k < d; ++k) {
            g(k) = u(rng);
            a(k) = u(rng);
        }
        const double c0 = u(rng), b = u(rng);
        const ScalarFunction affine = [&](const Vec& x) { return c0 + g.dot(x); };
        const Eigen::VectorXd coeffs = cr_interpolate(s, affine);
        for (int k = 0; k < 10; ++k) {
            Eigen::VectorXd lam = Eigen::VectorXd::NullaryExpr(d + 1, [&] { return std::abs(u(rng)); });
            lam /= lam.sum();
            const Vec x = s.point_from_barycentric(std::span<const double>(lam.data(), lam.size()));
            double value = 0.0;
            for (int i = 0; i <= d; ++i) value += coeffs[i] * cr_basis(s, i, x).value;
            p1 = std::max(p1, std::abs(value - affine(x)));
        }
        const RtLocalField r = rt_interpolate(s, [&](const Vec& x) { return Vec(a + b * x); });
        rt0 = std::max({rt0, (r.a - a).norm(), std::abs(r.b - b)});
    }
    const std::vector<Mesh> meshes{generate_square(8, 8), generate_graded_square(8, 4, 3.0), generate_cube(2, 2, 2)};
    for (const Mesh& m : meshes) {
        const FeField v = cr_interpolate(m, [](const Vec& x) {
            double p = 1.0;
            for (int k = 0; k < x.size(); ++k) p *= std::sin(3.0 * x(k) + 0.2 * k) + x(k) * x(k);
            return p;
        });
        for (int f = 0; f < static_cast<int>(m.num_faces()); ++f)
            if (!m.face(f).is_boundary()) jumps = std::max(jumps, std::abs(face_mean_jump(v, f)));
    }
    return {duality < 1e-12 && p1 < 1e-12 && rt0 < 1e-12 && jumps < 1e-12,
            "duality " + num(duality) + ", P1 " + num(p1) + ", RT0 " + num(rt0) + ", interior jumps " + num(jumps)};
}

double l2_on(const Simplex& s, const ScalarFunction& f) {
    return std::sqrt(integrate(simplex_rule(s.dim(), 6), s, [&](const Vec& x) { return f(x) * f(x); }));
}

Outcome criterion9() {
    // Interpolation ratios against the directional right-hand sides.
    double worst1 = 0.0, worst2 = 0.0;
    const ScalarFunction phi = [](const Vec& x) { return x(1) * x(1); };
    const VectorFunction grad_phi = [](const Vec& x) { return make_vec(0.0, 2 * x(1)); };
    const ScalarFunction u = [](const Vec& x) { return x(0) * x(0) + x(1) * x(1); };
    const VectorFunction grad_u = [](const Vec& x) { return make_vec(2 * x(0), 2 * x(1)); };
    Mat hess_u(2, 2);
    hess_u << 2, 0, 0, 2;
    for (double h1 : {1.0, 0.5, 0.1, 0.05, 0.01, 0.005, 0.001}) {
        const Simplex t = triangle(0, 0, h1, 0, 0, h1 * h1);
        const ElementCharacterization ch = characterize(t);

        const double mean = l2_project_cell(t, phi);
        const double err1 = l2_on(t, [&](const Vec& x) { return phi(x) - mean; });
        double rhs1 = 0.0;
        for (int i = 0; i < 2; ++i) rhs1 += ch.h[i] * l2_on(t, [&](const Vec& x) { return grad_phi(x).dot(ch.r[i]); });
        worst1 = std::max(worst1, err1 / rhs1);

        const Eigen::VectorXd c = cr_interpolate(t, u);
        Vec g = Vec::Zero(2);
        for (int i = 0; i < 3; ++i) g += c[i] * cr_basis(t, i, t.centroid()).gradient;
        const double err2 = std::sqrt(integrate(simplex_rule(2, 6), t, [&](const Vec& x) { return (g - grad_u(x)).squaredNorm(); }));
        double rhs2 = 0.0;
        for (int i = 0; i < 2; ++i) rhs2 += ch.h[i] * std::sqrt(t.measure()) * (hess_u * ch.r[i]).norm();
        worst2 = std::max(worst2, err2 / rhs2);
    }

    // Scheme comparison on the n×4n family, errors in the WOPSIP energy norm.
    const ExactSolution exact = exact_solution("sinsin", 2);
    std::vector<Mesh> meshes;
    for (int n : {8, 16, 32}) meshes.push_back(generate_square(n, 4 * n));
    const Study sip = run_study(meshes, {Scheme::Sip, 1.0, 10.0}, exact);
    const Study rsip = run_study(meshes, {Scheme::Rsip, 1.0, 10.0}, exact);
    const Study wop = run_study(meshes, {}, exact);
    double worst_ratio = 1.0;
    for (std::size_t k = 0; k < meshes.size(); ++k)
        for (double r : {rsip.energy[k] / sip.energy[k], wop.energy[k] / sip.energy[k]})
            worst_ratio = std::max({worst_ratio, r, 1.0 / r});

    return {worst1 < 10.0 && worst2 < 10.0 && worst_ratio <= 2.0,
            "projection ratio " + num(worst1) + ", CR ratio " + num(worst2) +
                ", worst error ratio to SIP " + num(worst_ratio) + " (SIP/RSIP/WOPSIP finest " +
                num(sip.energy.back()) + "/" + num(rsip.energy.back()) + "/" + num(wop.energy.back()) + ")"};
}

std::string shortest(double x) {
    std::array<char, 64> buf{};
    return std::string(buf.data(), std::to_chars(buf.data(), buf.data() + buf.size(), x).ptr);
}

std::string study_csv(int threads) {
    set_num_threads(threads);
    const ExactSolution exact = exact_solution("sinsin", 2);
    std::string out;
    for (int level = 0; level < 3; ++level) {
        const Mesh m = family_mesh({MeshFamily::Diagonal, 8, 2}, level);
        const ConvergenceRecord r = measure_level(m, solve_poisson(m, {}, exact.source()).field, exact, level);
        out += std::to_string(level) + ',' + shortest(r.h) + ',' + shortest(r.energy_error) + ',' +
               shortest(r.l2_error) + ',' + shortest(r.jump_seminorm) + '\n';
    }
    set_num_threads(0);
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome criterion10() {
    Outcome o;
    const bool same_lib = study_csv(1) == study_csv(3);
    o.detail = std::string("library CSV ") + (same_lib ? "identical" : "differs");
    o.pass = same_lib;

#ifdef WOPSIP_CLI_PATH
    const auto dir = std::filesystem::temp_directory_path() / "wopsip_acceptance_determinism";
    std::filesystem::remove_all(dir);
    bool cli_ok = true;
    for (const char* run : {"a", "b"}) {
        const std::string cmd = std::string("\"") + WOPSIP_CLI_PATH + "\" converge --levels 3 --aniso-ratio 4 --output-dir \"" +
                                (dir / run).string() + "\" > /dev/null";
        cli_ok = cli_ok && std::system(cmd.c_str()) == 0;
    }
    const std::string a = slurp(dir / "a" / "converge.csv");
    const bool same_cli = cli_ok && !a.empty() && a == slurp(dir / "b" / "converge.csv");
    o.pass = o.pass && same_cli;
    o.detail += std::string(", CLI converge.csv ") + (same_cli ? "identical" : "differs");
#endif

    const ExactSolution exact = exact_solution("sinsin", 2);
    const Mesh m = generate_square(16, 32);
    std::vector<int> perm(m.num_cells());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(1010));
    const Mesh p = permute_cells(m, perm);
    const double e1 = energy_error(m, solve_poisson(m, {}, exact.source()).field, exact, m.h());
    const double e2 = energy_error(p, solve_poisson(p, {}, exact.source()).field, exact, p.h());
    o.pass = o.pass && std::abs(e1 - e2) <= 1e-9;
    o.detail += ", energy error change under permutation " + num(std::abs(e1 - e2));
    return o;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "2D isotropic WOPSIP rates", criterion1},
        {2, "2D anisotropic WOPSIP rates", criterion2},
        {3, "3D Kuhn WOPSIP rates", criterion3},
        {4, "commuting RT interpolant", criterion4},
        {5, "integration-by-parts identity", criterion5},
        {6, "discrete Poincare constant", criterion6},
        {7, "norm/form agreement", criterion7},
        {8, "duality and reproduction", criterion8},
        {9, "anisotropic interpolation and scheme comparison", criterion9},
        {10, "determinism", criterion10},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << "  ("
                  << o.detail << ")" << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << "\n";
    return failures == 0 ? 0 : 1;
}
