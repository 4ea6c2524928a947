#include "commands.hpp"

#include "wopsip/analysis.hpp"
#include "wopsip/errors.hpp"
#include "wopsip/fem.hpp"
#include "wopsip/geometry.hpp"
#include "wopsip/parallel.hpp"
#include "wopsip/solver.hpp"
#include "wopsip/vtk.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <random>
#include <vector>

namespace wopsip::cli {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

std::string optional_cell(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

void write_manifest(const RunConfig& c, const Resolved& r, const std::vector<std::string>& outputs) {
    nlohmann::ordered_json j;
    j["command"] = c.command;
    j["scheme"] = to_string(r.penalty.variant);
    j["dim"] = r.dim;
    j["family"] = to_string(r.family.family);
    j["levels"] = c.levels;
    j["base"] = r.family.base;
    j["aniso_ratio"] = r.family.aniso_ratio;
    j["gamma"] = r.penalty.gamma;
    j["grading"] = r.family.grading;
    j["solution"] = c.solution;
    j["seed"] = c.seed;
    j["threads"] = num_threads();
    j["outputs"] = outputs;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    j["timestamp"] = fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
    std::ofstream out = open_output(c.output_dir / "run.json");
    out << j.dump(2) << '\n';
}

ExactSolution solution_for(const RunConfig& c, int dim) {
    try {
        return exact_solution(c.solution, dim);
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }
}

// Random vector field with quadratic components and its analytic divergence.
VectorField random_quadratic_field(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Coeffs {
        std::array<double, 3> c{};
        std::array<std::array<double, 3>, 3> b{};
        std::array<std::array<std::array<double, 3>, 3>, 3> q{};
    };
    Coeffs k;
    for (int i = 0; i < dim; ++i) {
        k.c[i] = u(rng);
        for (int j = 0; j < dim; ++j) {
            k.b[i][j] = u(rng);
            for (int l = j; l < dim; ++l) k.q[i][j][l] = u(rng);
        }
    }
    VectorField v;
    v.value = [k, dim](const Vec& x) {
        Vec out = Vec::Zero(dim);
        for (int i = 0; i < dim; ++i) {
            double s = k.c[i];
            for (int j = 0; j < dim; ++j) {
                s += k.b[i][j] * x(j);
                for (int l = j; l < dim; ++l) s += k.q[i][j][l] * x(j) * x(l);
            }
            out(i) = s;
        }
        return out;
    };
    v.divergence = [k, dim](const Vec& x) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            s += k.b[i][i];
            for (int j = 0; j < dim; ++j)
                for (int l = j; l < dim; ++l) {
                    if (j == i) s += k.q[i][j][l] * x(l);
                    if (l == i) s += k.q[i][j][l] * x(j);
                }
        }
        return s;
    };
    return v;
}

std::vector<VectorFunction> polynomial_fields(int dim) {
    if (dim == 2)
        return {[](const Vec&) { return make_vec(0.3, -1.2); }, [](const Vec& x) { return Vec(x); },
                [](const Vec& x) { return make_vec(x(0) * x(1), x(1) * x(1) - x(0)); }};
    return {[](const Vec&) { return make_vec(0.3, -1.2, 0.7); }, [](const Vec& x) { return Vec(x); },
            [](const Vec& x) { return make_vec(x(0) * x(2), x(1) * x(1) - x(0), x(0) * x(1) + x(2)); }};
}

FeField random_fe_field(const Mesh& m, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::VectorXd c(DofMap(m).total_dofs());
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = g(rng);
    return FeField(m, c);
}

} // namespace

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

Resolved resolve(const RunConfig& c) {
    Resolved r;
    MeshFamily family = MeshFamily::Diagonal;
    if (c.family) {
        try {
            family = parse_family(*c.family);
        } catch (const InvalidParameter& e) {
            throw UsageError(e.what());
        }
    } else if (c.dim && *c.dim == 3) {
        family = MeshFamily::Kuhn;
    }
    r.family.family = family;
    r.dim = r.family.dim();
    if (c.dim && *c.dim != r.dim)
        throw UsageError(fmt::format("family '{}' is {}D but --dim {} was given", to_string(family), r.dim, *c.dim));

    try {
        r.penalty.variant = parse_scheme(c.scheme);
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }
    if (r.penalty.variant != Scheme::Wopsip) {
        if (!(c.gamma > 0.0) || !std::isfinite(c.gamma)) throw UsageError("--gamma must be positive");
        r.penalty.gamma = c.gamma;
    }

    const int min_levels = c.command == "converge" ? 2 : 1;
    if (c.levels < min_levels) throw UsageError(fmt::format("--levels must be at least {} for {}", min_levels, c.command));
    if (c.base < 0) throw UsageError("--base must be positive");
    if (c.aniso_ratio < 1) throw UsageError("--aniso-ratio must be at least 1");
    if (!(c.grading > 0.0)) throw UsageError("--grading must be positive");
    r.family.base = c.base > 0 ? c.base : (r.dim == 3 ? 2 : 8);
    r.family.aniso_ratio = c.aniso_ratio;
    r.family.grading = c.grading;
    return r;
}

int run_converge(const RunConfig& c, std::ostream& log) {
    const Resolved r = resolve(c);
    const ExactSolution exact = solution_for(c, r.dim);
    ensure_dir(c.output_dir);

    std::vector<ConvergenceRecord> records;
    std::vector<std::string> outputs{"converge.csv"};
    for (int level = 0; level < c.levels; ++level) {
        const Mesh mesh = family_mesh(r.family, level);
        const DiscreteSolution sol = solve_poisson(mesh, r.penalty, exact.source());
        records.push_back(measure_level(mesh, sol.field, exact, level));

        const std::string vtk = fmt::format("solution_L{}.vtk", level);
        std::ofstream out = open_output(c.output_dir / vtk);
        write_vtk_field(out, sol.field, "u_h");
        outputs.push_back(vtk);
        log << fmt::format("level {}: cells {}, dofs {}, residual {:.3e}\n", level, mesh.num_cells(),
                           records.back().dofs, sol.report.final_residual);
    }
    records = compute_rates(std::move(records));

    {
        std::ofstream csv = open_output(c.output_dir / "converge.csv");
        csv << "level,h,dofs,energy_err,l2_err,jump_seminorm,rate_energy,rate_l2\n";
        for (const ConvergenceRecord& rec : records)
            csv << rec.level << ',' << format_double(rec.h) << ',' << rec.dofs << ',' << format_double(rec.energy_error)
                << ',' << format_double(rec.l2_error) << ',' << format_double(rec.jump_seminorm) << ','
                << optional_cell(rec.rate_energy) << ',' << optional_cell(rec.rate_l2) << '\n';
    }
    write_manifest(c, r, outputs);

    log << fmt::format("{:>5} {:>12} {:>8} {:>12} {:>12} {:>8} {:>8}\n", "level", "h", "dofs", "energy", "l2",
                       "r_en", "r_l2");
    for (const ConvergenceRecord& rec : records)
        log << fmt::format("{:>5} {:>12.5e} {:>8} {:>12.5e} {:>12.5e} {:>8} {:>8}\n", rec.level, rec.h, rec.dofs,
                           rec.energy_error, rec.l2_error,
                           rec.rate_energy ? fmt::format("{:.3f}", *rec.rate_energy) : "-",
                           rec.rate_l2 ? fmt::format("{:.3f}", *rec.rate_l2) : "-");

    if (c.assert_rates) {
        const ConvergenceRecord& last = records.back();
        const bool ok = *last.rate_energy >= c.min_energy_rate && *last.rate_l2 >= c.min_l2_rate;
        if (!ok) {
            log << fmt::format("rate assertion failed: energy {:.3f} (min {}), l2 {:.3f} (min {})\n", *last.rate_energy,
                               c.min_energy_rate, *last.rate_l2, c.min_l2_rate);
            return k_exit_rates;
        }
        log << "rate assertion passed\n";
    }
    return k_exit_ok;
}

int run_probe(const RunConfig& c, std::ostream& log) {
    const Resolved r = resolve(c);
    const ExactSolution exact = solution_for(c, r.dim);
    ensure_dir(c.output_dir);

    std::ofstream csv = open_output(c.output_dir / "probe.csv");
    csv << "probe,level,value\n";
    auto row = [&](const char* name, int level, double value) {
        csv << name << ',' << level << ',' << format_double(value) << '\n';
        log << fmt::format("{:<18} level {}  {:.6e}\n", name, level, value);
    };

    const auto fields = polynomial_fields(r.dim);
    for (int level = 0; level < c.levels; ++level) {
        const Mesh mesh = family_mesh(r.family, level);
        std::mt19937_64 rng(c.seed + static_cast<std::uint64_t>(level));

        double commuting = 0.0;
        for (int t = 0; t < 50; ++t)
            commuting = std::max(commuting, commuting_check(mesh, random_quadratic_field(rng, r.dim)));
        row("commuting", level, commuting);

        double wop3 = 0.0;
        for (int t = 0; t < 20; ++t) {
            const FeField psi = random_fe_field(mesh, rng);
            for (const VectorFunction& w : fields) wop3 = std::max(wop3, identity_probe_wop3(mesh, w, psi));
        }
        row("wop3", level, wop3);

        const PoincareResult p = poincare_probe(mesh, 20, c.seed);
        row("poincare", level, p.eigen_constant);
        row("poincare_sampled", level, p.sampled_constant);

        const SpdFactorization factor(assemble_wopsip(mesh, DofMap(mesh)));
        row("consistency", level, consistency_error(mesh, factor, exact));
    }
    write_manifest(c, r, {"probe.csv"});
    return k_exit_ok;
}

int run_meshinfo(const RunConfig& c, std::ostream& log) {
    const Resolved r = resolve(c);
    ensure_dir(c.output_dir);

    std::vector<std::string> outputs{"mesh.csv"};
    std::ofstream csv = open_output(c.output_dir / "mesh.csv");
    csv << "level,cells,faces,boundary_faces,h,min_h,max_angle,gamma0,max_aspect,type2_count\n";
    for (int level = 0; level < c.levels; ++level) {
        const Mesh mesh = family_mesh(r.family, level);
        const MeshStats s = stats(mesh);
        csv << level << ',' << s.cell_count << ',' << s.face_count << ',' << s.boundary_face_count << ','
            << format_double(s.h) << ',' << format_double(s.min_h) << ',' << format_double(s.max_angle) << ','
            << format_double(s.gamma0) << ',' << format_double(s.max_aspect) << ',' << s.type2_count << '\n';
        log << fmt::format("level {}: {} cells, {} faces ({} boundary), h {:.4g}, gamma0 {:.4g}, max angle {:.4g}\n",
                           level, s.cell_count, s.face_count, s.boundary_face_count, s.h, s.gamma0, s.max_angle);

        std::vector<double> h_ratio(mesh.num_cells()), type(mesh.num_cells()), angle(mesh.num_cells());
        for (int cell = 0; cell < static_cast<int>(mesh.num_cells()); ++cell) {
            const Simplex simplex = mesh.simplex(cell);
            const ElementCharacterization ch = characterize(simplex);
            h_ratio[cell] = ch.H_over_h;
            type[cell] = ch.shape_type == ShapeType::TypeI ? 1.0 : 2.0;
            angle[cell] = max_angle(simplex);
        }
        const std::string vtk = fmt::format("mesh_L{}.vtk", level);
        std::ofstream out = open_output(c.output_dir / vtk);
        write_vtk_mesh(out, mesh, {{"H_over_h", h_ratio}, {"shape_type", type}, {"max_angle", angle}});
        outputs.push_back(vtk);
    }
    write_manifest(c, r, outputs);
    return k_exit_ok;
}

} // namespace wopsip::cli
