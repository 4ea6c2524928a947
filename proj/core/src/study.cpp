#include "wopsip/study.hpp"

#include "wopsip/errors.hpp"

namespace wopsip {

MeshFamily parse_family(const std::string& name) {
    if (name == "diagonal") return MeshFamily::Diagonal;
    if (name == "crisscross") return MeshFamily::CrissCross;
    if (name == "kuhn") return MeshFamily::Kuhn;
    if (name == "graded") return MeshFamily::Graded;
    throw InvalidParameter("unknown mesh family '" + name + "'");
}

std::string to_string(MeshFamily family) {
    switch (family) {
    case MeshFamily::Diagonal: return "diagonal";
    case MeshFamily::CrissCross: return "crisscross";
    case MeshFamily::Kuhn: return "kuhn";
    case MeshFamily::Graded: return "graded";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "wopsip") return Scheme::Wopsip;
    if (name == "sip") return Scheme::Sip;
    if (name == "rsip") return Scheme::Rsip;
    throw InvalidParameter("unknown scheme '" + name + "'");
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::Wopsip: return "wopsip";
    case Scheme::Sip: return "sip";
    case Scheme::Rsip: return "rsip";
    }
    return "?";
}

Mesh family_mesh(const FamilySpec& spec, int level) {
    if (spec.base < 1 || spec.aniso_ratio < 1 || level < 0 || level > 20)
        throw InvalidParameter("invalid refinement family parameters");
    const int n = spec.base << level;
    const int m = n * spec.aniso_ratio;
    switch (spec.family) {
    case MeshFamily::Diagonal: return generate_square(n, m, SquarePattern::Diagonal);
    case MeshFamily::CrissCross: return generate_square(n, m, SquarePattern::CrissCross);
    case MeshFamily::Graded: return generate_graded_square(n, m, spec.grading);
    case MeshFamily::Kuhn: return generate_cube(n, n, m);
    }
    throw InvalidParameter("unknown mesh family");
}

DiscreteSolution solve_poisson(const Mesh& mesh, const PenaltyConfig& config, const ScalarFunction& f,
                               const SolveOptions& options) {
    const SparseSystem system = assemble_system(mesh, config, f);
    SolveResult r = solve_spd(system, options);
    return {FeField(mesh, std::move(r.x)), r.report};
}

ConvergenceRecord measure_level(const Mesh& mesh, const FeField& field, const ExactSolution& exact, int level) {
    ConvergenceRecord rec;
    rec.level = level;
    rec.h = mesh.h();
    rec.dofs = static_cast<long>(field.coefficients().size());
    rec.energy_error = energy_error(mesh, field, exact, mesh.h());
    rec.l2_error = l2_error(mesh, field, exact);
    rec.jump_seminorm = jump_seminorm(mesh, field, JumpVariant::Jwop, mesh.h());
    return rec;
}

} // namespace wopsip
