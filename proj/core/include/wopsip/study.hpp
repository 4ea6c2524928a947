#pragma once

#include "wopsip/analysis.hpp"
#include "wopsip/assembly.hpp"
#include "wopsip/fem.hpp"
#include "wopsip/mesh.hpp"
#include "wopsip/solver.hpp"

#include <string>

namespace wopsip {

enum class MeshFamily { Diagonal, CrissCross, Kuhn, Graded };

/// Throws InvalidParameter on unknown names.
MeshFamily parse_family(const std::string& name);
std::string to_string(MeshFamily family);
Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme scheme);

/// Level k of a refinement family has n = base·2^k cells per unit edge along
/// x (and y in 3D); the last axis gets aniso_ratio·n.
struct FamilySpec {
    MeshFamily family = MeshFamily::Diagonal;
    int base = 8;
    int aniso_ratio = 1;
    double grading = 4.0; // Graded family only

    int dim() const { return family == MeshFamily::Kuhn ? 3 : 2; }
};

Mesh family_mesh(const FamilySpec& spec, int level);

struct DiscreteSolution {
    FeField field;
    SolveReport report;
};

/// Assembles and solves -Δu = f with the chosen scheme; Sip/Rsip matrices
/// that fail to factor raise IndefiniteMatrix.
DiscreteSolution solve_poisson(const Mesh& mesh, const PenaltyConfig& config, const ScalarFunction& f,
                               const SolveOptions& options = {});

/// Errors of one level (rates left empty). The energy error uses the WOPSIP
/// norm for every scheme.
ConvergenceRecord measure_level(const Mesh& mesh, const FeField& field, const ExactSolution& exact, int level);

} // namespace wopsip
