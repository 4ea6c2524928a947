#pragma once

#include "wopsip/fem.hpp"
#include "wopsip/mesh.hpp"
#include "wopsip/types.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <utility>

namespace wopsip {

enum class Scheme { Wopsip, Rsip, Sip };

/// beta is fixed to 1 for Wopsip; gamma scales κ_{F*} for Sip/Rsip only.
struct PenaltyConfig {
    Scheme variant = Scheme::Wopsip;
    double beta = 1.0;
    double gamma = 10.0;

    void validate() const;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct SparseSystem {
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
};

/// (ω_1, ω_2) for owner and neighbour of an interior face; (1, 0) on the boundary.
std::pair<double, double> face_weights(const Mesh& mesh, int face);

/// κ_{F*}: (√ℓ_1 + √ℓ_2)^{-2} inside, ℓ^{-1} on the boundary.
double kappa_star(const Mesh& mesh, int face);

/// Wopsip: κ_F = h^{-2} κ_{F*}. Sip/Rsip: gamma · κ_{F*}.
double kappa(const Mesh& mesh, int face, double h, const PenaltyConfig& config);

/// ∫∇_h v·∇_h w + Σ_F κ_F |F| Π_F⁰[[v]] Π_F⁰[[w]], with h = mesh.h().
SparseMatrix assemble_wopsip(const Mesh& mesh, const DofMap& dofs);

/// Same structure with κ_{F*} in place of κ_F: the quadratic form is |v|²_rdg.
SparseMatrix assemble_rdg(const Mesh& mesh, const DofMap& dofs);

/// CR mass matrix ∫ θ_i θ_j (block diagonal).
SparseMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs);

/// Symmetric interior penalty (full-jump penalty) or its reduced variant
/// (face-mean penalty). With check_definite a failed Cholesky factorisation
/// raises IndefiniteMatrix.
SparseMatrix assemble_sip_rsip(const Mesh& mesh, const DofMap& dofs, const PenaltyConfig& config,
                               bool check_definite = false);

SparseMatrix assemble_matrix(const Mesh& mesh, const DofMap& dofs, const PenaltyConfig& config,
                             bool check_definite = false);

/// rhs_i = Σ_T ∫_T f θ_i.
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofs, const ScalarFunction& f,
                              int degree = k_default_volume_degree);

SparseSystem assemble_system(const Mesh& mesh, const PenaltyConfig& config, const ScalarFunction& f,
                             bool check_definite = false);

/// a(v, v) for the given matrix.
double quadratic_form(const SparseMatrix& matrix, const Eigen::VectorXd& v);

/// |LHS - RHS| of ∫(I^RT w·∇_h ψ + div I^RT w ψ) = Σ_int ∫ w·n_F Π_F⁰[[ψ]] + Σ_bdry ∫ (w·n) Π_F⁰ψ.
double identity_probe_wop3(const Mesh& mesh, const VectorFunction& w, const FeField& psi,
                           int degree = k_default_volume_degree);

} // namespace wopsip
