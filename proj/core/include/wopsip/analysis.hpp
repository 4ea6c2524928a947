#pragma once

#include "wopsip/assembly.hpp"
#include "wopsip/fem.hpp"
#include "wopsip/mesh.hpp"
#include "wopsip/solver.hpp"
#include "wopsip/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wopsip {

using MatrixFunction = std::function<Mat(const Vec&)>;

/// Manufactured solution with analytic derivatives; f = -Δu.
struct ExactSolution {
    std::string name;
    int dim = 2;
    ScalarFunction u;
    VectorFunction grad;
    ScalarFunction laplacian;
    MatrixFunction hessian;

    ScalarFunction source() const {
        return [lap = laplacian](const Vec& x) { return -lap(x); };
    }
};

/// Catalog keys: "sinsin" (Π sin(πx_k), d = 2 or 3), "poly" (Π x_k(1-x_k)),
/// "layer" (2D, sin(πx)(1-e^{-y/ε})(1-e^{-(1-y)/ε}) with ε = `epsilon`).
/// Throws InvalidParameter for unknown keys or dimensions.
ExactSolution exact_solution(const std::string& name, int dim, double epsilon = 0.05);
std::vector<std::string> exact_solution_names();

inline constexpr int k_error_quadrature_degree = 6;

/// (Σ_T ∫_T |∇u - ∇u_h|²)^{1/2}.
double broken_h1_error(const Mesh& mesh, const FeField& field, const ExactSolution& exact,
                       int degree = k_error_quadrature_degree);
/// |v|_{H¹(T_h)} of the discrete field alone.
double broken_h1_seminorm(const FeField& field);

enum class JumpVariant { Jwop, Jrdg };

/// (Σ_F κ ‖Π_F⁰[[v]]‖²_{L²(F)})^{1/2} with κ_F = h^{-2}κ_{F*} (Jwop) or κ_{F*}
/// (Jrdg). Face means come from quadrature of the traces, not from DOFs.
double jump_seminorm(const Mesh& mesh, const FeField& field, JumpVariant variant, double h);

/// |v|_wop = (|v|²_{H¹(T_h)} + |v|²_jwop)^{1/2} with h = mesh.h().
double wop_norm(const FeField& field);
double rdg_norm(const FeField& field);

/// |u - u_h|_wop, using that u vanishes on ∂Ω and has no interior jumps.
/// Throws BoundaryMismatch when u exceeds 1e-10 at sampled boundary points.
double energy_error(const Mesh& mesh, const FeField& field, const ExactSolution& exact, double h);

double l2_error(const Mesh& mesh, const FeField& field, const ExactSolution& exact,
                int degree = k_error_quadrature_degree);
double l2_norm(const FeField& field);

struct PoincareResult {
    double eigen_constant = 0.0;   // sqrt of the largest eigenvalue of M v = λ R v
    double sampled_constant = 0.0; // max over random fields of ‖ψ‖/|ψ|_rdg
    int iterations = 0;
};

/// Discrete Poincaré constant max ‖ψ_h‖/|ψ_h|_rdg by inverse power iteration
/// plus random sampling. The eigen part is independent of the seed.
PoincareResult poincare_probe(const Mesh& mesh, int samples, std::uint64_t seed);

/// (Σ_i Σ_T h_i² ‖∂(∇u)/∂r_i‖²_{L²(T)})^{1/2} with the per-cell frame from characterize().
double directional_seminorm(const Mesh& mesh, const MatrixFunction& hessian, int degree = k_error_quadrature_degree);
/// h·|u|_{H²} with the global h, the isotropic counterpart.
double isotropic_h2_seminorm(const Mesh& mesh, const MatrixFunction& hessian, int degree = k_error_quadrature_degree);

struct ConvergenceRecord {
    int level = 0;
    double h = 0.0;
    long dofs = 0;
    double energy_error = 0.0;
    double l2_error = 0.0;
    double jump_seminorm = 0.0;
    std::optional<double> rate_energy;
    std::optional<double> rate_l2;
};

/// rate_k = log(e_{k-1}/e_k)/log(h_{k-1}/h_k). Throws InsufficientLevels below two records.
std::vector<ConvergenceRecord> compute_rates(std::vector<ConvergenceRecord> records);

/// Least-squares slope of log(e) against log(h).
double least_squares_slope(std::span<const double> h, std::span<const double> errors);

/// E_h(u) = sup_w |a_h^wop(u, w) - ℓ_h(w)| / |w|_wop = (rᵀ A^{-1} r)^{1/2}, with
/// r_i = ∫∇u·∇θ_i - ∫ f θ_i and A the WOPSIP matrix of `factor`.
double consistency_error(const Mesh& mesh, const SpdFactorization& factor, const ExactSolution& exact,
                         int degree = k_error_quadrature_degree);

} // namespace wopsip
