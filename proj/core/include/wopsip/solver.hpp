#pragma once

#include "wopsip/assembly.hpp"

#include <Eigen/Core>

#include <memory>
#include <optional>

namespace wopsip {

enum class SolveMethod { DirectCholesky, PcgJacobi };

struct SolveOptions {
    SolveMethod method = SolveMethod::DirectCholesky;
    double tol = 1e-10;               // relative residual ‖Ax - b‖/‖b‖
    bool estimate_condition = false;  // power / inverse power iteration on A
    long max_iterations = 0;          // PCG only; 0 means 20·n
};

struct SolveReport {
    SolveMethod method = SolveMethod::DirectCholesky;
    long iterations = 0;
    double final_residual = 0.0;
    double rounding_floor = 0.0; // ε‖|A||x|‖/‖b‖
    std::optional<double> condition_estimate;
};

struct SolveResult {
    Eigen::VectorXd x;
    SolveReport report;
};

/// Cholesky factorisation with approximate-minimum-degree ordering, reusable
/// for many right-hand sides. Throws IndefiniteMatrix on a non-positive pivot.
class SpdFactorization {
public:
    explicit SpdFactorization(const SparseMatrix& matrix);
    ~SpdFactorization();
    SpdFactorization(SpdFactorization&&) noexcept;
    SpdFactorization& operator=(SpdFactorization&&) noexcept;

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// A solve succeeds when the relative residual is below
/// max(tol, k_floor_factor · rounding_floor). Over-penalised systems at fine
/// levels have a rounding floor above 1e-10, so a fixed tolerance alone
/// would reject solutions that are exact to working precision.
inline constexpr double k_floor_factor = 4.0;

/// Throws InvalidParameter for a non-symmetric matrix or non-finite rhs,
/// IndefiniteMatrix on Cholesky failure and NoConvergence when PCG exceeds
/// its iteration budget or the tolerance cannot be reached.
SolveResult solve_spd(const SparseMatrix& matrix, const Eigen::VectorXd& rhs, const SolveOptions& options = {});
SolveResult solve_spd(const SparseSystem& system, const SolveOptions& options = {});

bool is_positive_definite(const SparseMatrix& matrix);

/// λ_max/λ_min from 60 power and 60 inverse-power steps.
double estimate_condition(const SparseMatrix& matrix);

} // namespace wopsip
