#include "wopsip/solver.hpp"

#include "wopsip/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>

namespace wopsip {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Cholesky = Eigen::SimplicialLLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

void check_symmetric(const SparseMatrix& A) {
    if (A.rows() != A.cols()) throw InvalidParameter("matrix must be square");
    const SparseMatrix At = A.transpose();
    double scale = 0.0;
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(A, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
    double asym = 0.0;
    const SparseMatrix diff = A - At;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) asym = std::max(asym, std::abs(it.value()));
    if (asym > 1e-12 * scale) throw InvalidParameter("matrix is not symmetric");
}

// b - Ax accumulated in long double so refinement is not limited by the
// rounding of the residual itself.
Eigen::VectorXd residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    Eigen::VectorXd r(b.size());
    for (Eigen::Index i = 0; i < A.outerSize(); ++i) {
        long double acc = b[i];
        for (SparseMatrix::InnerIterator it(A, i); it; ++it)
            acc -= static_cast<long double>(it.value()) * static_cast<long double>(x[it.col()]);
        r[i] = static_cast<double>(acc);
    }
    return r;
}

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    const double nb = b.norm();
    const double nr = residual(A, x, b).norm();
    return nb > 0.0 ? nr / nb : nr;
}

// ε‖|A||x|‖/‖b‖: the residual level at which x is already correct to rounding.
double rounding_floor(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    Eigen::VectorXd ax(b.size());
    for (Eigen::Index i = 0; i < A.outerSize(); ++i) {
        double acc = 0.0;
        for (SparseMatrix::InnerIterator it(A, i); it; ++it) acc += std::abs(it.value() * x[it.col()]);
        ax[i] = acc;
    }
    const double nb = b.norm();
    return std::numeric_limits<double>::epsilon() * ax.norm() / (nb > 0.0 ? nb : 1.0);
}

} // namespace

struct SpdFactorization::Impl {
    Cholesky llt;
};

SpdFactorization::SpdFactorization(const SparseMatrix& matrix) : impl_(std::make_unique<Impl>()) {
    const ColMatrix A = matrix;
    impl_->llt.compute(A);
    if (impl_->llt.info() != Eigen::Success)
        throw IndefiniteMatrix("Cholesky factorisation failed: matrix is not positive definite");
}

SpdFactorization::~SpdFactorization() = default;
SpdFactorization::SpdFactorization(SpdFactorization&&) noexcept = default;
SpdFactorization& SpdFactorization::operator=(SpdFactorization&&) noexcept = default;

Eigen::VectorXd SpdFactorization::solve(const Eigen::VectorXd& b) const { return impl_->llt.solve(b); }

bool is_positive_definite(const SparseMatrix& matrix) {
    Cholesky llt;
    llt.compute(ColMatrix(matrix));
    return llt.info() == Eigen::Success;
}

double estimate_condition(const SparseMatrix& matrix) {
    const Eigen::Index n = matrix.rows();
    if (n == 0) return 1.0;
    const SpdFactorization factor(matrix);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
    Eigen::VectorXd u = v;
    double lmax = 0.0, inv_lmin = 0.0;
    for (int k = 0; k < 60; ++k) {
        Eigen::VectorXd w = matrix * v;
        lmax = v.dot(w);
        v = w.normalized();
        Eigen::VectorXd z = factor.solve(u);
        inv_lmin = u.dot(z);
        u = z.normalized();
    }
    return lmax * inv_lmin;
}

SolveResult solve_spd(const SparseMatrix& matrix, const Eigen::VectorXd& rhs, const SolveOptions& options) {
    if (matrix.rows() != rhs.size()) throw DimensionMismatch("matrix and rhs sizes differ");
    if (!rhs.allFinite()) throw InvalidParameter("rhs contains non-finite values");
    if (!(options.tol > 0.0)) throw InvalidParameter("tolerance must be positive");
    check_symmetric(matrix);

    SolveResult result;
    result.report.method = options.method;
    const Eigen::Index n = matrix.rows();

    if (options.method == SolveMethod::DirectCholesky) {
        const SpdFactorization factor(matrix);
        result.x = factor.solve(rhs);
        // A few steps of iterative refinement absorb the rounding from the
        // large penalty scaling.
        for (int step = 0; step < 5 && relative_residual(matrix, result.x, rhs) > 0.01 * options.tol; ++step)
            result.x += factor.solve(residual(matrix, result.x, rhs));
    } else {
        const ColMatrix A = matrix;
        Eigen::ConjugateGradient<ColMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
        const long budget = options.max_iterations > 0 ? options.max_iterations : 20 * static_cast<long>(n);
        cg.setMaxIterations(budget);
        cg.setTolerance(0.5 * options.tol);
        cg.compute(A);
        result.x = cg.solve(rhs);
        result.report.iterations = cg.iterations();
        if (cg.info() != Eigen::Success)
            throw NoConvergence("PCG did not converge within " + std::to_string(budget) + " iterations");
    }

    result.report.final_residual = relative_residual(matrix, result.x, rhs);
    result.report.rounding_floor = rounding_floor(matrix, result.x, rhs);
    if (!(result.report.final_residual <= std::max(options.tol, k_floor_factor * result.report.rounding_floor)))
        throw NoConvergence("relative residual " + std::to_string(result.report.final_residual) +
                            " exceeds tolerance");
    if (options.estimate_condition) result.report.condition_estimate = estimate_condition(matrix);
    return result;
}

SolveResult solve_spd(const SparseSystem& system, const SolveOptions& options) {
    return solve_spd(system.matrix, system.rhs, options);
}

} // namespace wopsip
