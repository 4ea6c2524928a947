#pragma once

#include "wopsip/geometry.hpp"
#include "wopsip/types.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <cmath>
#include <random>
#include <vector>

namespace wopsip::testing {

// Random simplex in [-1,1]^d with a minimum-quality guard so the duality
// checks are not dominated by conditioning.
inline Simplex random_simplex(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        std::vector<Vec> pts(dim + 1, Vec::Zero(dim));
        for (auto& p : pts)
            for (int k = 0; k < dim; ++k) p(k) = u(rng);
        double diam = 0.0;
        for (auto& a : pts)
            for (auto& b : pts) diam = std::max(diam, (a - b).norm());
        Mat m(dim, dim);
        for (int k = 0; k < dim; ++k) m.col(k) = pts[k + 1] - pts[0];
        if (std::abs(m.determinant()) > 1e-2 * std::pow(diam, dim)) return Simplex(pts);
    }
}

inline Simplex triangle(double x0, double y0, double x1, double y1, double x2, double y2) {
    std::vector<Vec> p{make_vec(x0, y0), make_vec(x1, y1), make_vec(x2, y2)};
    return Simplex(p);
}

inline Simplex tetra(std::vector<Vec> p) { return Simplex(p); }

inline double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// ∫_{T̂} x^a y^b (z^c) over the unit right simplex = a! b! c! / (d + a + b + c)!.
inline double reference_monomial(int dim, int a, int b, int c = 0) {
    return factorial(a) * factorial(b) * (dim == 3 ? factorial(c) : 1.0) / factorial(dim + a + b + (dim == 3 ? c : 0));
}

// Random proper rotation in R^d (QR of a Gaussian matrix, sign-fixed).
inline Mat random_rotation(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> n;
    Eigen::MatrixXd g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = n(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

} // namespace wopsip::testing
