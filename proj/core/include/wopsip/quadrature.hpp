#pragma once

#include "wopsip/geometry.hpp"
#include "wopsip/types.hpp"

#include <array>
#include <vector>

namespace wopsip {

/// Symmetric rule on the reference d-simplex in barycentric form. Weights are
/// normalised so they sum to one; integrals are |T| Σ w_q f(x_q).
struct QuadratureRule {
    int dim = 0;
    int exact_degree = 0;
    std::vector<std::array<double, 4>> points; // d+1 barycentric coordinates used
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

inline constexpr int k_default_volume_degree = 4;
inline constexpr int k_default_face_degree = 4;
inline constexpr int k_max_quadrature_degree = 6;

/// Cheapest tabulated rule on the d-simplex (d ∈ {1,2,3}) exact to `degree`
/// (0 ≤ degree ≤ 6). Throws UnsupportedDegree / InvalidParameter.
const QuadratureRule& simplex_rule(int dim, int degree);

/// Calls fn(x, w) for each quadrature point of the simplex spanned by the
/// columns of `vertices`, where w already includes the measure.
template <class Fn>
void for_each_point(const QuadratureRule& rule, const PointSet& vertices, double measure, Fn&& fn) {
    const int n = static_cast<int>(vertices.cols());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        Vec x = Vec::Zero(vertices.rows());
        for (int i = 0; i < n; ++i) x += rule.points[q][i] * vertices.col(i);
        fn(x, measure * rule.weights[q]);
    }
}

/// ∫_T f over a d-simplex. Throws DimensionMismatch when rule.dim != d.
double integrate(const QuadratureRule& rule, const Simplex& simplex, const ScalarFunction& f);

/// ∫_F f over the face of `simplex` opposite `face`; the rule must be (d-1)-dimensional.
double integrate_face(const QuadratureRule& rule, const Simplex& simplex, int face, const ScalarFunction& f);

/// ∫ f over the (k-1)-simplex spanned by the k columns of `vertices`.
double integrate_facet(const QuadratureRule& rule, const PointSet& vertices, const ScalarFunction& f);

} // namespace wopsip
