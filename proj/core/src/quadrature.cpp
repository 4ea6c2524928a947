#include "wopsip/quadrature.hpp"

#include "wopsip/errors.hpp"

#include <string>

namespace wopsip {

namespace {

#include "quadrature_tables.inc"

template <std::size_t N, std::size_t C>
QuadratureRule make_rule(int dim, int degree, const double (&table)[N][C]) {
    static_assert(C >= 2);
    QuadratureRule rule;
    rule.dim = dim;
    rule.exact_degree = degree;
    for (std::size_t q = 0; q < N; ++q) {
        std::array<double, 4> p{};
        for (std::size_t i = 0; i + 1 < C; ++i) p[i] = table[q][i];
        rule.points.push_back(p);
        rule.weights.push_back(table[q][C - 1]);
    }
    return rule;
}

QuadratureRule centroid(int dim) {
    QuadratureRule rule;
    rule.dim = dim;
    rule.exact_degree = 1;
    std::array<double, 4> p{};
    for (int i = 0; i <= dim; ++i) p[i] = 1.0 / (dim + 1);
    rule.points.push_back(p);
    rule.weights.push_back(1.0);
    return rule;
}

struct RuleTable {
    // rules[dim][degree]
    std::array<std::array<QuadratureRule, k_max_quadrature_degree + 1>, 4> rules;

    RuleTable() {
        const QuadratureRule line[] = {make_rule(1, 1, k_line_gauss1), make_rule(1, 3, k_line_gauss2),
                                       make_rule(1, 5, k_line_gauss3), make_rule(1, 7, k_line_gauss4)};
        for (int deg = 0; deg <= k_max_quadrature_degree; ++deg) rules[1][deg] = line[deg / 2];

        const QuadratureRule tri2 = make_rule(2, 2, k_tri_deg2);
        const QuadratureRule tri4 = make_rule(2, 4, k_tri_deg4);
        rules[2] = {centroid(2), centroid(2), tri2, tri4, tri4, make_rule(2, 5, k_tri_deg5), make_rule(2, 6, k_tri_deg6)};

        const QuadratureRule tet5 = make_rule(3, 5, k_tet_deg5);
        rules[3] = {centroid(3), centroid(3), make_rule(3, 2, k_tet_deg2), tet5, tet5, tet5, make_rule(3, 6, k_tet_deg6)};
    }
};

} // namespace

const QuadratureRule& simplex_rule(int dim, int degree) {
    static const RuleTable table;
    if (dim < 1 || dim > 3) throw InvalidParameter("quadrature dimension must be 1, 2 or 3");
    if (degree < 0 || degree > k_max_quadrature_degree)
        throw UnsupportedDegree("no tabulated rule of degree " + std::to_string(degree));
    return table.rules[dim][degree];
}

double integrate(const QuadratureRule& rule, const Simplex& simplex, const ScalarFunction& f) {
    if (rule.dim != simplex.dim()) throw DimensionMismatch("rule dimension does not match simplex");
    double sum = 0.0;
    for_each_point(rule, simplex.vertices(), simplex.measure(), [&](const Vec& x, double w) { sum += w * f(x); });
    return sum;
}

double integrate_facet(const QuadratureRule& rule, const PointSet& vertices, const ScalarFunction& f) {
    if (rule.dim + 1 != vertices.cols()) throw DimensionMismatch("rule dimension does not match facet");
    double sum = 0.0;
    for_each_point(rule, vertices, facet_measure(vertices), [&](const Vec& x, double w) { sum += w * f(x); });
    return sum;
}

double integrate_face(const QuadratureRule& rule, const Simplex& simplex, int face, const ScalarFunction& f) {
    if (rule.dim != simplex.dim() - 1) throw DimensionMismatch("face rule must have dimension d-1");
    return integrate_facet(rule, simplex.face_vertices(face), f);
}

} // namespace wopsip
