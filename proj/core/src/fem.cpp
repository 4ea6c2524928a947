#include "wopsip/fem.hpp"

#include "wopsip/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wopsip {

FeField::FeField(const Mesh& mesh, Eigen::VectorXd coefficients) : mesh_(&mesh), coef_(std::move(coefficients)) {
    if (coef_.size() != static_cast<Eigen::Index>(mesh.num_cells()) * (mesh.dim() + 1))
        throw DimensionMismatch("coefficient vector does not match the CR DOF map");
}

FeField FeField::zero(const Mesh& mesh) {
    return FeField(mesh, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_cells()) * (mesh.dim() + 1)));
}

double FeField::value(int cell, const Vec& x) const { return value(mesh_->simplex(cell), cell, x); }

double FeField::value(const Simplex& simplex, int cell, const Vec& x) const {
    const int d = simplex.dim();
    const auto lambda = simplex.barycentric(x);
    double s = 0.0;
    for (int i = 0; i <= d; ++i) s += coefficient(cell, i) * (1.0 - d * lambda[i]);
    return s;
}

Vec FeField::gradient(int cell) const { return gradient(mesh_->simplex(cell), cell); }

Vec FeField::gradient(const Simplex& simplex, int cell) const {
    const int d = simplex.dim();
    Vec g = Vec::Zero(d);
    for (int i = 0; i <= d; ++i) g -= d * coefficient(cell, i) * simplex.barycentric_gradient(i);
    return g;
}

CrBasisValue cr_basis(const Simplex& simplex, int i, const Vec& x) {
    const int d = simplex.dim();
    if (i < 0 || i > d) throw InvalidParameter("local face index out of range");
    const double lambda = simplex.barycentric(x)[i];
    return {1.0 - d * lambda, -d * simplex.barycentric_gradient(i)};
}

double cr_dof(const ScalarFunction& phi, const Simplex& simplex, int i, int degree) {
    const QuadratureRule& rule = simplex_rule(simplex.dim() - 1, degree);
    return integrate_face(rule, simplex, i, phi) / simplex.face(i).measure;
}

Eigen::VectorXd cr_interpolate(const Simplex& simplex, const ScalarFunction& phi, int degree) {
    Eigen::VectorXd c(simplex.num_vertices());
    for (int i = 0; i < simplex.num_vertices(); ++i) c[i] = cr_dof(phi, simplex, i, degree);
    return c;
}

FeField cr_interpolate(const Mesh& mesh, const ScalarFunction& phi, int degree) {
    FeField field = FeField::zero(mesh);
    const int n = mesh.dim() + 1;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c)
        field.coefficients().segment(c * n, n) = cr_interpolate(mesh.simplex(c), phi, degree);
    return field;
}

Vec rt_basis(const Simplex& simplex, int i, const Vec& x) {
    if (i < 0 || i > simplex.dim()) throw InvalidParameter("local face index out of range");
    return (x - simplex.vertex(i)) / (simplex.dim() * simplex.measure());
}

double rt_basis_divergence(const Simplex& simplex) { return 1.0 / simplex.measure(); }

double rt_dof(const VectorFunction& v, const Simplex& simplex, int i, int degree) {
    const QuadratureRule& rule = simplex_rule(simplex.dim() - 1, degree);
    const Vec n = simplex.face(i).normal;
    return integrate_face(rule, simplex, i, [&](const Vec& x) { return v(x).dot(n); });
}

RtLocalField rt_from_fluxes(const Simplex& simplex, std::span<const double> fluxes) {
    const int d = simplex.dim();
    if (static_cast<int>(fluxes.size()) != d + 1) throw DimensionMismatch("need one flux per face");
    const double scale = 1.0 / (d * simplex.measure());
    RtLocalField f{Vec::Zero(d), 0.0};
    for (int i = 0; i <= d; ++i) {
        f.a -= fluxes[i] * scale * simplex.vertex(i);
        f.b += fluxes[i] * scale;
    }
    return f;
}

RtLocalField rt_interpolate(const Simplex& simplex, const VectorFunction& v, int degree) {
    std::array<double, 4> fluxes{};
    for (int i = 0; i < simplex.num_vertices(); ++i) fluxes[i] = rt_dof(v, simplex, i, degree);
    return rt_from_fluxes(simplex, std::span<const double>(fluxes.data(), simplex.num_vertices()));
}

std::vector<RtLocalField> rt_interpolate(const Mesh& mesh, const VectorFunction& v, int degree) {
    std::vector<RtLocalField> out;
    out.reserve(mesh.num_cells());
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) out.push_back(rt_interpolate(mesh.simplex(c), v, degree));
    return out;
}

double l2_project_cell(const Simplex& simplex, const ScalarFunction& phi, int degree) {
    return integrate(simplex_rule(simplex.dim(), degree), simplex, phi) / simplex.measure();
}

double l2_project_face(const PointSet& face, const ScalarFunction& phi, int degree) {
    return integrate_facet(simplex_rule(static_cast<int>(face.cols()) - 1, degree), face, phi) / facet_measure(face);
}

double face_mean_jump(const FeField& field, int face) {
    const Face& f = field.mesh().face(face);
    const double own = field.coefficient(f.owner, f.owner_local);
    return f.is_boundary() ? own : own - field.coefficient(f.neighbor, f.neighbor_local);
}

double commuting_check(const Mesh& mesh, const VectorField& v, int degree) {
    double worst = 0.0;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const Simplex s = mesh.simplex(c);
        const double lhs = rt_interpolate(s, v.value, degree).divergence();
        const double rhs = l2_project_cell(s, v.divergence, degree);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace wopsip
