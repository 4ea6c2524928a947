#include "wopsip/assembly.hpp"

#include "wopsip/errors.hpp"
#include "wopsip/parallel.hpp"
#include "wopsip/quadrature.hpp"
#include "wopsip/solver.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace wopsip {

namespace {

using Triplet = Eigen::Triplet<double>;

std::vector<Simplex> cell_simplices(const Mesh& mesh) {
    std::vector<Simplex> out;
    out.reserve(mesh.num_cells());
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) out.push_back(mesh.simplex(c));
    return out;
}

struct FaceInfo {
    int cell_a, local_a, cell_b, local_b;
    double area;
    Vec normal; // outward for the owner
    double ell_a, ell_b;

    bool boundary() const { return cell_b < 0; }
    double kappa_star() const {
        if (boundary()) return 1.0 / ell_a;
        const double s = std::sqrt(ell_a) + std::sqrt(ell_b);
        return 1.0 / (s * s);
    }
    std::pair<double, double> weights() const {
        if (boundary()) return {1.0, 0.0};
        const double ra = std::sqrt(ell_a), rb = std::sqrt(ell_b);
        return {ra / (ra + rb), rb / (ra + rb)};
    }
};

FaceInfo face_info(const Mesh& mesh, const Simplex& owner, const Simplex* neighbor, int face) {
    const Face& f = mesh.face(face);
    const FaceGeometry g = owner.face(f.owner_local);
    FaceInfo info{f.owner, f.owner_local, f.neighbor, f.neighbor_local, g.measure, g.normal, owner.ell(f.owner_local), 0.0};
    if (neighbor) info.ell_b = neighbor->ell(f.neighbor_local);
    return info;
}

FaceInfo face_info(const Mesh& mesh, int face) {
    const Face& f = mesh.face(face);
    const Simplex a = mesh.simplex(f.owner);
    if (f.is_boundary()) return face_info(mesh, a, nullptr, face);
    const Simplex b = mesh.simplex(f.neighbor);
    return face_info(mesh, a, &b, face);
}

FaceInfo face_info(const Mesh& mesh, const std::vector<Simplex>& cells, int face) {
    const Face& f = mesh.face(face);
    return face_info(mesh, cells[f.owner], f.is_boundary() ? nullptr : &cells[f.neighbor], face);
}

// Cell stiffness blocks |T| g_i·g_j with g_i = -d ∇λ_i, one slot of n² triplets per cell.
void add_stiffness(const Mesh& mesh, const DofMap& dofs, const std::vector<Simplex>& cells, std::vector<Triplet>& out,
                   std::size_t offset) {
    const int n = dofs.local_size();
    const int d = mesh.dim();
    parallel_for(mesh.num_cells(), [&](std::size_t ci) {
        const int c = static_cast<int>(ci);
        const Simplex& s = cells[c];
        std::size_t k = offset + ci * n * n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out[k++] = Triplet(dofs.index(c, i), dofs.index(c, j),
                                   s.measure() * d * d * s.barycentric_gradient(i).dot(s.barycentric_gradient(j)));
    });
}

SparseMatrix finish(const DofMap& dofs, const std::vector<Triplet>& triplets) {
    SparseMatrix m(dofs.total_dofs(), dofs.total_dofs());
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

// ∇·∇ stiffness plus penalty_scale · Σ_F κ_{F*} |F| Π_F⁰[[v]] Π_F⁰[[w]].
SparseMatrix assemble_face_mean_form(const Mesh& mesh, const DofMap& dofs, double penalty_scale);

} // namespace

void PenaltyConfig::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidParameter("gamma must be positive");
    if (variant == Scheme::Wopsip && beta != 1.0) throw InvalidParameter("beta is fixed to 1 for the WOPSIP scheme");
}

std::pair<double, double> face_weights(const Mesh& mesh, int face) { return face_info(mesh, face).weights(); }

double kappa_star(const Mesh& mesh, int face) { return face_info(mesh, face).kappa_star(); }

double kappa(const Mesh& mesh, int face, double h, const PenaltyConfig& config) {
    if (!(h > 0.0)) throw InvalidParameter("h must be positive");
    const double ks = kappa_star(mesh, face);
    if (config.variant == Scheme::Wopsip) return std::pow(h, -2.0 * config.beta) * ks;
    return config.gamma * ks;
}

SparseMatrix assemble_wopsip(const Mesh& mesh, const DofMap& dofs) {
    return assemble_face_mean_form(mesh, dofs, 1.0 / (mesh.h() * mesh.h()));
}

SparseMatrix assemble_rdg(const Mesh& mesh, const DofMap& dofs) { return assemble_face_mean_form(mesh, dofs, 1.0); }

SparseMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs) {
    const int n = dofs.local_size();
    const int d = mesh.dim();
    const QuadratureRule& rule = simplex_rule(d, 2);
    std::vector<Triplet> triplets(mesh.num_cells() * n * n);
    parallel_for(mesh.num_cells(), [&](std::size_t ci) {
        const int c = static_cast<int>(ci);
        const double vol = mesh.simplex(c).measure();
        std::size_t k = ci * n * n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double m = 0.0;
                for (std::size_t q = 0; q < rule.size(); ++q)
                    m += rule.weights[q] * (1.0 - d * rule.points[q][i]) * (1.0 - d * rule.points[q][j]);
                triplets[k++] = Triplet(dofs.index(c, i), dofs.index(c, j), vol * m);
            }
    });
    return finish(dofs, triplets);
}

namespace {

SparseMatrix assemble_face_mean_form(const Mesh& mesh, const DofMap& dofs, double penalty_scale) {
    const auto cells = cell_simplices(mesh);
    const std::size_t n = static_cast<std::size_t>(dofs.local_size());
    const std::size_t cell_slots = mesh.num_cells() * n * n;
    std::vector<Triplet> triplets(cell_slots + 4 * mesh.num_faces());
    add_stiffness(mesh, dofs, cells, triplets, 0);

    parallel_for(mesh.num_faces(), [&](std::size_t fi) {
        const FaceInfo info = face_info(mesh, cells, static_cast<int>(fi));
        const double k = penalty_scale * info.kappa_star() * info.area;
        const int a = dofs.index(info.cell_a, info.local_a);
        Triplet* t = &triplets[cell_slots + 4 * fi];
        if (info.boundary()) {
            t[0] = Triplet(a, a, k);
            t[1] = t[2] = t[3] = Triplet(a, a, 0.0);
        } else {
            const int b = dofs.index(info.cell_b, info.local_b);
            t[0] = Triplet(a, a, k);
            t[1] = Triplet(b, b, k);
            t[2] = Triplet(a, b, -k);
            t[3] = Triplet(b, a, -k);
        }
    });
    return finish(dofs, triplets);
}

} // namespace

SparseMatrix assemble_sip_rsip(const Mesh& mesh, const DofMap& dofs, const PenaltyConfig& config, bool check_definite) {
    config.validate();
    if (config.variant == Scheme::Wopsip) throw InvalidParameter("assemble_sip_rsip needs the Sip or Rsip variant");
    const auto cells = cell_simplices(mesh);
    const int n = dofs.local_size();
    const int d = mesh.dim();
    const std::size_t m = 2 * static_cast<std::size_t>(n);
    const std::size_t cell_slots = mesh.num_cells() * n * n;
    std::vector<Triplet> triplets(cell_slots + m * m * mesh.num_faces());
    add_stiffness(mesh, dofs, cells, triplets, 0);

    const QuadratureRule& rule = simplex_rule(d - 1, 2);
    parallel_for(mesh.num_faces(), [&](std::size_t fi) {
        const FaceInfo info = face_info(mesh, cells, static_cast<int>(fi));
        const bool bdry = info.boundary();
        const auto [wa, wb] = info.weights();
        const double pen = config.gamma * info.kappa_star();

        // Local vectors over (owner dofs, neighbour dofs).
        Eigen::VectorXd G = Eigen::VectorXd::Zero(m), J = Eigen::VectorXd::Zero(m);
        const Simplex& sa = cells[info.cell_a];
        for (int i = 0; i < n; ++i) G[i] = -wa * d * sa.barycentric_gradient(i).dot(info.normal);
        J[info.local_a] = 1.0;
        if (!bdry) {
            const Simplex& sb = cells[info.cell_b];
            for (int i = 0; i < n; ++i) G[n + i] = -wb * d * sb.barycentric_gradient(i).dot(info.normal);
            J[n + info.local_b] = -1.0;
        }
        Eigen::MatrixXd local = -info.area * (G * J.transpose() + J * G.transpose());

        if (config.variant == Scheme::Rsip) {
            local += pen * info.area * J * J.transpose();
        } else {
            const PointSet pts = sa.face_vertices(info.local_a);
            for_each_point(rule, pts, info.area, [&](const Vec& x, double w) {
                Eigen::VectorXd t = Eigen::VectorXd::Zero(m);
                const auto la = sa.barycentric(x);
                for (int i = 0; i < n; ++i) t[i] = 1.0 - d * la[i];
                if (!bdry) {
                    const auto lb = cells[info.cell_b].barycentric(x);
                    for (int i = 0; i < n; ++i) t[n + i] = -(1.0 - d * lb[i]);
                }
                local += pen * w * t * t.transpose();
            });
        }

        const int a0 = dofs.index(info.cell_a, 0);
        auto global = [&](std::size_t i) {
            if (i < static_cast<std::size_t>(n)) return dofs.index(info.cell_a, static_cast<int>(i));
            return bdry ? a0 : dofs.index(info.cell_b, static_cast<int>(i) - n);
        };
        Triplet* t = &triplets[cell_slots + m * m * fi];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const bool unused = bdry && (i >= static_cast<std::size_t>(n) || j >= static_cast<std::size_t>(n));
                t[i * m + j] = unused ? Triplet(a0, a0, 0.0) : Triplet(global(i), global(j), local(i, j));
            }
    });
    SparseMatrix A = finish(dofs, triplets);
    if (check_definite && !is_positive_definite(A))
        throw IndefiniteMatrix("interior penalty matrix is not positive definite; gamma is too small");
    return A;
}

SparseMatrix assemble_matrix(const Mesh& mesh, const DofMap& dofs, const PenaltyConfig& config, bool check_definite) {
    config.validate();
    if (config.variant == Scheme::Wopsip) return assemble_wopsip(mesh, dofs);
    return assemble_sip_rsip(mesh, dofs, config, check_definite);
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofs, const ScalarFunction& f, int degree) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.total_dofs());
    const QuadratureRule& rule = simplex_rule(mesh.dim(), degree);
    const int n = dofs.local_size();
    const int d = mesh.dim();
    parallel_for(mesh.num_cells(), [&](std::size_t ci) {
        const int c = static_cast<int>(ci);
        const Simplex s = mesh.simplex(c);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double* lambda = rule.points[q].data();
            const Vec x = s.point_from_barycentric(std::span<const double>(lambda, n));
            const double fw = f(x) * rule.weights[q] * s.measure();
            for (int i = 0; i < n; ++i) rhs[dofs.index(c, i)] += fw * (1.0 - d * lambda[i]);
        }
    });
    return rhs;
}

SparseSystem assemble_system(const Mesh& mesh, const PenaltyConfig& config, const ScalarFunction& f, bool check_definite) {
    const DofMap dofs(mesh);
    return {assemble_matrix(mesh, dofs, config, check_definite), assemble_load(mesh, dofs, f)};
}

double quadratic_form(const SparseMatrix& matrix, const Eigen::VectorXd& v) { return v.dot(matrix * v); }

double identity_probe_wop3(const Mesh& mesh, const VectorFunction& w, const FeField& psi, int degree) {
    const QuadratureRule& vol = simplex_rule(mesh.dim(), degree);
    const QuadratureRule& surf = simplex_rule(mesh.dim() - 1, degree);

    std::vector<double> lhs(mesh.num_cells());
    parallel_for(mesh.num_cells(), [&](std::size_t ci) {
        const int c = static_cast<int>(ci);
        const Simplex s = mesh.simplex(c);
        const RtLocalField r = rt_interpolate(s, w, degree);
        const Vec grad = psi.gradient(s, c);
        double acc = 0.0;
        for_each_point(vol, s.vertices(), s.measure(), [&](const Vec& x, double wq) {
            acc += wq * (r.value(x).dot(grad) + r.divergence() * psi.value(s, c, x));
        });
        lhs[ci] = acc;
    });

    std::vector<double> rhs(mesh.num_faces());
    parallel_for(mesh.num_faces(), [&](std::size_t fi) {
        const Face& f = mesh.face(static_cast<int>(fi));
        const Simplex s = mesh.simplex(f.owner);
        const Vec n = s.face(f.owner_local).normal;
        const double flux = integrate_face(surf, s, f.owner_local, [&](const Vec& x) { return w(x).dot(n); });
        rhs[fi] = flux * face_mean_jump(psi, static_cast<int>(fi));
    });
    return std::abs(ordered_sum(lhs) - ordered_sum(rhs));
}

} // namespace wopsip
