#include "wopsip/analysis.hpp"

#include "wopsip/errors.hpp"
#include "wopsip/parallel.hpp"
#include "wopsip/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace wopsip {

namespace {

constexpr double pi = std::numbers::pi;

ExactSolution sinsin(int dim) {
    ExactSolution e;
    e.name = "sinsin";
    e.dim = dim;
    e.u = [dim](const Vec& x) {
        double p = 1.0;
        for (int k = 0; k < dim; ++k) p *= std::sin(pi * x(k));
        return p;
    };
    e.grad = [dim](const Vec& x) {
        Vec g(dim);
        for (int k = 0; k < dim; ++k) {
            double p = pi * std::cos(pi * x(k));
            for (int j = 0; j < dim; ++j)
                if (j != k) p *= std::sin(pi * x(j));
            g(k) = p;
        }
        return g;
    };
    e.laplacian = [dim, u = e.u](const Vec& x) { return -dim * pi * pi * u(x); };
    e.hessian = [dim](const Vec& x) {
        Mat H(dim, dim);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) {
                double p = 1.0;
                for (int k = 0; k < dim; ++k) {
                    const bool da = k == a, db = k == b;
                    if (da && db) p *= -pi * pi * std::sin(pi * x(k));
                    else if (da || db) p *= pi * std::cos(pi * x(k));
                    else p *= std::sin(pi * x(k));
                }
                H(a, b) = p;
            }
        return H;
    };
    return e;
}

ExactSolution poly(int dim) {
    // u = Π q(x_k), q(t) = t(1-t), q' = 1-2t, q'' = -2.
    auto q = [](double t) { return t * (1.0 - t); };
    auto dq = [](double t) { return 1.0 - 2.0 * t; };
    ExactSolution e;
    e.name = "poly";
    e.dim = dim;
    auto prod_except = [dim, q](const Vec& x, int a, int b) {
        double p = 1.0;
        for (int k = 0; k < dim; ++k)
            if (k != a && k != b) p *= q(x(k));
        return p;
    };
    e.u = [=](const Vec& x) { return prod_except(x, -1, -1); };
    e.grad = [=](const Vec& x) {
        Vec g(dim);
        for (int k = 0; k < dim; ++k) g(k) = dq(x(k)) * prod_except(x, k, -1);
        return g;
    };
    e.laplacian = [=](const Vec& x) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += -2.0 * prod_except(x, k, -1);
        return s;
    };
    e.hessian = [=](const Vec& x) {
        Mat H(dim, dim);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                H(a, b) = a == b ? -2.0 * prod_except(x, a, -1) : dq(x(a)) * dq(x(b)) * prod_except(x, a, b);
        return H;
    };
    return e;
}

ExactSolution layer(double eps) {
    if (!(eps > 0.0)) throw InvalidParameter("layer width must be positive");
    struct G {
        double g, dg, ddg;
    };
    auto gy = [eps](double y) {
        const double A = std::exp(-y / eps), B = std::exp(-(1.0 - y) / eps);
        return G{(1.0 - A) * (1.0 - B), (A * (1.0 - B) - (1.0 - A) * B) / eps, -(A + B) / (eps * eps)};
    };
    ExactSolution e;
    e.name = "layer";
    e.dim = 2;
    e.u = [=](const Vec& x) { return std::sin(pi * x(0)) * gy(x(1)).g; };
    e.grad = [=](const Vec& x) {
        const G g = gy(x(1));
        return make_vec(pi * std::cos(pi * x(0)) * g.g, std::sin(pi * x(0)) * g.dg);
    };
    e.laplacian = [=](const Vec& x) {
        const G g = gy(x(1));
        return std::sin(pi * x(0)) * (g.ddg - pi * pi * g.g);
    };
    e.hessian = [=](const Vec& x) {
        const G g = gy(x(1));
        const double s = std::sin(pi * x(0)), c = std::cos(pi * x(0));
        Mat H(2, 2);
        H << -pi * pi * s * g.g, pi * c * g.dg, pi * c * g.dg, s * g.ddg;
        return H;
    };
    return e;
}

// Σ_c cell_value(c) with a deterministic compensated reduction.
template <class Fn>
double sum_over_cells(const Mesh& mesh, Fn&& cell_value) {
    std::vector<double> parts(mesh.num_cells());
    parallel_for(mesh.num_cells(), [&](std::size_t c) { parts[c] = cell_value(static_cast<int>(c)); });
    return ordered_sum(parts);
}

void check_boundary(const Mesh& mesh, const ExactSolution& exact) {
    const QuadratureRule& rule = simplex_rule(mesh.dim() - 1, k_default_face_degree);
    for (const Face& f : mesh.faces()) {
        if (!f.is_boundary()) continue;
        const Simplex s = mesh.simplex(f.owner);
        const PointSet pts = s.face_vertices(f.owner_local);
        for (int k = 0; k < pts.cols(); ++k)
            if (std::abs(exact.u(pts.col(k))) > 1e-10)
                throw BoundaryMismatch("exact solution '" + exact.name + "' does not vanish on the boundary");
        for_each_point(rule, pts, 1.0, [&](const Vec& x, double) {
            if (std::abs(exact.u(x)) > 1e-10)
                throw BoundaryMismatch("exact solution '" + exact.name + "' does not vanish on the boundary");
        });
    }
}

} // namespace

ExactSolution exact_solution(const std::string& name, int dim, double epsilon) {
    if (dim != 2 && dim != 3) throw InvalidParameter("dimension must be 2 or 3");
    if (name == "sinsin") return sinsin(dim);
    if (name == "poly") return poly(dim);
    if (name == "layer") {
        if (dim != 2) throw InvalidParameter("the 'layer' solution is two-dimensional");
        return layer(epsilon);
    }
    throw InvalidParameter("unknown exact solution '" + name + "'");
}

std::vector<std::string> exact_solution_names() { return {"sinsin", "poly", "layer"}; }

double broken_h1_error(const Mesh& mesh, const FeField& field, const ExactSolution& exact, int degree) {
    const QuadratureRule& rule = simplex_rule(mesh.dim(), degree);
    return std::sqrt(sum_over_cells(mesh, [&](int c) {
        const Simplex s = mesh.simplex(c);
        const Vec gh = field.gradient(s, c);
        double acc = 0.0;
        for_each_point(rule, s.vertices(), s.measure(),
                       [&](const Vec& x, double w) { acc += w * (exact.grad(x) - gh).squaredNorm(); });
        return acc;
    }));
}

double broken_h1_seminorm(const FeField& field) {
    const Mesh& mesh = field.mesh();
    return std::sqrt(sum_over_cells(mesh, [&](int c) {
        const Simplex s = mesh.simplex(c);
        return s.measure() * field.gradient(s, c).squaredNorm();
    }));
}

double jump_seminorm(const Mesh& mesh, const FeField& field, JumpVariant variant, double h) {
    if (!(h > 0.0)) throw InvalidParameter("h must be positive");
    const QuadratureRule& rule = simplex_rule(mesh.dim() - 1, k_default_face_degree);
    const double scale = variant == JumpVariant::Jwop ? 1.0 / (h * h) : 1.0;
    std::vector<double> parts(mesh.num_faces());
    parallel_for(mesh.num_faces(), [&](std::size_t fi) {
        const Face& f = mesh.face(static_cast<int>(fi));
        const Simplex a = mesh.simplex(f.owner);
        const PointSet pts = a.face_vertices(f.owner_local);
        const double area = facet_measure(pts);
        double ks = 0.0, mean = 0.0;
        if (f.is_boundary()) {
            ks = 1.0 / a.ell(f.owner_local);
            for_each_point(rule, pts, area, [&](const Vec& x, double w) { mean += w * field.value(a, f.owner, x); });
        } else {
            const Simplex b = mesh.simplex(f.neighbor);
            const double root = std::sqrt(a.ell(f.owner_local)) + std::sqrt(b.ell(f.neighbor_local));
            ks = 1.0 / (root * root);
            for_each_point(rule, pts, area, [&](const Vec& x, double w) {
                mean += w * (field.value(a, f.owner, x) - field.value(b, f.neighbor, x));
            });
        }
        mean /= area;
        parts[fi] = scale * ks * area * mean * mean;
    });
    return std::sqrt(ordered_sum(parts));
}

double wop_norm(const FeField& field) {
    const double g = broken_h1_seminorm(field);
    const double j = jump_seminorm(field.mesh(), field, JumpVariant::Jwop, field.mesh().h());
    return std::sqrt(g * g + j * j);
}

double rdg_norm(const FeField& field) {
    const double g = broken_h1_seminorm(field);
    const double j = jump_seminorm(field.mesh(), field, JumpVariant::Jrdg, field.mesh().h());
    return std::sqrt(g * g + j * j);
}

double energy_error(const Mesh& mesh, const FeField& field, const ExactSolution& exact, double h) {
    check_boundary(mesh, exact);
    const double g = broken_h1_error(mesh, field, exact);
    const double j = jump_seminorm(mesh, field, JumpVariant::Jwop, h);
    return std::sqrt(g * g + j * j);
}

double l2_error(const Mesh& mesh, const FeField& field, const ExactSolution& exact, int degree) {
    const QuadratureRule& rule = simplex_rule(mesh.dim(), degree);
    return std::sqrt(sum_over_cells(mesh, [&](int c) {
        const Simplex s = mesh.simplex(c);
        double acc = 0.0;
        for_each_point(rule, s.vertices(), s.measure(), [&](const Vec& x, double w) {
            const double e = exact.u(x) - field.value(s, c, x);
            acc += w * e * e;
        });
        return acc;
    }));
}

double l2_norm(const FeField& field) {
    const Mesh& mesh = field.mesh();
    const QuadratureRule& rule = simplex_rule(mesh.dim(), 2);
    return std::sqrt(sum_over_cells(mesh, [&](int c) {
        const Simplex s = mesh.simplex(c);
        double acc = 0.0;
        for_each_point(rule, s.vertices(), s.measure(), [&](const Vec& x, double w) {
            const double v = field.value(s, c, x);
            acc += w * v * v;
        });
        return acc;
    }));
}

PoincareResult poincare_probe(const Mesh& mesh, int samples, std::uint64_t seed) {
    if (samples < 0) throw InvalidParameter("sample count must be non-negative");
    const DofMap dofs(mesh);
    const SparseMatrix R = assemble_rdg(mesh, dofs);
    const SparseMatrix M = assemble_mass(mesh, dofs);
    const SpdFactorization factor(R);
    const Eigen::Index n = dofs.total_dofs();

    PoincareResult out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd r(n);
        for (Eigen::Index i = 0; i < n; ++i) r[i] = normal(rng);
        out.sampled_constant = std::max(out.sampled_constant, std::sqrt(quadratic_form(M, r) / quadratic_form(R, r)));
    }

    // Inverse iteration for the largest eigenvalue of R^{-1}M; the start
    // vector includes a constant so it is never orthogonal to the ground mode.
    v = (v + Eigen::VectorXd::Ones(n)).normalized();
    double lambda = 0.0;
    for (int it = 1; it <= 1000; ++it) {
        v = factor.solve(M * v);
        v /= std::sqrt(quadratic_form(M, v));
        const double next = quadratic_form(M, v) / quadratic_form(R, v);
        out.iterations = it;
        const bool done = std::abs(next - lambda) <= 1e-14 * next;
        lambda = next;
        if (done) break;
    }
    out.eigen_constant = std::sqrt(lambda);
    return out;
}

double directional_seminorm(const Mesh& mesh, const MatrixFunction& hessian, int degree) {
    const QuadratureRule& rule = simplex_rule(mesh.dim(), degree);
    return std::sqrt(sum_over_cells(mesh, [&](int c) {
        const Simplex s = mesh.simplex(c);
        const ElementCharacterization ch = characterize(s);
        double acc = 0.0;
        for_each_point(rule, s.vertices(), s.measure(), [&](const Vec& x, double w) {
            const Mat H = hessian(x);
            for (int i = 0; i < mesh.dim(); ++i) acc += w * ch.h[i] * ch.h[i] * (H * ch.r[i]).squaredNorm();
        });
        return acc;
    }));
}

double isotropic_h2_seminorm(const Mesh& mesh, const MatrixFunction& hessian, int degree) {
    const QuadratureRule& rule = simplex_rule(mesh.dim(), degree);
    const double semi = std::sqrt(sum_over_cells(mesh, [&](int c) {
        const Simplex s = mesh.simplex(c);
        double acc = 0.0;
        for_each_point(rule, s.vertices(), s.measure(),
                       [&](const Vec& x, double w) { acc += w * hessian(x).squaredNorm(); });
        return acc;
    }));
    return mesh.h() * semi;
}

std::vector<ConvergenceRecord> compute_rates(std::vector<ConvergenceRecord> records) {
    if (records.size() < 2) throw InsufficientLevels("rates need at least two levels");
    records[0].rate_energy.reset();
    records[0].rate_l2.reset();
    for (std::size_t k = 1; k < records.size(); ++k) {
        const double lh = std::log(records[k - 1].h / records[k].h);
        records[k].rate_energy = std::log(records[k - 1].energy_error / records[k].energy_error) / lh;
        records[k].rate_l2 = std::log(records[k - 1].l2_error / records[k].l2_error) / lh;
    }
    return records;
}

double least_squares_slope(std::span<const double> h, std::span<const double> errors) {
    if (h.size() != errors.size()) throw DimensionMismatch("h and error lists differ in length");
    if (h.size() < 2) throw InsufficientLevels("slope needs at least two points");
    const double n = static_cast<double>(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double x = std::log(h[k]), y = std::log(errors[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double consistency_error(const Mesh& mesh, const SpdFactorization& factor, const ExactSolution& exact, int degree) {
    const DofMap dofs(mesh);
    const int n = dofs.local_size();
    const int d = mesh.dim();
    const QuadratureRule& rule = simplex_rule(d, degree);
    const ScalarFunction f = exact.source();
    Eigen::VectorXd r = Eigen::VectorXd::Zero(dofs.total_dofs());
    parallel_for(mesh.num_cells(), [&](std::size_t ci) {
        const int c = static_cast<int>(ci);
        const Simplex s = mesh.simplex(c);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double* lambda = rule.points[q].data();
            const Vec x = s.point_from_barycentric(std::span<const double>(lambda, n));
            const double w = rule.weights[q] * s.measure();
            const Vec g = exact.grad(x);
            const double fx = f(x);
            for (int i = 0; i < n; ++i)
                r[dofs.index(c, i)] += w * (-d * g.dot(s.barycentric_gradient(i)) - fx * (1.0 - d * lambda[i]));
        }
    });
    return std::sqrt(std::max(0.0, r.dot(factor.solve(r))));
}

} // namespace wopsip
