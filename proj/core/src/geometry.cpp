#include "wopsip/geometry.hpp"

#include "wopsip/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace wopsip {

namespace {

constexpr double k_tie_tol = 1e-12;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

std::pair<int, int> sorted_pair(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

} // namespace

AffineMap AffineMap::identity(int dim) {
    return {Mat::Identity(dim, dim), Vec::Zero(dim)};
}

AffineMap AffineMap::inverse() const {
    const double det = matrix.determinant();
    const double scale = std::pow(matrix.cwiseAbs().maxCoeff(), dim());
    if (!(std::abs(det) > 1e-14 * scale)) throw SingularMap("affine map is singular");
    Mat inv = matrix.inverse();
    return {inv, -(inv * offset)};
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
    if (inner.dim() != dim()) throw DimensionMismatch("cannot compose affine maps of different dimension");
    return {matrix * inner.matrix, matrix * inner.offset + offset};
}

Simplex::Simplex(std::span<const Vec> vertices, std::span<const int> global_ids) {
    const int n = static_cast<int>(vertices.size());
    if (n != 3 && n != 4) throw InvalidParameter("simplex needs 3 (2D) or 4 (3D) vertices");
    dim_ = n - 1;
    for (int i = 0; i < n; ++i) {
        if (vertices[i].size() != dim_) throw DimensionMismatch("vertex dimension does not match simplex dimension");
        vertices_[i] = vertices[i];
    }
    if (!global_ids.empty()) {
        if (static_cast<int>(global_ids.size()) != n) throw InvalidParameter("global id count mismatch");
        for (int i = 0; i < n; ++i) ids_[i] = global_ids[i];
    }
    init();
}

Simplex::Simplex(const PointSet& vertices) {
    const int n = static_cast<int>(vertices.cols());
    if (n != 3 && n != 4) throw InvalidParameter("simplex needs 3 (2D) or 4 (3D) vertices");
    dim_ = n - 1;
    if (vertices.rows() != dim_) throw DimensionMismatch("vertex dimension does not match simplex dimension");
    for (int i = 0; i < n; ++i) vertices_[i] = vertices.col(i);
    init();
}

void Simplex::init() {
    diameter_ = 0.0;
    for (int i = 0; i <= dim_; ++i)
        for (int j = i + 1; j <= dim_; ++j) diameter_ = std::max(diameter_, edge_length(i, j));

    Mat jac(dim_, dim_);
    for (int k = 0; k < dim_; ++k) jac.col(k) = vertices_[k + 1] - vertices_[0];
    det_ = jac.determinant();
    measure_ = std::abs(det_) / factorial(dim_);
    if (!(measure_ >= 1e-14 * std::pow(diameter_, dim_)) || diameter_ == 0.0)
        throw DegenerateSimplex("degenerate simplex (volume " + std::to_string(measure_) + ")");

    jacobian_inv_ = jac.inverse();
    Vec sum = Vec::Zero(dim_);
    for (int k = 0; k < dim_; ++k) {
        grad_lambda_[k + 1] = jacobian_inv_.row(k).transpose();
        sum += grad_lambda_[k + 1];
    }
    grad_lambda_[0] = -sum;
}

Simplex Simplex::reference(int dim) {
    if (dim != 2 && dim != 3) throw InvalidParameter("reference simplex dimension must be 2 or 3");
    std::array<Vec, 4> v;
    v[0] = Vec::Zero(dim);
    for (int k = 0; k < dim; ++k) v[k + 1] = Vec::Unit(dim, k);
    return Simplex(std::span<const Vec>(v.data(), dim + 1));
}

PointSet Simplex::vertices() const {
    PointSet p(dim_, dim_ + 1);
    for (int i = 0; i <= dim_; ++i) p.col(i) = vertices_[i];
    return p;
}

double Simplex::signed_volume() const { return det_ / factorial(dim_); }

Vec Simplex::centroid() const {
    Vec c = Vec::Zero(dim_);
    for (int i = 0; i <= dim_; ++i) c += vertices_[i];
    return c / (dim_ + 1);
}

PointSet Simplex::face_vertices(int opposite) const {
    if (opposite < 0 || opposite > dim_) throw InvalidParameter("face index out of range");
    PointSet p(dim_, dim_);
    int col = 0;
    for (int i = 0; i <= dim_; ++i)
        if (i != opposite) p.col(col++) = vertices_[i];
    return p;
}

FaceGeometry Simplex::face(int opposite) const {
    if (opposite < 0 || opposite > dim_) throw InvalidParameter("face index out of range");
    // ∇λ_i points from the face towards vertex i, and |∇λ_i| = 1 / dist(p_i, F).
    const Vec& g = grad_lambda_[opposite];
    const double gnorm = g.norm();
    return {dim_ * measure_ * gnorm, -g / gnorm};
}

double Simplex::ell(int opposite) const {
    return factorial(dim_) * measure_ / face(opposite).measure;
}

Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1> Simplex::barycentric(const Vec& x) const {
    Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1> lambda(dim_ + 1);
    Vec tail = jacobian_inv_ * (x - vertices_[0]);
    lambda(0) = 1.0 - tail.sum();
    for (int k = 0; k < dim_; ++k) lambda(k + 1) = tail(k);
    return lambda;
}

Vec Simplex::point_from_barycentric(std::span<const double> lambda) const {
    Vec x = Vec::Zero(dim_);
    for (int i = 0; i <= dim_; ++i) x += lambda[i] * vertices_[i];
    return x;
}

AffineMap Simplex::reference_map() const {
    Mat a(dim_, dim_);
    for (int k = 0; k < dim_; ++k) a.col(k) = vertices_[k + 1] - vertices_[0];
    return {a, vertices_[0]};
}

double scaled_volume(const Simplex& simplex) { return factorial(simplex.dim()) * simplex.measure(); }

double facet_measure(const PointSet& points) {
    const int k = static_cast<int>(points.cols()) - 1;
    if (k == 0) return 1.0;
    Eigen::MatrixXd edges(points.rows(), k);
    for (int j = 0; j < k; ++j) edges.col(j) = points.col(j + 1) - points.col(0);
    const double gram = (edges.transpose() * edges).determinant();
    return std::sqrt(std::max(gram, 0.0)) / factorial(k);
}

double measure(const Simplex& simplex) { return simplex.measure(); }

FaceGeometry face_geometry(const Simplex& simplex, int opposite_vertex) { return simplex.face(opposite_vertex); }

double ell(const Simplex& simplex, int opposite_vertex) { return simplex.ell(opposite_vertex); }

double max_angle(const Simplex& simplex) {
    double best = 0.0;
    const int n = simplex.num_vertices();
    if (simplex.dim() == 2) {
        for (int i = 0; i < n; ++i) {
            const Vec a = simplex.vertex((i + 1) % n) - simplex.vertex(i);
            const Vec b = simplex.vertex((i + 2) % n) - simplex.vertex(i);
            const double c = std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
            best = std::max(best, std::acos(c));
        }
    } else {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double c = std::clamp(-simplex.face(i).normal.dot(simplex.face(j).normal), -1.0, 1.0);
                best = std::max(best, std::acos(c));
            }
        }
    }
    return best;
}

namespace {

struct Edge {
    int a, b; // local indices, a < b
    double length;
    std::pair<int, int> key; // sorted global ids
};

std::vector<Edge> edges_of(const Simplex& s) {
    std::vector<Edge> edges;
    for (int i = 0; i < s.num_vertices(); ++i)
        for (int j = i + 1; j < s.num_vertices(); ++j)
            edges.push_back({i, j, s.edge_length(i, j), sorted_pair(s.vertex_id(i), s.vertex_id(j))});
    return edges;
}

// Edges within k_tie_tol of the extremal length, ordered by global-id pair.
std::vector<Edge> extremal(std::vector<Edge> edges, bool longest) {
    double target = edges.front().length;
    for (const auto& e : edges) target = longest ? std::max(target, e.length) : std::min(target, e.length);
    std::vector<Edge> out;
    for (const auto& e : edges)
        if (std::abs(e.length - target) <= k_tie_tol * target) out.push_back(e);
    std::sort(out.begin(), out.end(), [](const Edge& x, const Edge& y) { return x.key < y.key; });
    return out;
}

void finish(const Simplex& s, ElementCharacterization& ch) {
    const auto& o = ch.order;
    const int d = s.dim();
    ch.h_T = s.diameter();
    ch.h[0] = s.edge_length(o[0], o[1]);
    ch.r[0] = (s.vertex(o[1]) - s.vertex(o[0])) / ch.h[0];
    if (d == 2) {
        ch.h[1] = s.edge_length(o[0], o[2]);
        ch.r[1] = (s.vertex(o[2]) - s.vertex(o[0])) / ch.h[1];
    } else {
        const int base = ch.shape_type == ShapeType::TypeI ? o[0] : o[1];
        ch.h[1] = s.edge_length(base, o[2]);
        ch.r[1] = (s.vertex(o[2]) - s.vertex(base)) / ch.h[1];
        ch.h[2] = s.edge_length(o[0], o[3]);
        ch.r[2] = (s.vertex(o[3]) - s.vertex(o[0])) / ch.h[2];
    }
    double prod = 1.0;
    for (int i = 0; i < d; ++i) prod *= ch.h[i];
    ch.H_T = prod / s.measure() * ch.h_T;
    ch.H_over_h = ch.H_T / ch.h_T;
}

ElementCharacterization characterize_2d(const Simplex& s) {
    ElementCharacterization ch;
    ch.dim = 2;
    const Edge longest = extremal(edges_of(s), true).front();
    const int p1 = 3 - longest.a - longest.b;
    int p2 = longest.a;
    int p3 = longest.b;
    const double l2 = s.edge_length(p1, p2);
    const double l3 = s.edge_length(p1, p3);
    const bool tie = std::abs(l2 - l3) <= k_tie_tol * std::max(l2, l3);
    if ((tie && s.vertex_id(p3) < s.vertex_id(p2)) || (!tie && l3 > l2)) std::swap(p2, p3);
    ch.order = {p1, p2, p3, -1};
    ch.shape_type = ShapeType::TypeI;
    finish(s, ch);
    return ch;
}

struct Candidate {
    std::array<int, 4> order;
    ShapeType type;
    bool clean;        // strict half-space decision and p_4 on the p_1 side
    bool p4_violation; // p_4 strictly on the p_2 side
    int lmin_a, lmin_b;
};

Candidate label(const Simplex& s, const Edge& lmin, const Edge& lmax) {
    const int c = (lmax.a == lmin.a || lmax.a == lmin.b) ? lmax.a : lmax.b; // shared endpoint
    const int o = lmax.a + lmax.b - c;
    const int m = lmin.a + lmin.b - c;
    const int q = 6 - c - o - m;

    const Vec mid = 0.5 * (s.vertex(c) + s.vertex(o));
    const Vec axis = s.vertex(o) - s.vertex(c);
    const double tol = k_tie_tol * axis.squaredNorm();
    auto side = [&](int v) {
        const double t = (s.vertex(v) - mid).dot(axis);
        return std::abs(t) <= tol ? 0 : (t > 0 ? 1 : -1);
    };
    const int s3 = side(m);
    const int s4 = side(q);
    const bool strict = s3 != 0 && s4 != 0;
    // A vertex on the bisecting plane is not strictly in p_4's half-space.
    const ShapeType type = (strict && s3 == s4) ? ShapeType::TypeI : ShapeType::TypeII;
    const int p1 = type == ShapeType::TypeI ? c : o;
    const int p2 = type == ShapeType::TypeI ? o : c;
    const int s_p1 = side(p1);
    const bool p4_violation = s4 != 0 && s4 != s_p1;
    return {{p1, p2, m, q}, type, strict && !p4_violation, p4_violation, lmin.a, lmin.b};
}

ElementCharacterization characterize_3d(const Simplex& s) {
    const auto edges = edges_of(s);
    std::vector<Candidate> candidates;
    for (const Edge& lmin : extremal(edges, false)) {
        std::vector<Edge> adjacent;
        for (const Edge& e : edges) {
            const int shared = (e.a == lmin.a || e.a == lmin.b) + (e.b == lmin.a || e.b == lmin.b);
            if (shared == 1) adjacent.push_back(e);
        }
        for (const Edge& lmax : extremal(adjacent, true)) candidates.push_back(label(s, lmin, lmax));
    }
    auto it = std::find_if(candidates.begin(), candidates.end(), [](const Candidate& c) { return c.clean; });
    Candidate chosen = it != candidates.end() ? *it : candidates.front();

    ElementCharacterization ch;
    ch.dim = 3;
    ch.order = chosen.order;
    ch.shape_type = chosen.type;
    if (chosen.p4_violation) {
        std::swap(ch.order[0], ch.order[1]);
        const bool lmin_at_p1 = (chosen.lmin_a == ch.order[0] || chosen.lmin_b == ch.order[0]);
        ch.shape_type = lmin_at_p1 ? ShapeType::TypeI : ShapeType::TypeII;
        ch.relabelled = true;
    }
    finish(s, ch);
    return ch;
}

} // namespace

ElementCharacterization characterize(const Simplex& simplex) {
    return simplex.dim() == 2 ? characterize_2d(simplex) : characterize_3d(simplex);
}

PointSet reference_vertices(int dim, ShapeType type) {
    PointSet p = PointSet::Zero(dim, dim + 1);
    for (int k = 0; k < dim; ++k) p(k, k + 1) = 1.0;
    if (dim == 3 && type == ShapeType::TypeII) p(0, 2) = 1.0; // p̂_3 = (1,1,0)
    return p;
}

AnisotropicFactorization factorize(const Simplex& simplex, const ElementCharacterization& ch) {
    const int d = simplex.dim();
    AnisotropicFactorization f;
    f.shape_type = ch.shape_type;
    f.offset = simplex.vertex(ch.order[0]);
    f.scaling = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) f.scaling(i, i) = ch.h[i];

    // Gram–Schmidt on r_1..r_d gives the orthogonal factor; the shape matrix
    // holds the coordinates of r_i in that frame (upper triangular, t > 0).
    Mat q(d, d);
    for (int i = 0; i < d; ++i) {
        Vec v = ch.r[i];
        for (int j = 0; j < i; ++j) v -= q.col(j).dot(ch.r[i]) * q.col(j);
        q.col(i) = v.normalized();
    }
    f.rotation = q;
    f.shape = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) f.shape(j, i) = q.col(j).dot(ch.r[i]);

    // For TypeII, A e_2 = p_3 - p_2 = h_2 r_2, so shape(0,1) holds -s_1.
    if (d == 2) {
        f.admissible = f.shape(1, 1) > 0.0;
    } else {
        const double s1 = ch.shape_type == ShapeType::TypeI ? f.shape(0, 1) : -f.shape(0, 1);
        const double s21 = f.shape(0, 2);
        f.admissible = s1 > 0.0 && f.shape(1, 1) > 0.0 && f.shape(2, 2) > 0.0 && ch.h[1] * s1 <= ch.h[0] / 2 + 1e-12 &&
                       ch.h[2] * s21 <= ch.h[0] / 2 + 1e-12;
    }
    return f;
}

VectorFunction piola(const AffineMap& map, VectorFunction reference_field) {
    const AffineMap inv = map.inverse();
    const double det = map.determinant();
    return [m = map.matrix, inv, det, field = std::move(reference_field)](const Vec& x) -> Vec {
        return (m * field(inv.apply(x))) / det;
    };
}

} // namespace wopsip
