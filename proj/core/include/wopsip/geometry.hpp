#pragma once

#include "wopsip/types.hpp"

#include <array>
#include <span>

namespace wopsip {

// Up to four points stored column-wise; used for simplex and face vertex sets.
using PointSet = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 4>;

/// Affine map x = matrix * xhat + offset.
struct AffineMap {
    Mat matrix;
    Vec offset;

    static AffineMap identity(int dim);

    int dim() const { return static_cast<int>(matrix.rows()); }
    double determinant() const { return matrix.determinant(); }
    Vec apply(const Vec& x) const { return matrix * x + offset; }
    /// Throws SingularMap when the matrix is not invertible.
    AffineMap inverse() const;
    /// (*this)∘inner, i.e. x ↦ apply(inner.apply(x)).
    AffineMap compose(const AffineMap& inner) const;
};

struct FaceGeometry {
    double measure;
    Vec normal; // unit, outward
};

/// A non-degenerate d-simplex in R^d, d ∈ {2,3}. Local vertex i is opposite
/// local face i. Optional global vertex ids make tie-breaking in
/// characterize() independent of local ordering.
class Simplex {
public:
    Simplex(std::span<const Vec> vertices, std::span<const int> global_ids = {});
    explicit Simplex(const PointSet& vertices);

    /// Unit right simplex (0, e_1, ..., e_d).
    static Simplex reference(int dim);

    int dim() const { return dim_; }
    int num_vertices() const { return dim_ + 1; }
    const Vec& vertex(int i) const { return vertices_[i]; }
    int vertex_id(int i) const { return ids_[i]; }
    PointSet vertices() const;

    double measure() const { return measure_; }
    double signed_volume() const;
    double diameter() const { return diameter_; }
    double edge_length(int i, int j) const { return (vertices_[i] - vertices_[j]).norm(); }
    Vec centroid() const;

    /// Vertices of the face opposite `opposite`, in increasing local order.
    PointSet face_vertices(int opposite) const;
    FaceGeometry face(int opposite) const;
    /// ℓ_{T,F} = d!|T|_d / |F|_{d-1}.
    double ell(int opposite) const;

    /// Barycentric coordinates (size d+1); x may lie outside the simplex.
    Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1> barycentric(const Vec& x) const;
    const Vec& barycentric_gradient(int i) const { return grad_lambda_[i]; }
    Vec point_from_barycentric(std::span<const double> lambda) const;

    /// x = A xhat + p_0 with A = [p_1 - p_0, ..., p_d - p_0].
    AffineMap reference_map() const;

private:
    void init();

    int dim_ = 0;
    std::array<Vec, 4> vertices_;
    std::array<int, 4> ids_{0, 1, 2, 3};
    std::array<Vec, 4> grad_lambda_;
    Mat jacobian_inv_;
    double det_ = 0.0;
    double measure_ = 0.0;
    double diameter_ = 0.0;
};

/// d!·|T|_d for the given simplex; the numerator of ℓ_{T,F}.
double scaled_volume(const Simplex& simplex);

/// Measure of the (k-1)-simplex spanned by the k columns of `points`.
double facet_measure(const PointSet& points);

double measure(const Simplex& simplex);
FaceGeometry face_geometry(const Simplex& simplex, int opposite_vertex);
double ell(const Simplex& simplex, int opposite_vertex);

/// Largest interior angle: vertex angle in 2D, dihedral angle in 3D.
double max_angle(const Simplex& simplex);

enum class ShapeType { TypeI, TypeII };

/// Edge characterisation of a simplex: the vertex labelling p_1..p_{d+1},
/// direction lengths h_i, unit directions r_i and H_T = (∏h_i/|T|)·h_T.
///
/// 2D: p_2p_3 is the longest edge and h_1 = |p_1-p_2| ≥ h_2 = |p_1-p_3|.
/// 3D: h_2 is the minimum edge length; p_1p_2 is the longest edge sharing an
/// endpoint with it, and the bisecting plane of p_1p_2 separates (TypeII) or
/// does not separate (TypeI) p_3 and p_4. Ties are broken by the sorted global
/// vertex-id pair; when the p_1/p_4 half-space assumption fails p_1 and p_2
/// are swapped and `relabelled` is set.
struct ElementCharacterization {
    int dim = 0;
    std::array<int, 4> order{};   // local vertex index of p_1..p_{d+1}
    std::array<double, 3> h{};    // h_1..h_d
    std::array<Vec, 3> r;         // r_1..r_d
    ShapeType shape_type = ShapeType::TypeI;
    double h_T = 0.0;
    double H_T = 0.0;
    double H_over_h = 0.0;
    bool relabelled = false;
};

ElementCharacterization characterize(const Simplex& simplex);

/// Φ = Φ_T ∘ Φ_T̃ with A = rotation · shape · scaling, reconstructed from a
/// characterisation. Only used to verify the analysis frame; assembly works
/// with Simplex::reference_map().
struct AnisotropicFactorization {
    Mat scaling;   // diag(h_1..h_d)
    Mat shape;     // upper-triangular with unit columns
    Mat rotation;  // orthogonal (rotation or mirror)
    Vec offset;    // p_1
    ShapeType shape_type = ShapeType::TypeI;
    bool admissible = true; // sign / size constraints on the shape parameters hold

    AffineMap map() const { return {rotation * shape * scaling, offset}; }
};

AnisotropicFactorization factorize(const Simplex& simplex, const ElementCharacterization& ch);

/// Reference vertex p̂_k of T̂ (2D) or T̂_1 / T̂_2 (3D) in labelled order.
PointSet reference_vertices(int dim, ShapeType type);

/// Piola push-forward v(x) = A v̂(Φ^{-1}(x)) / det A.
VectorFunction piola(const AffineMap& map, VectorFunction reference_field);

} // namespace wopsip
