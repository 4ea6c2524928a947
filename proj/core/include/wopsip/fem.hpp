#pragma once

#include "wopsip/geometry.hpp"
#include "wopsip/mesh.hpp"
#include "wopsip/quadrature.hpp"
#include "wopsip/types.hpp"

#include <Eigen/Core>

#include <vector>

namespace wopsip {

/// DOF map of the fully discontinuous CR space: cell c owns DOFs
/// c·(d+1) + i, one per local face i. Nothing is shared between cells.
class DofMap {
public:
    explicit DofMap(const Mesh& mesh) : dim_(mesh.dim()), cells_(static_cast<int>(mesh.num_cells())) {}

    int local_size() const { return dim_ + 1; }
    int index(int cell, int local) const { return cell * (dim_ + 1) + local; }
    int total_dofs() const { return cells_ * (dim_ + 1); }

private:
    int dim_;
    int cells_;
};

/// Discrete field in the discontinuous CR basis. Holds a non-owning pointer
/// to its mesh, which must outlive the field.
class FeField {
public:
    FeField(const Mesh& mesh, Eigen::VectorXd coefficients);
    static FeField zero(const Mesh& mesh);

    const Mesh& mesh() const { return *mesh_; }
    const Eigen::VectorXd& coefficients() const { return coef_; }
    Eigen::VectorXd& coefficients() { return coef_; }
    double coefficient(int cell, int local) const { return coef_[cell * (mesh_->dim() + 1) + local]; }

    /// Value of the cell-c polynomial at x (x need not lie in the cell).
    double value(int cell, const Vec& x) const;
    double value(const Simplex& simplex, int cell, const Vec& x) const;
    /// Constant broken gradient on cell c.
    Vec gradient(int cell) const;
    Vec gradient(const Simplex& simplex, int cell) const;

private:
    const Mesh* mesh_;
    Eigen::VectorXd coef_;
};

struct CrBasisValue {
    double value;
    Vec gradient;
};

/// θ_i = d(1/d - λ_i); equals 1 on average over face i and 0 on the others.
CrBasisValue cr_basis(const Simplex& simplex, int i, const Vec& x);

/// Face mean of phi over face i of the simplex.
double cr_dof(const ScalarFunction& phi, const Simplex& simplex, int i, int degree = k_default_face_degree);

/// Local CR interpolation: the d+1 face means.
Eigen::VectorXd cr_interpolate(const Simplex& simplex, const ScalarFunction& phi, int degree = k_default_face_degree);
FeField cr_interpolate(const Mesh& mesh, const ScalarFunction& phi, int degree = k_default_face_degree);

/// θ^RT_i = (x - P_i)/(d|T|), with n_i outward so its flux through face i is δ_ij.
Vec rt_basis(const Simplex& simplex, int i, const Vec& x);
double rt_basis_divergence(const Simplex& simplex);

/// Outward flux of v through face i.
double rt_dof(const VectorFunction& v, const Simplex& simplex, int i, int degree = k_default_face_degree);

/// v(x) = a + b·x, a member of RT⁰(T).
struct RtLocalField {
    Vec a;
    double b = 0.0;

    Vec value(const Vec& x) const { return a + b * x; }
    double divergence() const { return b * static_cast<double>(a.size()); }
};

RtLocalField rt_from_fluxes(const Simplex& simplex, std::span<const double> fluxes);
RtLocalField rt_interpolate(const Simplex& simplex, const VectorFunction& v, int degree = k_default_face_degree);
std::vector<RtLocalField> rt_interpolate(const Mesh& mesh, const VectorFunction& v, int degree = k_default_face_degree);

/// Cell mean (1/|T|)∫_T phi.
double l2_project_cell(const Simplex& simplex, const ScalarFunction& phi, int degree = k_default_volume_degree);
/// Mean over the facet spanned by the columns of `face`.
double l2_project_face(const PointSet& face, const ScalarFunction& phi, int degree = k_default_face_degree);

/// Π_F⁰[[v]]: owner coefficient minus neighbour coefficient on interior
/// faces, the owner coefficient on boundary faces.
double face_mean_jump(const FeField& field, int face);

struct VectorField {
    VectorFunction value;
    ScalarFunction divergence;
};

/// max_T |div I^RT_T v - Π⁰_T div v|.
double commuting_check(const Mesh& mesh, const VectorField& v, int degree = k_default_face_degree);

} // namespace wopsip
