#pragma once

#include <Eigen/Sparse>

#include "nlc/fields.hpp"

namespace nlc {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Numbering of interior MAC faces (the velocity unknowns under no-slip):
/// all interior x-faces first, then interior y-faces.
class FaceIndex {
public:
    explicit FaceIndex(const Grid& g);

    int size() const { return nux_ + nuy_; }
    int x_count() const { return nux_; }
    /// -1 on boundary-normal faces.
    int ux(int i, int j) const;
    int uy(int i, int j) const;

    Vec pack(const VectorField& u) const;
    VectorField unpack(const Vec& x) const;
    const Grid& grid() const { return g_; }

private:
    Grid g_;
    int nux_;
    int nuy_;
};

/// Sparse MAC operators on interior faces and cells. Strong-form scaling:
/// every row is a pointwise equation, inner products carry h^2.
class MacOperators {
public:
    explicit MacOperators(const Grid& g);

    const Grid& grid() const { return idx_.grid(); }
    const FaceIndex& index() const { return idx_; }

    /// G: cells -> faces, (p_i - p_{i-1}) / h. The MAC divergence is -G^T.
    const SpMat& gradient() const { return grad_; }

    /// A u = -div(2 mu D(u)) assembled as S^T W S from the strain map S, so A
    /// is symmetric and h^2 u^T A u = 2 int mu |D(u)|^2 with corner shear
    /// quadrature.
    SpMat viscous(const ScalarField& mu) const;

    /// Diagonal face mass from cell values averaged onto faces.
    SpMat mass(const ScalarField& rho) const;
    Vec face_average(const ScalarField& rho) const;

    /// Centered rho (v . grad) u on interior faces with no-slip wall ghosts.
    SpMat convection(const VectorField& v, const ScalarField& rho) const;
    /// (C - C^T) / 2 of the above: u^T N u = 0 exactly.
    SpMat skew_convection(const VectorField& v, const ScalarField& rho) const;

    /// G^T diag(w) G: variable-coefficient Neumann Laplacian (negated), one
    /// weight per interior face.
    SpMat poisson(const Vec& face_weights) const;

    Vec pack_cells(const ScalarField& f) const;
    ScalarField unpack_cells(const Vec& x) const;

private:
    FaceIndex idx_;
    SpMat grad_;
};

/// 2 int mu |D(u)|^2 through the assembled quadratic form h^2 u^T A u.
double viscous_dissipation(const MacOperators& ops, const ScalarField& mu, const VectorField& u);

}  // namespace nlc
