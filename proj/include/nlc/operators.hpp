#pragma once

#include <vector>

#include "nlc/fields.hpp"

namespace nlc {

/// Cell samples extended by ghost layers on every side according to the
/// field's boundary tag. Index range is [-width, n + width) on each axis.
class Padded {
public:
    explicit Padded(const ScalarField& f, int width = 3);

    double operator()(int i, int j) const { return v_[static_cast<std::size_t>(j + w_) * stride_ + (i + w_)]; }
    int width() const { return w_; }

private:
    int w_;
    std::size_t stride_;
    std::vector<double> v_;
};

/// Central-difference approximation of d^ax/dx^ax d^ay/dy^ay at cell centers,
/// ax + ay <= 3. Second order in the interior; boundary accuracy follows the
/// ghost extension and drops for higher derivatives.
ScalarField derivative(const ScalarField& f, int ax, int ay);

CellVector gradient(const ScalarField& f);
ScalarField laplacian(const ScalarField& f);
DirectorField laplacian(const DirectorField& d);

/// MAC divergence per cell.
ScalarField divergence(const VectorField& u);

/// Pressure-style gradient on interior faces; boundary-normal faces are zero.
VectorField face_gradient(const ScalarField& p);

/// Face velocities averaged to cell centers.
CellVector cell_velocity(const VectorField& u);

/// Cell-centered velocity gradient, entry (r, c) = d u_r / d x_c. Shear
/// derivatives live naturally on cell corners and are averaged to centers.
TensorField velocity_gradient(const VectorField& u);

/// D(u) = (grad u + grad u^T) / 2 at cell centers.
TensorField deformation_tensor(const VectorField& u);

/// Corner-sampled shear rate du_x/dy + du_y/dx, (nx+1) x (ny+1), with wall
/// ghosts per the field's boundary tag.
std::vector<double> corner_shear(const VectorField& u);

/// (grad d . grad d)_{rc} = sum_k d_r d_k d_c d_k per cell.
TensorField elastic_stress(const DirectorField& d);

/// div(grad d . grad d) by conservative differencing onto interior faces.
VectorField stress_divergence(const DirectorField& d);

/// |grad d|^2 = sum_k |grad d_k|^2 per cell, centered stencils.
ScalarField grad_sq(const DirectorField& d);

/// (v . grad) d per component, v averaged to centers, centered differences.
DirectorField convective_derivative(const DirectorField& d, const VectorField& v);

/// Sum over faces of squared one-sided differences, i.e. the Dirichlet energy
/// int |grad d|^2 that pairs with the 5-point Neumann Laplacian by summation
/// by parts.
double dirichlet_energy(const DirectorField& d);
double dirichlet_energy(const ScalarField& f);

/// Face-direction averages of a cell field onto MAC faces (boundary faces use
/// the adjacent cell).
VectorField cell_to_faces(const ScalarField& f);

}  // namespace nlc
