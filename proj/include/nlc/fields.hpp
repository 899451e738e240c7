#pragma once

#include <array>
#include <functional>
#include <vector>

#include "nlc/grid.hpp"

namespace nlc {

/// Boundary treatment for cell-centered samples, realized through ghost cells.
enum class BcKind {
    neumann,      ///< even reflection: zero normal derivative
    dirichlet,    ///< odd reflection about the prescribed wall value
    extrapolate,  ///< quadratic extrapolation from the first three interior cells
};

struct ScalarBc {
    BcKind kind = BcKind::neumann;
    double value = 0.0;

    static ScalarBc neumann() { return {BcKind::neumann, 0.0}; }
    static ScalarBc dirichlet(double v) { return {BcKind::dirichlet, v}; }
    static ScalarBc extrapolate() { return {BcKind::extrapolate, 0.0}; }
};

/// Cell-centered scalar samples (density, pressure, viscosity, ...).
class ScalarField {
public:
    explicit ScalarField(const Grid& g, double fill = 0.0, ScalarBc bc = ScalarBc::neumann());

    /// Samples f at every cell center.
    static ScalarField sample(const Grid& g, const std::function<double(double, double)>& f,
                              ScalarBc bc = ScalarBc::neumann());

    const Grid& grid() const { return grid_; }
    const ScalarBc& bc() const { return bc_; }
    void set_bc(ScalarBc bc) { bc_ = bc; }

    double& operator()(int i, int j) { return v_[grid_.cell(i, j)]; }
    double operator()(int i, int j) const { return v_[grid_.cell(i, j)]; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }
    std::size_t size() const { return v_.size(); }

    double min() const;
    double max() const;
    double mean() const;
    bool finite() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);

private:
    Grid grid_;
    std::vector<double> v_;
    ScalarBc bc_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Pair of cell-centered components, e.g. a cell-centered gradient.
struct CellVector {
    ScalarField x;
    ScalarField y;
};

enum class VelocityBc {
    no_slip,     ///< boundary-normal faces are zero, tangential ghosts reflect to zero
    prescribed,  ///< boundary faces hold given values, tangential ghosts extrapolate linearly
};

/// Velocity on the MAC lattice: ux on vertical faces ((nx+1) x ny), uy on
/// horizontal faces (nx x (ny+1)).
class VectorField {
public:
    explicit VectorField(const Grid& g, VelocityBc bc = VelocityBc::no_slip);

    /// Samples (fx, fy) at face midpoints. No-slip fields get their
    /// boundary-normal faces zeroed.
    static VectorField sample(const Grid& g, const std::function<double(double, double)>& fx,
                              const std::function<double(double, double)>& fy,
                              VelocityBc bc = VelocityBc::prescribed);

    /// Discrete velocity from a stream function sampled at cell corners:
    /// ux = d(psi)/dy, uy = -d(psi)/dx by differences along face edges.
    /// Exactly divergence-free on the lattice.
    static VectorField from_stream_function(const Grid& g,
                                            const std::function<double(double, double)>& psi,
                                            VelocityBc bc = VelocityBc::no_slip);

    const Grid& grid() const { return grid_; }
    VelocityBc bc() const { return bc_; }
    void set_bc(VelocityBc bc) { bc_ = bc; }

    double& ux(int i, int j) { return ux_[grid_.xface(i, j)]; }
    double ux(int i, int j) const { return ux_[grid_.xface(i, j)]; }
    double& uy(int i, int j) { return uy_[grid_.yface(i, j)]; }
    double uy(int i, int j) const { return uy_[grid_.yface(i, j)]; }
    std::vector<double>& ux_values() { return ux_; }
    const std::vector<double>& ux_values() const { return ux_; }
    std::vector<double>& uy_values() { return uy_; }
    const std::vector<double>& uy_values() const { return uy_; }

    /// Zeroes the boundary-normal faces.
    void enforce_no_slip();
    bool finite() const;
    double max_abs() const;

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(double s);

private:
    Grid grid_;
    std::vector<double> ux_;
    std::vector<double> uy_;
    VelocityBc bc_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Director samples at cell centers, m components, homogeneous Neumann.
class DirectorField {
public:
    DirectorField(const Grid& g, int components = 2);
    /// Uniform field equal to `value` in every cell.
    DirectorField(const Grid& g, const std::vector<double>& value);

    static DirectorField sample(const Grid& g, int components,
                                const std::function<void(double, double, double*)>& f);
    /// d = (cos theta, sin theta).
    static DirectorField from_angle(const Grid& g, const std::function<double(double, double)>& theta);

    const Grid& grid() const { return comps_.front().grid(); }
    int components() const { return static_cast<int>(comps_.size()); }
    ScalarField& component(int k) { return comps_[k]; }
    const ScalarField& component(int k) const { return comps_[k]; }
    const std::vector<ScalarField>& comps() const { return comps_; }

    double norm_at(int i, int j) const;
    /// max over cells of | |d| - 1 |.
    double unit_deviation() const;
    bool finite() const;

    DirectorField& operator+=(const DirectorField& o);
    DirectorField& operator-=(const DirectorField& o);
    DirectorField& operator*=(double s);

private:
    std::vector<ScalarField> comps_;
};

DirectorField operator+(DirectorField a, const DirectorField& b);
DirectorField operator-(DirectorField a, const DirectorField& b);
DirectorField operator*(double s, DirectorField a);

/// 2x2 tensor per cell center; entry (r, c) stored in xx, xy, yx, yy.
struct TensorField {
    explicit TensorField(const Grid& g);

    const Grid& grid() const { return xx.grid(); }
    /// Frobenius norm per cell.
    ScalarField frobenius() const;
    double max_asymmetry() const;

    ScalarField xx;
    ScalarField xy;
    ScalarField yx;
    ScalarField yy;
};

}  // namespace nlc
