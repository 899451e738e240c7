#include "nlc/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlc/errors.hpp"

namespace nlc {

namespace {

void require_same(const Grid& a, const Grid& b) {
    if (!(a == b)) throw ConfigError("field grids differ");
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

// ---------------------------------------------------------------- ScalarField

ScalarField::ScalarField(const Grid& g, double fill, ScalarBc bc) : grid_(g), v_(g.cells(), fill), bc_(bc) {}

ScalarField ScalarField::sample(const Grid& g, const std::function<double(double, double)>& f, ScalarBc bc) {
    ScalarField out(g, 0.0, bc);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) out(i, j) = f(g.xc(i), g.yc(j));
    return out;
}

double ScalarField::min() const { return *std::min_element(v_.begin(), v_.end()); }
double ScalarField::max() const { return *std::max_element(v_.begin(), v_.end()); }
double ScalarField::mean() const { return std::accumulate(v_.begin(), v_.end(), 0.0) / v_.size(); }
bool ScalarField::finite() const { return all_finite(v_); }

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same(grid_, o.grid_);
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same(grid_, o.grid_);
    for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(const Grid& g, VelocityBc bc)
    : grid_(g), ux_(g.xfaces(), 0.0), uy_(g.yfaces(), 0.0), bc_(bc) {}

VectorField VectorField::sample(const Grid& g, const std::function<double(double, double)>& fx,
                                const std::function<double(double, double)>& fy, VelocityBc bc) {
    VectorField u(g, bc);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i <= g.nx(); ++i) u.ux(i, j) = fx(g.xn(i), g.yc(j));
    for (int j = 0; j <= g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) u.uy(i, j) = fy(g.xc(i), g.yn(j));
    if (bc == VelocityBc::no_slip) u.enforce_no_slip();
    return u;
}

VectorField VectorField::from_stream_function(const Grid& g, const std::function<double(double, double)>& psi,
                                              VelocityBc bc) {
    const int nx = g.nx(), ny = g.ny();
    std::vector<double> corner(static_cast<std::size_t>(nx + 1) * (ny + 1));
    auto c = [&](int i, int j) -> double& { return corner[static_cast<std::size_t>(j) * (nx + 1) + i]; };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) c(i, j) = psi(g.xn(i), g.yn(j));
    VectorField u(g, bc);
    const double h = g.h();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i) u.ux(i, j) = (c(i, j + 1) - c(i, j)) / h;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) u.uy(i, j) = -(c(i + 1, j) - c(i, j)) / h;
    if (bc == VelocityBc::no_slip) u.enforce_no_slip();
    return u;
}

void VectorField::enforce_no_slip() {
    for (int j = 0; j < grid_.ny(); ++j) {
        ux(0, j) = 0.0;
        ux(grid_.nx(), j) = 0.0;
    }
    for (int i = 0; i < grid_.nx(); ++i) {
        uy(i, 0) = 0.0;
        uy(i, grid_.ny()) = 0.0;
    }
}

bool VectorField::finite() const { return all_finite(ux_) && all_finite(uy_); }

double VectorField::max_abs() const {
    double m = 0.0;
    for (double x : ux_) m = std::max(m, std::abs(x));
    for (double x : uy_) m = std::max(m, std::abs(x));
    return m;
}

VectorField& VectorField::operator+=(const VectorField& o) {
    require_same(grid_, o.grid_);
    for (std::size_t k = 0; k < ux_.size(); ++k) ux_[k] += o.ux_[k];
    for (std::size_t k = 0; k < uy_.size(); ++k) uy_[k] += o.uy_[k];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
    require_same(grid_, o.grid_);
    for (std::size_t k = 0; k < ux_.size(); ++k) ux_[k] -= o.ux_[k];
    for (std::size_t k = 0; k < uy_.size(); ++k) uy_[k] -= o.uy_[k];
    return *this;
}

VectorField& VectorField::operator*=(double s) {
    for (double& x : ux_) x *= s;
    for (double& x : uy_) x *= s;
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

// -------------------------------------------------------------- DirectorField

DirectorField::DirectorField(const Grid& g, int components) {
    if (components < 1) throw ConfigError("director needs at least one component");
    comps_.assign(components, ScalarField(g, 0.0, ScalarBc::neumann()));
}

DirectorField::DirectorField(const Grid& g, const std::vector<double>& value) : DirectorField(g, static_cast<int>(value.size())) {
    for (int k = 0; k < components(); ++k) std::fill(comps_[k].values().begin(), comps_[k].values().end(), value[k]);
}

DirectorField DirectorField::sample(const Grid& g, int components,
                                    const std::function<void(double, double, double*)>& f) {
    DirectorField d(g, components);
    std::vector<double> buf(components);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            f(g.xc(i), g.yc(j), buf.data());
            for (int k = 0; k < components; ++k) d.comps_[k](i, j) = buf[k];
        }
    return d;
}

DirectorField DirectorField::from_angle(const Grid& g, const std::function<double(double, double)>& theta) {
    return sample(g, 2, [&](double x, double y, double* out) {
        const double t = theta(x, y);
        out[0] = std::cos(t);
        out[1] = std::sin(t);
    });
}

double DirectorField::norm_at(int i, int j) const {
    double s = 0.0;
    for (const auto& c : comps_) s += c(i, j) * c(i, j);
    return std::sqrt(s);
}

double DirectorField::unit_deviation() const {
    const Grid& g = grid();
    double dev = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) dev = std::max(dev, std::abs(norm_at(i, j) - 1.0));
    return dev;
}

bool DirectorField::finite() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const ScalarField& c) { return c.finite(); });
}

DirectorField& DirectorField::operator+=(const DirectorField& o) {
    if (o.components() != components()) throw ConfigError("director component counts differ");
    for (int k = 0; k < components(); ++k) comps_[k] += o.comps_[k];
    return *this;
}

DirectorField& DirectorField::operator-=(const DirectorField& o) {
    if (o.components() != components()) throw ConfigError("director component counts differ");
    for (int k = 0; k < components(); ++k) comps_[k] -= o.comps_[k];
    return *this;
}

DirectorField& DirectorField::operator*=(double s) {
    for (auto& c : comps_) c *= s;
    return *this;
}

DirectorField operator+(DirectorField a, const DirectorField& b) { return a += b; }
DirectorField operator-(DirectorField a, const DirectorField& b) { return a -= b; }
DirectorField operator*(double s, DirectorField a) { return a *= s; }

// ---------------------------------------------------------------- TensorField

TensorField::TensorField(const Grid& g) : xx(g), xy(g), yx(g), yy(g) {}

ScalarField TensorField::frobenius() const {
    ScalarField out(grid());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double a = xx.values()[k], b = xy.values()[k], c = yx.values()[k], d = yy.values()[k];
        out.values()[k] = std::sqrt(a * a + b * b + c * c + d * d);
    }
    return out;
}

double TensorField::max_asymmetry() const {
    double m = 0.0;
    for (std::size_t k = 0; k < xy.size(); ++k) m = std::max(m, std::abs(xy.values()[k] - yx.values()[k]));
    return m;
}

}  // namespace nlc
