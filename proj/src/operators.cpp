#include "nlc/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nlc/errors.hpp"

namespace nlc {

namespace {

// ghost value at position -1-k from the first interior samples f0, f1, f2
double ghost(const ScalarBc& bc, int k, double f_mirror, double f0, double f1, double f2) {
    switch (bc.kind) {
        case BcKind::neumann:
            return f_mirror;
        case BcKind::dirichlet:
            return 2.0 * bc.value - f_mirror;
        case BcKind::extrapolate: {
            const double x = -1.0 - k;
            return 0.5 * (x - 1.0) * (x - 2.0) * f0 - x * (x - 2.0) * f1 + 0.5 * x * (x - 1.0) * f2;
        }
    }
    return 0.0;
}

// 1D stencil coefficients at offsets -2..2 for derivative orders 0..3
constexpr std::array<std::array<double, 5>, 4> kStencil = {{
    {0.0, 0.0, 1.0, 0.0, 0.0},
    {0.0, -0.5, 0.0, 0.5, 0.0},
    {0.0, 1.0, -2.0, 1.0, 0.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
}};

}  // namespace

Padded::Padded(const ScalarField& f, int width) : w_(width) {
    const Grid& g = f.grid();
    const int nx = g.nx(), ny = g.ny();
    if (width > nx || width > ny) throw ConfigError("ghost width exceeds grid");
    stride_ = static_cast<std::size_t>(nx + 2 * w_);
    v_.assign(stride_ * (ny + 2 * w_), 0.0);
    auto at = [&](int i, int j) -> double& { return v_[static_cast<std::size_t>(j + w_) * stride_ + (i + w_)]; };
    const ScalarBc& bc = f.bc();
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) at(i, j) = f(i, j);
        for (int k = 0; k < w_; ++k) {
            at(-1 - k, j) = ghost(bc, k, f(k, j), f(0, j), f(1, j), f(2, j));
            at(nx + k, j) = ghost(bc, k, f(nx - 1 - k, j), f(nx - 1, j), f(nx - 2, j), f(nx - 3, j));
        }
    }
    for (int i = -w_; i < nx + w_; ++i)
        for (int k = 0; k < w_; ++k) {
            at(i, -1 - k) = ghost(bc, k, at(i, k), at(i, 0), at(i, 1), at(i, 2));
            at(i, ny + k) = ghost(bc, k, at(i, ny - 1 - k), at(i, ny - 1), at(i, ny - 2), at(i, ny - 3));
        }
}

ScalarField derivative(const ScalarField& f, int ax, int ay) {
    if (ax < 0 || ay < 0 || ax + ay > 3) throw ConfigError("derivative order must be at most 3");
    const Grid& g = f.grid();
    const Padded p(f);
    const double scale = 1.0 / std::pow(g.h(), ax + ay);
    const auto& cx = kStencil[ax];
    const auto& cy = kStencil[ay];
    ScalarField out(g, 0.0, ScalarBc::extrapolate());
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            double s = 0.0;
            for (int b = 0; b < 5; ++b) {
                if (cy[b] == 0.0) continue;
                for (int a = 0; a < 5; ++a) {
                    if (cx[a] == 0.0) continue;
                    s += cx[a] * cy[b] * p(i + a - 2, j + b - 2);
                }
            }
            out(i, j) = s * scale;
        }
    return out;
}

CellVector gradient(const ScalarField& f) { return {derivative(f, 1, 0), derivative(f, 0, 1)}; }

ScalarField laplacian(const ScalarField& f) {
    const Grid& g = f.grid();
    const Padded p(f, 1);
    const double ih2 = 1.0 / g.cell_area();
    ScalarField out(g, 0.0, f.bc());
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double c = p(i, j);
            // differences first, so that a constant field gives exactly zero
            out(i, j) = ((p(i + 1, j) - c) + (p(i - 1, j) - c) + (p(i, j + 1) - c) + (p(i, j - 1) - c)) * ih2;
        }
    return out;
}

DirectorField laplacian(const DirectorField& d) {
    DirectorField out(d.grid(), d.components());
    for (int k = 0; k < d.components(); ++k) out.component(k) = laplacian(d.component(k));
    return out;
}

ScalarField divergence(const VectorField& u) {
    const Grid& g = u.grid();
    const double ih = 1.0 / g.h();
    ScalarField out(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            out(i, j) = ((u.ux(i + 1, j) - u.ux(i, j)) + (u.uy(i, j + 1) - u.uy(i, j))) * ih;
    return out;
}

VectorField face_gradient(const ScalarField& p) {
    const Grid& g = p.grid();
    const double ih = 1.0 / g.h();
    VectorField out(g, VelocityBc::no_slip);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 1; i < g.nx(); ++i) out.ux(i, j) = (p(i, j) - p(i - 1, j)) * ih;
    for (int j = 1; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) out.uy(i, j) = (p(i, j) - p(i, j - 1)) * ih;
    return out;
}

CellVector cell_velocity(const VectorField& u) {
    const Grid& g = u.grid();
    CellVector c{ScalarField(g, 0.0, ScalarBc::extrapolate()), ScalarField(g, 0.0, ScalarBc::extrapolate())};
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            c.x(i, j) = 0.5 * (u.ux(i, j) + u.ux(i + 1, j));
            c.y(i, j) = 0.5 * (u.uy(i, j) + u.uy(i, j + 1));
        }
    return c;
}

namespace {

struct CornerDerivs {
    std::vector<double> dux_dy;
    std::vector<double> duy_dx;
};

// Shear derivatives at the (nx+1) x (ny+1) cell corners.
CornerDerivs corner_derivs(const VectorField& u) {
    const Grid& g = u.grid();
    const int nx = g.nx(), ny = g.ny();
    const double ih = 1.0 / g.h();
    const bool no_slip = u.bc() == VelocityBc::no_slip;
    CornerDerivs c{std::vector<double>(static_cast<std::size_t>(nx + 1) * (ny + 1)),
                   std::vector<double>(static_cast<std::size_t>(nx + 1) * (ny + 1))};
    auto ux_at = [&](int i, int j) {
        if (j < 0) return no_slip ? -u.ux(i, 0) : 2.0 * u.ux(i, 0) - u.ux(i, 1);
        if (j >= ny) return no_slip ? -u.ux(i, ny - 1) : 2.0 * u.ux(i, ny - 1) - u.ux(i, ny - 2);
        return u.ux(i, j);
    };
    auto uy_at = [&](int i, int j) {
        if (i < 0) return no_slip ? -u.uy(0, j) : 2.0 * u.uy(0, j) - u.uy(1, j);
        if (i >= nx) return no_slip ? -u.uy(nx - 1, j) : 2.0 * u.uy(nx - 1, j) - u.uy(nx - 2, j);
        return u.uy(i, j);
    };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const std::size_t k = static_cast<std::size_t>(j) * (nx + 1) + i;
            c.dux_dy[k] = (ux_at(i, j) - ux_at(i, j - 1)) * ih;
            c.duy_dx[k] = (uy_at(i, j) - uy_at(i - 1, j)) * ih;
        }
    return c;
}

}  // namespace

std::vector<double> corner_shear(const VectorField& u) {
    CornerDerivs c = corner_derivs(u);
    for (std::size_t k = 0; k < c.dux_dy.size(); ++k) c.dux_dy[k] += c.duy_dx[k];
    return c.dux_dy;
}

TensorField velocity_gradient(const VectorField& u) {
    const Grid& g = u.grid();
    const int nx = g.nx();
    const double ih = 1.0 / g.h();
    const CornerDerivs c = corner_derivs(u);
    auto avg = [&](const std::vector<double>& v, int i, int j) {
        auto at = [&](int a, int b) { return v[static_cast<std::size_t>(b) * (nx + 1) + a]; };
        return 0.25 * (at(i, j) + at(i + 1, j) + at(i, j + 1) + at(i + 1, j + 1));
    };
    TensorField t(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < nx; ++i) {
            t.xx(i, j) = (u.ux(i + 1, j) - u.ux(i, j)) * ih;
            t.yy(i, j) = (u.uy(i, j + 1) - u.uy(i, j)) * ih;
            t.xy(i, j) = avg(c.dux_dy, i, j);
            t.yx(i, j) = avg(c.duy_dx, i, j);
        }
    return t;
}

TensorField deformation_tensor(const VectorField& u) {
    TensorField t = velocity_gradient(u);
    for (std::size_t k = 0; k < t.xy.size(); ++k) {
        const double s = 0.5 * (t.xy.values()[k] + t.yx.values()[k]);
        t.xy.values()[k] = s;
        t.yx.values()[k] = s;
    }
    return t;
}

TensorField elastic_stress(const DirectorField& d) {
    const Grid& g = d.grid();
    TensorField t(g);
    for (int k = 0; k < d.components(); ++k) {
        const CellVector gk = gradient(d.component(k));
        for (std::size_t c = 0; c < g.cells(); ++c) {
            const double gx = gk.x.values()[c], gy = gk.y.values()[c];
            t.xx.values()[c] += gx * gx;
            t.xy.values()[c] += gx * gy;
            t.yy.values()[c] += gy * gy;
        }
    }
    t.yx = t.xy;
    return t;
}

VectorField stress_divergence(const DirectorField& d) {
    const Grid& g = d.grid();
    const int nx = g.nx(), ny = g.ny();
    const double ih = 1.0 / g.h();
    const TensorField t = elastic_stress(d);
    // off-diagonal stress on corners; it vanishes on walls since one factor is
    // the normal derivative of d
    std::vector<double> txy(static_cast<std::size_t>(nx + 1) * (ny + 1), 0.0);
    for (int j = 1; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            txy[static_cast<std::size_t>(j) * (nx + 1) + i] =
                0.25 * (t.xy(i - 1, j - 1) + t.xy(i, j - 1) + t.xy(i - 1, j) + t.xy(i, j));
    auto corner = [&](int i, int j) { return txy[static_cast<std::size_t>(j) * (nx + 1) + i]; };
    VectorField f(g, VelocityBc::no_slip);
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            f.ux(i, j) = (t.xx(i, j) - t.xx(i - 1, j)) * ih + (corner(i, j + 1) - corner(i, j)) * ih;
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            f.uy(i, j) = (t.yy(i, j) - t.yy(i, j - 1)) * ih + (corner(i + 1, j) - corner(i, j)) * ih;
    return f;
}

ScalarField grad_sq(const DirectorField& d) {
    const Grid& g = d.grid();
    ScalarField out(g);
    for (int k = 0; k < d.components(); ++k) {
        const CellVector gk = gradient(d.component(k));
        for (std::size_t c = 0; c < g.cells(); ++c)
            out.values()[c] += gk.x.values()[c] * gk.x.values()[c] + gk.y.values()[c] * gk.y.values()[c];
    }
    return out;
}

DirectorField convective_derivative(const DirectorField& d, const VectorField& v) {
    const Grid& g = d.grid();
    const CellVector vc = cell_velocity(v);
    DirectorField out(g, d.components());
    for (int k = 0; k < d.components(); ++k) {
        const CellVector gk = gradient(d.component(k));
        auto& o = out.component(k).values();
        for (std::size_t c = 0; c < g.cells(); ++c)
            o[c] = vc.x.values()[c] * gk.x.values()[c] + vc.y.values()[c] * gk.y.values()[c];
    }
    return out;
}

double dirichlet_energy(const ScalarField& f) {
    const Grid& g = f.grid();
    double s = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (i + 1 < g.nx()) s += (f(i + 1, j) - f(i, j)) * (f(i + 1, j) - f(i, j));
            if (j + 1 < g.ny()) s += (f(i, j + 1) - f(i, j)) * (f(i, j + 1) - f(i, j));
        }
    // each squared difference is (h df)^2 over an h^2 face patch
    return s;
}

double dirichlet_energy(const DirectorField& d) {
    double s = 0.0;
    for (int k = 0; k < d.components(); ++k) s += dirichlet_energy(d.component(k));
    return s;
}

VectorField cell_to_faces(const ScalarField& f) {
    const Grid& g = f.grid();
    const int nx = g.nx(), ny = g.ny();
    VectorField out(g, VelocityBc::prescribed);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const int a = std::max(i - 1, 0), b = std::min(i, nx - 1);
            out.ux(i, j) = 0.5 * (f(a, j) + f(b, j));
        }
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int a = std::max(j - 1, 0), b = std::min(j, ny - 1);
            out.uy(i, j) = 0.5 * (f(i, a) + f(i, b));
        }
    return out;
}

}  // namespace nlc
