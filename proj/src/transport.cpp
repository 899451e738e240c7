#include "nlc/transport.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "nlc/errors.hpp"
#include "nlc/norms.hpp"
#include "nlc/operators.hpp"

namespace nlc {

namespace {

// Bilinear lookup of values stored on a lattice with origin (x0, y0), spacing
// h and size nxs x nys; indices are clamped so weights stay convex.
template <class At>
double bilinear(At at, int nxs, int nys, double x0, double y0, double h, double x, double y) {
    double fx = (x - x0) / h, fy = (y - y0) / h;
    fx = std::clamp(fx, 0.0, static_cast<double>(nxs - 1));
    fy = std::clamp(fy, 0.0, static_cast<double>(nys - 1));
    int i = std::min(static_cast<int>(fx), nxs - 2);
    int j = std::min(static_cast<int>(fy), nys - 2);
    const double a = fx - i, b = fy - j;
    // nested lerps are exact on constants and never leave the data range
    const double lo = std::lerp(at(i, j), at(i + 1, j), a);
    const double hi = std::lerp(at(i, j + 1), at(i + 1, j + 1), a);
    return std::lerp(lo, hi, b);
}

}  // namespace

void velocity_at(const VectorField& v, double x, double y, double& vx, double& vy) {
    const Grid& g = v.grid();
    const double h = g.h();
    x = std::clamp(x, 0.0, g.lx());
    y = std::clamp(y, 0.0, g.ly());
    vx = bilinear([&](int i, int j) { return v.ux(i, j); }, g.nx() + 1, g.ny(), 0.0, 0.5 * h, h, x, y);
    vy = bilinear([&](int i, int j) { return v.uy(i, j); }, g.nx(), g.ny() + 1, 0.5 * h, 0.0, h, x, y);
}

double interpolate_cell(const ScalarField& f, double x, double y) {
    const Grid& g = f.grid();
    const double h = g.h();
    return bilinear([&](int i, int j) { return f(i, j); }, g.nx(), g.ny(), 0.5 * h, 0.5 * h, h, x, y);
}

AdvectResult advect_density(const ScalarField& rho, const VectorField& v, double dt, const TransportOptions& opt) {
    if (!(dt > 0.0)) throw ConfigError(fmt::format("advection needs dt > 0 (got {})", dt));
    if (!v.finite()) throw ConfigError("advection velocity is not finite");
    const Grid& g = rho.grid();
    AdvectResult out{ScalarField(g, 0.0, rho.bc())};
    out.cfl = dt * v.max_abs() / g.h();
    if (out.cfl > opt.cfl_cap)
        throw ConfigError(fmt::format("CFL {:.3f} exceeds cap {} (dt must be <= {:.4e})", out.cfl, opt.cfl_cap,
                                      opt.cfl_cap * g.h() / v.max_abs()));
    out.divergence_warning = lp_norm(divergence(v), 2.0) > opt.solenoidal_warn;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double x = g.xc(i), y = g.yc(j);
            double vx, vy;
            velocity_at(v, x, y, vx, vy);
            double mx = x - 0.5 * dt * vx, my = y - 0.5 * dt * vy;
            velocity_at(v, mx, my, vx, vy);
            const double fx = std::clamp(x - dt * vx, 0.0, g.lx());
            const double fy = std::clamp(y - dt * vy, 0.0, g.ly());
            out.rho(i, j) = interpolate_cell(rho, fx, fy);
        }
    return out;
}

std::vector<double> lm_conservation_report(std::span<const ScalarField> series, double m) {
    if (series.size() < 2) throw ConfigError("conservation report needs at least two snapshots");
    const double base = lp_norm(series.front(), m);
    std::vector<double> drift;
    drift.reserve(series.size());
    for (const auto& r : series) drift.push_back(base > 0.0 ? std::abs(lp_norm(r, m) - base) / base : 0.0);
    return drift;
}

}  // namespace nlc
