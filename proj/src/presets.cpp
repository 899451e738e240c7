#include "nlc/presets.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "nlc/errors.hpp"
#include "nlc/norms.hpp"
#include "nlc/operators.hpp"

namespace nlc {

using std::numbers::pi;

namespace {

VectorField vortex(const Grid& g, double amp) {
    const double lx = g.lx(), ly = g.ly();
    return VectorField::from_stream_function(g, [=](double x, double y) {
        const double s = std::sin(pi * x / lx) * std::sin(pi * y / ly);
        return amp / pi * s * s;
    });
}

DirectorField cellular_director(const Grid& g, double amp) {
    const double lx = g.lx(), ly = g.ly();
    return DirectorField::from_angle(
        g, [=](double x, double y) { return amp * std::cos(pi * x / lx) * std::cos(pi * y / ly); });
}

FlowState quiescent(const Grid& g, double rho0) {
    return {0.0, ScalarField(g, rho0), VectorField(g), ScalarField(g), DirectorField(g, std::vector<double>{0.0, 1.0})};
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"equilibrium",   "viscous-decay", "angle-heat",
                                                "coupled-smooth", "vacuum-bubble", "geometric-configuration"};
    return names;
}

FlowState make_preset(const std::string& name, const Grid& g, const PresetParams& p) {
    if (!(p.rho0 > 0.0)) throw ConfigError(fmt::format("rho0 = {} must be > 0", p.rho0));
    const double lx = g.lx(), ly = g.ly();
    FlowState s = quiescent(g, p.rho0);
    if (name == "equilibrium") return s;
    if (name == "viscous-decay") {
        s.u = vortex(g, p.u_amp);
        return s;
    }
    if (name == "angle-heat") {
        s.d = DirectorField::from_angle(g, [&](double x, double) { return p.theta_amp * std::cos(pi * x / lx); });
        return s;
    }
    if (name == "coupled-smooth") {
        s.rho = ScalarField::sample(g, [&](double x, double y) {
            const double X = x / lx - 0.35, Y = y / ly - 0.4;
            return p.rho0 * (1.0 + p.rho_amp * std::exp(-(X * X + Y * Y) / 0.03));
        });
        s.u = vortex(g, p.u_amp);
        s.d = cellular_director(g, p.theta_amp);
        return s;
    }
    if (name == "vacuum-bubble") {
        s.rho = ScalarField::sample(g, [&](double x, double y) {
            const double X = x / lx - 0.5, Y = y / ly - 0.5;
            return X * X + Y * Y < p.bubble_radius * p.bubble_radius ? 0.0 : p.rho0;
        });
        s.u = vortex(g, p.u_amp);
        s.d = cellular_director(g, p.theta_amp);
        return s;
    }
    if (name == "geometric-configuration") {
        if (!(p.geo_lower >= 0.0 && p.geo_lower < 1.0))
            throw ConfigError(fmt::format("geo_lower = {} must lie in [0, 1)", p.geo_lower));
        if (p.branch != 1 && p.branch != 2) throw ConfigError(fmt::format("branch = {} must be 1 or 2", p.branch));
        const double a = std::acos(p.geo_lower);
        const double sign = p.branch == 1 ? 1.0 : -1.0;
        s.d = DirectorField::sample(g, 2, [&](double x, double y, double* o) {
            const double th = a * std::cos(pi * x / lx) * std::cos(pi * y / ly);
            o[0] = std::sin(th);
            o[1] = sign * std::cos(th);
        });
        return s;
    }
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError(fmt::format("preset = '{}' is unknown (expected one of: {})", name, known));
}

void check_initial_data(const FlowState& s, double unit_tol) {
    const double div = lp_norm(divergence(s.u), 2.0);
    if (div > 1e-12 * std::max(1.0, s.u.max_abs()))
        throw ConfigError(fmt::format("initial velocity is not discretely solenoidal (||div u0|| = {:.3e})", div));
    if (s.d.unit_deviation() > unit_tol)
        throw ConfigError(fmt::format("initial director violates |d0| = 1: deviation {:.3e} > unit_tol {:.1e}",
                                      s.d.unit_deviation(), unit_tol));
    if (s.rho.min() < 0.0) throw ConfigError(fmt::format("initial density is negative (min {})", s.rho.min()));
    if (!s.rho.finite() || !s.u.finite() || !s.d.finite()) throw ConfigError("initial data is not finite");
}

ScalarField plateau_bump(const Grid& g, double cx, double cy, double r0, double r1, double rho0, double amp) {
    if (!(r1 > r0) || !(r0 >= 0.0)) throw ConfigError("plateau bump needs 0 <= r0 < r1");
    auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
    return ScalarField::sample(g, [&](double x, double y) {
        const double a = (r1 - std::hypot(x - cx, y - cy)) / (r1 - r0);
        return rho0 * (1.0 + amp * f(a) / (f(a) + f(1.0 - a)));
    });
}

}  // namespace nlc
