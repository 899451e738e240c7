#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlc/errors.hpp"
#include "nlc/inequalities.hpp"
#include "nlc/mac_system.hpp"
#include "nlc/norms.hpp"
#include "nlc/operators.hpp"
#include "nlc/stokes.hpp"

using namespace nlc;
using std::numbers::pi;

namespace {

VectorField manufactured_velocity(const Grid& g) {
    return VectorField::from_stream_function(g, [](double x, double y) {
        const double s = x * (1 - x) * y * (1 - y);
        return s * s;
    });
}

ScalarField manufactured_pressure(const Grid& g) {
    auto p = ScalarField::sample(g, [](double x, double y) { return std::cos(pi * x) * std::cos(pi * y); });
    const double m = p.mean();
    for (double& v : p.values()) v -= m;
    return p;
}

double face_error(const VectorField& a, const VectorField& b) { return face_l2_norm(a - b); }

void check_recovery(const ScalarField& mu) {
    const Grid& g = mu.grid();
    const VectorField us = manufactured_velocity(g);
    const ScalarField ps = manufactured_pressure(g);
    const VectorField f = viscous_apply(mu, us) + pressure_gradient(ps);
    SolverOptions opt;
    opt.tol = 1e-11;
    const StokesSolution s = solve_stokes(mu, f, opt);
    MESSAGE("iterations " << s.stats.iterations << " u error " << face_error(s.u, us));
    CHECK(face_error(s.u, us) <= 1e-8);
    CHECK(lp_norm(divergence(s.u), 2.0) <= opt.tol);
    CHECK(std::abs(s.p.mean() * g.area()) <= 1e-12 * g.area());
    CHECK(lp_norm(s.p - ps, 2.0) < 1e-7);
}

}  // namespace

TEST_CASE("viscosity models") {
    CHECK(ViscosityModel::affine(1.0, 2.0)(0.5) == doctest::Approx(2.0));
    CHECK(ViscosityModel::exponential(2.0, 1.0)(0.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(ViscosityModel::constant(0.0).validate(1.0), ConfigError);
    CHECK_THROWS_AS(ViscosityModel::affine(1.0, -2.0).validate(1.0), ConfigError);
    CHECK_NOTHROW(ViscosityModel::affine(1.0, -0.5).validate(1.0));
}

TEST_CASE("viscous operator is symmetric and matches the deformation quadratic form") {
    const Grid g(64, 64, 1.0);
    const auto rho = ScalarField::sample(g, [](double x, double y) { return std::exp(-10 * ((x - .4) * (x - .4) + (y - .6) * (y - .6))); });
    const ScalarField mu = ViscosityModel::affine(1.0, 1.0).evaluate(rho);
    const MacOperators ops(g);
    const SpMat a = ops.viscous(mu);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        Vec x(a.rows()), y(a.rows());
        for (auto& v : x) v = n(rng);
        for (auto& v : y) v = n(rng);
        worst = std::max(worst, std::abs(x.dot(a * y) - y.dot(a * x)) / std::abs(x.dot(a * y)));
        CHECK(x.dot(a * x) >= 0.0);
    }
    CHECK(worst < 1e-12);

    // quadratic form against 2 int mu |D(u)|^2 by cell-centered quadrature
    const VectorField u = random_noslip_field(g, 3, 11);
    const TensorField dd = deformation_tensor(u);
    double q = 0.0;
    for (std::size_t c = 0; c < g.cells(); ++c) {
        const double f = dd.xx.values()[c] * dd.xx.values()[c] + dd.yy.values()[c] * dd.yy.values()[c] +
                         2.0 * dd.xy.values()[c] * dd.xy.values()[c];
        q += 2.0 * mu.values()[c] * f * g.cell_area();
    }
    const double form = viscous_dissipation(ops, mu, u);
    MESSAGE("form " << form << " quadrature " << q);
    CHECK(std::abs(form - q) <= 0.05 * q);
}

TEST_CASE("zero force gives the zero solution") {
    const Grid g(16, 16, 1.0);
    const StokesSolution s = solve_stokes(ScalarField(g, 1.0), VectorField(g));
    CHECK(s.u.max_abs() == 0.0);
    CHECK(lp_norm(s.p, kInf) == 0.0);
}

TEST_CASE("manufactured Stokes solutions are recovered") {
    const Grid g(32, 32, 1.0);
    SUBCASE("constant viscosity") { check_recovery(ScalarField(g, 1.0)); }
    SUBCASE("affine viscosity") {
        const auto rho = ScalarField::sample(g, [](double x, double y) { return std::exp(-20 * ((x - .5) * (x - .5) + (y - .3) * (y - .3))); });
        check_recovery(ViscosityModel::affine(1.0, 1.0).evaluate(rho));
    }
    CHECK_THROWS_AS(solve_stokes(ScalarField(g, -1.0), VectorField(g)), ConfigError);
}

TEST_CASE("momentum step") {
    const Grid g(32, 32, 1.0);
    const auto mu = ViscosityModel::constant(1.0);
    const ScalarField rho(g, 1.0);
    const DirectorField dc(g, std::vector<double>{0.0, 1.0});
    SUBCASE("equilibrium") {
        const StokesSolution s = momentum_step(rho, VectorField(g), VectorField(g), dc, mu, 1e-3);
        CHECK(s.u.max_abs() == 0.0);
    }
    SUBCASE("viscous decay lowers kinetic energy") {
        VectorField u = 0.1 * random_noslip_field(g, 2, 4);
        const MacOperators ops(g);
        auto ke = [&](const VectorField& w) {
            const Vec x = ops.index().pack(w);
            return 0.5 * g.cell_area() * x.dot(ops.mass(rho) * x);
        };
        const StokesSolution s = momentum_step(rho, u, u, dc, mu, 1e-3);
        CHECK(ke(s.u) < ke(u));
        CHECK(lp_norm(divergence(s.u), 2.0) <= 1e-10);
    }
    SUBCASE("elastic forcing drives flow") {
        const auto d = DirectorField::sample(g, 2, [](double x, double y, double* o) {
            const double a = 2.0 * std::sin(pi * x) * std::sin(pi * y);
            o[0] = std::cos(a);
            o[1] = std::sin(a);
        });
        const StokesSolution s = momentum_step(rho, VectorField(g), VectorField(g), d, mu, 1e-3);
        CHECK(s.u.max_abs() > 1e-6);
        CHECK(lp_norm(divergence(s.u), 2.0) <= 1e-10);
    }
}

TEST_CASE("compatibility initializer") {
    const Grid g(32, 32, 1.0);
    const auto mu = ViscosityModel::constant(1.0);
    const DirectorField dc(g, std::vector<double>{1.0, 0.0});
    SUBCASE("quiescent data") {
        const auto rep = compatibility_init(ScalarField(g, 2.0), VectorField(g), dc, mu, 0.0);
        CHECK(rep.gnorm == 0.0);
    }
    SUBCASE("projection identity") {
        const VectorField u0 = random_noslip_field(g, 2, 9);
        const auto rep = compatibility_init(ScalarField(g, 1.0), u0, dc, mu, 0.0);
        const double r = face_l2_norm(rep.residual), gp = face_l2_norm(pressure_gradient(rep.p0));
        CHECK(rep.gnorm == doctest::Approx(std::sqrt(r * r - gp * gp)).epsilon(1e-9));
        CHECK(lp_norm(divergence(rep.g), 2.0) < 1e-9 * rep.gnorm);
    }
    SUBCASE("grid stability") {
        auto gn = [&](int n) {
            const Grid gg(n, n, 1.0);
            const DirectorField d = DirectorField::from_angle(gg, [](double x, double y) { return 0.5 * std::cos(pi * x) * std::cos(pi * y); });
            const VectorField u0 = VectorField::from_stream_function(gg, [](double x, double y) {
                const double s = std::sin(pi * x) * std::sin(pi * y);
                return 0.1 * s * s;
            });
            return compatibility_init(ScalarField(gg, 1.0), u0, d, mu, 0.0).gnorm;
        };
        const double a = gn(32), b = gn(64);
        MESSAGE("gnorm 32: " << a << " 64: " << b);
        CHECK(std::abs(a - b) <= 0.1 * b);
    }
}
