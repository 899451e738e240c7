#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlc/director.hpp"
#include "nlc/errors.hpp"
#include "nlc/inequalities.hpp"
#include "nlc/norms.hpp"
#include "nlc/operators.hpp"

using namespace nlc;
using std::numbers::pi;

namespace {

/// Strip grid with n cells across [0, 1] for x-only data.
Grid strip(int n) { return Grid(n, 4, 1.0, 4.0 / n); }

double angle_error(int n, double dt, double t_end) {
    const Grid g = strip(n);
    DirectorField d = DirectorField::from_angle(g, [](double x, double) { return std::cos(pi * x); });
    const VectorField v(g);
    const DirectorStepper stepper(g, dt);
    const int steps = static_cast<int>(std::lround(t_end / dt));
    for (int s = 0; s < steps; ++s) d = renormalize(stepper.step(d, d, v)).first;
    const double amp = std::exp(-pi * pi * t_end);
    const auto exact = DirectorField::from_angle(g, [&](double x, double) { return amp * std::cos(pi * x); });
    return lp_norm(d - exact, 2.0) / std::sqrt(g.area());
}

}  // namespace

TEST_CASE("constant directors are fixed points for any velocity") {
    const Grid g(16, 16, 1.0);
    const DirectorField d(g, std::vector<double>{0.6, -0.8});
    const VectorField v = random_noslip_field(g, 3, 2);
    const DirectorField n = director_step(d, v, 1e-2);
    CHECK(lp_norm(n - d, kInf) == 0.0);
    const auto r = orthogonality_residuals(n, d, v, 1e-2);
    CHECK(r.r1 == 0.0);
    CHECK(r.r2 == 0.0);
}

TEST_CASE("renormalize") {
    const Grid g(8, 8, 1.0);
    const auto [a, da] = renormalize(DirectorField(g, std::vector<double>{0.0, 1.0}));
    CHECK(da == 0.0);
    const auto [b, db] = renormalize(DirectorField(g, std::vector<double>{2.0, 0.0}));
    CHECK(db == doctest::Approx(1.0));
    CHECK(b.component(0)(3, 3) == 1.0);
    CHECK_THROWS_AS(renormalize(DirectorField(g, std::vector<double>{0.3, 0.3})), SolverError);
}

TEST_CASE("rotation equivariance") {
    const Grid g(24, 24, 1.0);
    const auto d = DirectorField::from_angle(g, [](double x, double y) { return std::cos(pi * x) * std::cos(2 * pi * y); });
    const VectorField v = 0.3 * random_noslip_field(g, 2, 8);
    const double c = std::cos(0.7), s = std::sin(0.7);
    auto rot = [&](const DirectorField& f) {
        DirectorField r = f;
        for (std::size_t k = 0; k < g.cells(); ++k) {
            const double x = f.component(0).values()[k], y = f.component(1).values()[k];
            r.component(0).values()[k] = c * x - s * y;
            r.component(1).values()[k] = s * x + c * y;
        }
        return r;
    };
    const DirectorField a = rot(director_step(d, v, 1e-3));
    const DirectorField b = director_step(rot(d), v, 1e-3);
    CHECK(lp_norm(a - b, kInf) < 1e-10);
}

TEST_CASE("unit-field Laplacian identity residual converges at second order") {
    auto r2 = [](int n) {
        const Grid g(n, n, 1.0);
        const auto d = DirectorField::from_angle(g, [](double x, double y) { return 0.8 * std::cos(pi * x) * std::cos(pi * y); });
        return orthogonality_residuals(d, d, VectorField(g), 1.0).r2;
    };
    const double a = r2(32), b = r2(64), c = r2(128);
    CHECK(std::log2(a / b) >= 1.8);
    CHECK(std::log2(b / c) >= 1.8);

    const Grid g(64, 64, 1.0);
    const double alpha = 3.0;
    const auto d = DirectorField::from_angle(g, [&](double x, double) { return alpha * x; });
    const ScalarField gs = grad_sq(d);
    const DirectorField lap = laplacian(d);
    for (int i = 2; i < g.nx() - 2; ++i) {
        const double dl = d.component(0)(i, 5) * lap.component(0)(i, 5) + d.component(1)(i, 5) * lap.component(1)(i, 5);
        CHECK(dl == doctest::Approx(-alpha * alpha).epsilon(1e-3));
        CHECK(gs(i, 5) == doctest::Approx(alpha * alpha).epsilon(1e-3));
    }
}

TEST_CASE("angle-form heat solution") {
    SUBCASE("first order in dt") {
        const double e1 = angle_error(256, 0.01, 0.1), e2 = angle_error(256, 0.005, 0.1), e3 = angle_error(256, 0.0025, 0.1);
        // backward Euler: first order, approached from below
        CHECK(std::log2(e1 / e2) >= 0.85);
        CHECK(std::log2(e2 / e3) > std::log2(e1 / e2));
        CHECK(std::log2(e2 / e3) <= 1.0);
    }
    SUBCASE("second order in h") {
        const double e1 = angle_error(16, 1e-5, 0.1), e2 = angle_error(32, 1e-5, 0.1);
        CHECK(std::log2(e1 / e2) >= 1.8);
    }
    SUBCASE("drift after 100 steps") {
        const Grid g(32, 32, 1.0);
        DirectorField d = DirectorField::from_angle(g, [](double x, double) { return std::cos(pi * x); });
        double worst = 0.0;
        for (int s = 0; s < 100; ++s) {
            auto [n, dev] = renormalize(director_step(d, VectorField(g), 1e-3));
            worst = std::max(worst, dev);
            d = std::move(n);
        }
        CHECK(worst <= 1e-3);
    }
}

TEST_CASE("maximum principle monitor") {
    const Grid g(16, 16, 1.0);
    const DirectorField up(g, std::vector<double>{0.0, 1.0});
    MaxPrincipleMonitor m(up, 1, 0.9, MpBranch::upper);
    m.observe(0.1, up);
    CHECK(m.passed());
    CHECK_THROWS_AS(MaxPrincipleMonitor(up, 1, 0.9, MpBranch::lower), ConfigError);
    const DirectorField down(g, std::vector<double>{0.0, -1.0});
    MaxPrincipleMonitor ml(down, 1, 0.9, MpBranch::lower);
    CHECK(ml.passed());
    const DirectorField tilted(g, std::vector<double>{0.6, 0.8});
    m.observe(0.2, tilted);
    CHECK_FALSE(m.passed());
}

TEST_CASE("geometric threshold arithmetic") {
    CHECK(geometric_threshold(1.0, 1.0).threshold == 0.5);
    CHECK(geometric_threshold(1.0, 0.5).threshold == 0.0);
    CHECK(geometric_threshold(2.0, 1.0).dist_sq_bound == doctest::Approx(0.5));
    CHECK_THROWS_AS(geometric_threshold(0.0, 1.0), ConfigError);
    const Grid g(8, 8, 1.0);
    const DirectorField d(g, std::vector<double>{0.6, 0.8});
    CHECK(distance_to_pole(d, 1, MpBranch::upper) == doctest::Approx(std::sqrt(0.36 + 0.04)));
    CHECK(geometric_gate(d, 1, MpBranch::upper, 2.0, 1.0) == doctest::Approx(0.8));
}
