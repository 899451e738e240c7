#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nlc/errors.hpp"
#include "nlc/norms.hpp"
#include "nlc/presets.hpp"
#include "nlc/transport.hpp"

using namespace nlc;

namespace {

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

ScalarField gaussian(const Grid& g, double cx) {
    return ScalarField::sample(g, [cx](double x, double y) {
        return std::exp(-((x - cx) * (x - cx) + (y - 0.5) * (y - 0.5)) / 0.01);
    });
}

VectorField uniform_x(const Grid& g) {
    return VectorField::sample(g, [](double, double) { return 1.0; }, [](double, double) { return 0.0; });
}

}  // namespace

TEST_CASE("constants and zero velocity are preserved exactly") {
    const Grid g(32, 32, 1.0);
    const FlowState s = make_preset("coupled-smooth", g, {});
    const AdvectResult c = advect_density(ScalarField(g, 1.0), s.u, 1e-3);
    for (double v : c.rho.values()) CHECK(v == 1.0);
    const AdvectResult z = advect_density(s.rho, VectorField(g), 1e-3);
    CHECK(z.rho.values() == s.rho.values());
    CHECK_FALSE(c.divergence_warning);
}

TEST_CASE("translation of a Gaussian bump converges at second order") {
    std::vector<double> err;
    for (int n : {32, 64, 128}) {
        const Grid g(n, n, 1.0);
        const ScalarField moved = advect_density(gaussian(g, 0.4), uniform_x(g), 0.01).rho;
        err.push_back(lp_norm(moved - gaussian(g, 0.41), 2.0));
    }
    CHECK(err[0] / err[1] > 3.0);
    CHECK(err[1] / err[2] > 3.0);
}

TEST_CASE("bounds and vacuum are preserved") {
    const Grid g(48, 48, 1.0);
    FlowState s = make_preset("vacuum-bubble", g, {});
    const double lo = s.rho.min(), hi = s.rho.max();
    ScalarField r = s.rho;
    for (int k = 0; k < 50; ++k) {
        r = advect_density(r, s.u, 2e-3).rho;
        CHECK(r.min() >= lo - 1e-12);
        CHECK(r.max() <= hi + 1e-12);
    }
    CHECK(r.min() >= 0.0);
    const ScalarField peak = gaussian(g, 0.35);
    const ScalarField after = advect_density(peak, s.u, 2e-3).rho;
    CHECK(after.max() <= peak.max() + 1e-12);
}

TEST_CASE("CFL cap and divergence warning") {
    const Grid g(32, 32, 1.0);
    const VectorField v = uniform_x(g);
    CHECK_THROWS_AS(advect_density(ScalarField(g, 1.0), v, 6.0 * g.h()), ConfigError);
    CHECK_NOTHROW(advect_density(ScalarField(g, 1.0), v, 4.0 * g.h()));
    VectorField bad(g);
    bad.ux(10, 10) = 1.0;
    CHECK(advect_density(ScalarField(g, 1.0), bad, 1e-3).divergence_warning);
}

TEST_CASE("Lm drift of a plateau bump") {
    std::vector<double> d1, d2;
    for (int n : {32, 64}) {
        const Grid g(n, n, 1.0);
        const FlowState s = make_preset("coupled-smooth", g, {});
        std::vector<ScalarField> series{plateau_bump(g, 0.35, 0.4, 0.1, 0.25, 1.0, 0.5)};
        for (int k = 0; k < 100; ++k) series.push_back(advect_density(series.back(), s.u, 1e-3).rho);
        d1.push_back(max_of(lm_conservation_report(series, 1.0)));
        d2.push_back(max_of(lm_conservation_report(series, 2.0)));
        if (n == 64) CHECK(max_of(lm_conservation_report(series, kInf)) <= 1e-8);
    }
    CHECK(d1[1] < 0.02);
    CHECK(d2[1] < 0.02);
    CHECK(d1[0] / d1[1] > 1.8);
    CHECK(d2[0] / d2[1] > 1.8);
    const Grid g(16, 16, 1.0);
    const std::vector<ScalarField> flat(3, ScalarField(g, 2.0));
    for (double m : {1.0, 2.0, kInf}) CHECK(max_of(lm_conservation_report(flat, m)) == 0.0);
}
