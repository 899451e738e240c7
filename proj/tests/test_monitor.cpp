#include <doctest.h>

#include <cmath>

#include "nlc/errors.hpp"
#include "nlc/monitor.hpp"
#include "nlc/presets.hpp"
#include "nlc/stokes.hpp"

using namespace nlc;

namespace {

SchemeOptions options(const FlowState& s) {
    SchemeOptions o;
    o.viscosity = ViscosityModel::affine(1.0, 0.5);
    o.delta_vac = 1e-6 * s.rho.max();
    return o;
}

}  // namespace

TEST_CASE("exponent gate") {
    BlowupMonitorConfig c;
    CHECK(check_exponents(c).passed());
    c.q = 2.0;
    const ExponentGate g = check_exponents(c);
    CHECK_FALSE(g.passed());
    REQUIRE(g.reasons.size() == 1);
    CHECK(g.reasons[0].find("q > n required") != std::string::npos);
    CHECK_THROWS_AS(BlowupMonitor{c}, ConfigError);
    BlowupMonitorConfig three;
    three.n = 3;
    three.q = 4.0;
    three.velocity = {4.0, 4.0, 3};
    CHECK_FALSE(check_exponents(three).passed());
    three.velocity = {2.0, kInf, 3};
    three.director = {kInf, 4.0, 3};
    CHECK(check_exponents(three).passed());
    BlowupMonitorConfig bad_n;
    bad_n.n = 4;
    CHECK_FALSE(check_exponents(bad_n).passed());
}

TEST_CASE("equilibrium monitors stay at zero") {
    const Grid g(16, 16, 1.0);
    FlowState s = make_preset("equilibrium", g, {});
    BlowupMonitor m({});
    for (int k = 0; k < 5; ++k) {
        s.t = 0.1 * k;
        m.update(s);
    }
    for (const auto& v : m.history()) {
        CHECK(v.M == 0.0);
        CHECK(v.M1 == 0.0);
    }
    CHECK_FALSE(m.threshold_crossed());
    CHECK_THROWS_AS(m.update(s), ConfigError);
}

TEST_CASE("streaming monitors match recomputation and never decrease") {
    const Grid g(24, 24, 1.0);
    FlowState s = make_preset("coupled-smooth", g, {});
    const Stepper st(g, 1e-3, options(s));
    BlowupMonitorConfig cfg;
    cfg.threshold = 1.5;
    BlowupMonitor m(cfg);
    m.update(s);
    for (int k = 0; k < 20; ++k) {
        s = st.step(s);
        m.update(s);
    }
    const auto again = recompute_monitors(m.samples(), cfg);
    REQUIRE(again.size() == m.history().size());
    for (std::size_t k = 0; k < again.size(); ++k) {
        const MonitorValues& a = m.history()[k];
        CHECK(std::abs(a.M - again[k].M) <= 1e-10 * std::max(1.0, a.M));
        CHECK(std::abs(a.M1 - again[k].M1) <= 1e-10 * std::max(1.0, a.M1));
        CHECK(a.reported(2) == a.M1);
        CHECK(a.M1 == a.grad_rho + a.grad_d);
        if (k > 0) {
            const MonitorValues& p = m.history()[k - 1];
            CHECK(a.grad_rho >= p.grad_rho);
            CHECK(a.u >= p.u);
            CHECK(a.grad_d >= p.grad_d);
        }
    }
    REQUIRE(m.threshold_crossed());
    CHECK(*m.threshold_crossed() > 0.0);
    CHECK(m.report_json().find("\"M_quantity\"") != std::string::npos);
}

TEST_CASE("infinite time exponent takes the running max") {
    BlowupMonitorConfig cfg;
    cfg.velocity = {kInf, 2.5, 2};
    cfg.director = {kInf, 2.5, 2};
    BlowupMonitor m(cfg);
    m.update(MonitorSample{0.0, 1.0, 3.0, 2.0});
    m.update(MonitorSample{1.0, 2.0, 1.0, 5.0});
    CHECK(m.current().u == 3.0);
    CHECK(m.current().grad_d == 5.0);
    CHECK(m.current().grad_rho == 2.0);
}

TEST_CASE("L4 budget") {
    const Grid g(24, 24, 1.0);
    const DirectorField c(g, std::vector<double>{0.0, 1.0});
    const std::vector<DirectorField> flat{c, c, c};
    const std::vector<double> t{0.0, 0.1, 0.2};
    CHECK(grad_d_L4_budget(flat, t, 1, MpBranch::upper, 1.0, 1.0).budget == 0.0);
    CHECK_THROWS_AS(grad_d_L4_budget(std::span(flat).first(1), std::span(t).first(1), 1, MpBranch::upper, 1, 1),
                    ConfigError);

    FlowState s = make_preset("geometric-configuration", g, {});
    const Stepper st(g, 1e-3, options(s));
    std::vector<DirectorField> series{s.d};
    std::vector<double> times{0.0};
    for (int k = 0; k < 20; ++k) {
        s = st.step(s);
        series.push_back(s.d);
        times.push_back(s.t);
    }
    const L4Budget b = grad_d_L4_budget(series, times, 1, MpBranch::upper, 1.0, 0.75);
    CHECK(std::isfinite(b.budget));
    CHECK(b.budget > 0.0);
    CHECK(b.dominated());
    for (const auto& sl : b.slices) CHECK(sl.grad2_d_sq <= b.fitted_constant * sl.bound_terms * (1 + 1e-12));
    const L4Budget half = grad_d_L4_budget(std::span(series).first(11), std::span(times).first(11), 1,
                                           MpBranch::upper, 1.0, 0.75);
    CHECK(half.budget < b.budget);
    CHECK(b.budget - half.budget < half.budget);
    CHECK(std::isinf(grad_d_L4_budget(series, times, 1, MpBranch::upper, 100.0, 100.0).explicit_constant));
}

TEST_CASE("regularity ratio") {
    const Grid g(32, 32, 1.0);
    const ScalarField rho(g, 1.0);
    CHECK_FALSE(regularity_ratio(VectorField(g), ScalarField(g), VectorField(g), rho, 4.0));
    std::vector<double> ratios;
    for (int n : {32, 64}) {
        const Grid gn(n, n, 1.0);
        const VectorField f = VectorField::sample(
            gn, [](double x, double y) { return std::sin(3 * x) * std::cos(2 * y); },
            [](double x, double y) { return x * y; }, VelocityBc::no_slip);
        const StokesSolution sol = solve_stokes(ScalarField(gn, 1.0), f, {1e-11, 400, 60});
        ratios.push_back(*regularity_ratio(sol.u, sol.p, f, ScalarField(gn, 1.0), 4.0));
    }
    CHECK(std::isfinite(ratios[0]));
    CHECK(std::abs(ratios[1] / ratios[0] - 1.0) < 0.3);
    CHECK_THROWS_AS(regularity_ratio(VectorField(g), ScalarField(g), VectorField(g), rho, 2.0), ConfigError);
}
