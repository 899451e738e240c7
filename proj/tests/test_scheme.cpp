#include <doctest.h>

#include <cmath>

#include "nlc/norms.hpp"
#include "nlc/operators.hpp"
#include "nlc/presets.hpp"
#include "nlc/scheme.hpp"

using namespace nlc;

namespace {

SchemeOptions options(const FlowState& s, ViscosityModel mu = ViscosityModel::constant(1.0)) {
    SchemeOptions o;
    o.viscosity = mu;
    o.delta_vac = 1e-6 * s.rho.max();
    o.stokes.tol = 1e-12;
    return o;
}

double max_rel_balance(const std::vector<DiagnosticsRecord>& recs) {
    double worst = 0.0;
    for (const auto& r : recs)
        worst = std::max(worst, std::abs(r.balance_residual) / (r.visc_dissipation + r.director_dissipation));
    return worst;
}

std::vector<DiagnosticsRecord> run(const std::string& preset, int n, int steps, double dt, ViscosityModel mu) {
    const Grid g(n, n, 1.0);
    FlowState s = make_preset(preset, g, {});
    const Stepper st(g, dt, options(s, mu));
    std::vector<DiagnosticsRecord> recs;
    for (int k = 0; k < steps; ++k) {
        DiagnosticsRecord r;
        s = st.step(s, &r);
        recs.push_back(r);
    }
    return recs;
}

}  // namespace

TEST_CASE("equilibrium is a fixed point") {
    const Grid g(24, 24, 1.0);
    FlowState s = make_preset("equilibrium", g, {});
    const SchemeOptions opt = options(s);
    const FlowState s0 = s;
    DiagnosticsRecord r;
    for (int k = 0; k < 10; ++k) s = time_step(s, 1e-3, opt, &r);
    CHECK(s.u.max_abs() <= 1e-12);
    CHECK(s.rho.values() == s0.rho.values());
    CHECK(lp_norm(s.d - s0.d, kInf) == 0.0);
    CHECK(r.energy == 0.0);
    CHECK(r.visc_dissipation == 0.0);
    CHECK(r.director_dissipation == 0.0);
    CHECK(std::abs(r.balance_residual) <= 1e-12);
    CHECK(s.t == doctest::Approx(0.01));
}

TEST_CASE("viscous decay: energy strictly decreasing with balanced dissipation") {
    const auto coarse = run("viscous-decay", 32, 200, 1e-3, ViscosityModel::constant(1.0));
    for (std::size_t k = 1; k < coarse.size(); ++k) CHECK(coarse[k].energy < coarse[k - 1].energy);
    const auto fine = run("viscous-decay", 64, 20, 1e-3, ViscosityModel::constant(1.0));
    const auto refined = run("viscous-decay", 64, 20, 5e-4, ViscosityModel::constant(1.0));
    CHECK(max_rel_balance(fine) < 0.1);
    CHECK(max_rel_balance(refined) < 0.6 * max_rel_balance(fine));
    for (const auto& r : fine) CHECK(r.director_dissipation < 1e-20);
}

TEST_CASE("coupled preset: incompressible every step, energy non-increasing") {
    const auto recs = run("coupled-smooth", 32, 40, 1e-3, ViscosityModel::affine(1.0, 0.5));
    double prev = kInf;
    for (const auto& r : recs) {
        CHECK(r.div_u_L2 <= 1e-10);
        CHECK(r.energy <= prev + 1e-10);
        CHECK(r.unit_drift <= 1e-3);
        CHECK(r.stokes_iters > 0);
        prev = r.energy;
    }
}

TEST_CASE("vacuum bubble runs with nonnegative density") {
    const Grid g(32, 32, 1.0);
    FlowState s = make_preset("vacuum-bubble", g, {});
    CHECK(s.rho.min() == 0.0);
    const Stepper st(g, 1e-3, options(s));
    for (int k = 0; k < 20; ++k) {
        DiagnosticsRecord r;
        s = st.step(s, &r);
        CHECK(s.rho.min() >= 0.0);
        CHECK(r.div_u_L2 <= 1e-10);
    }
}

TEST_CASE("Picard iteration") {
    const Grid g(24, 24, 1.0);
    const FlowState eq = make_preset("equilibrium", g, {});
    PicardMetrics m;
    DiagnosticsRecord r;
    const Stepper st(g, 1e-3, options(eq));
    picard_step(st, eq, {1e-24, 30, true}, m, &r);
    CHECK(m.converged);
    CHECK(m.phi.size() == 1);
    CHECK(r.picard_iters == 1);

    const FlowState cs = make_preset("coupled-smooth", g, {});
    const Stepper sc(g, 1e-3, options(cs, ViscosityModel::affine(1.0, 0.5)));
    const FlowState linear = sc.step(cs);
    const FlowState fixed = picard_step(sc, cs, {1e-24, 30, true}, m);
    CHECK(m.converged);
    CHECK(m.max_ratio() < 1.0);
    CHECK(m.log_fit_r2(6) >= 0.95);
    for (std::size_t k = 0; k < m.phi.size(); ++k) {
        CHECK(m.phi[k] >= 0.0);
        CHECK(m.psi[k] >= 0.0);
    }
    CHECK(lp_norm(fixed.u - linear.u, 2.0) > 0.0);
    CHECK_THROWS_AS(picard_step(sc, cs, {1e-40, 2, true}, m), PicardError);
    CHECK_NOTHROW(picard_step(sc, cs, {1e-40, 2, false}, m));
    CHECK(m.phi.size() == 2);
}

TEST_CASE("stepping is deterministic") {
    const auto a = run("coupled-smooth", 16, 5, 1e-3, ViscosityModel::exponential(1.0, 0.3));
    const auto b = run("coupled-smooth", 16, 5, 1e-3, ViscosityModel::exponential(1.0, 0.3));
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].energy == b[k].energy);
        CHECK(a[k].grad3_d_L2 == b[k].grad3_d_L2);
        CHECK(a[k].stokes_iters == b[k].stokes_iters);
    }
}
