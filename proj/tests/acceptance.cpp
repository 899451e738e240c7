#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <fstream>
#include <functional>
#include <set>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "nlc/config.hpp"
#include "nlc/director.hpp"
#include "nlc/inequalities.hpp"
#include "nlc/io.hpp"
#include "nlc/norms.hpp"
#include "nlc/operators.hpp"
#include "nlc/presets.hpp"
#include "nlc/simulation.hpp"
#include "nlc/stokes.hpp"
#include "nlc/transport.hpp"

using namespace nlc;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::set<int> failed;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0.0 && secs > budget_s) {
        o.pass = false;
        o.detail += fmt::format("; over the {:.0f} s budget", budget_s);
    }
    if (!o.pass) failed.insert(id);
    fmt::print("[{}] {:>2} {}: {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail, secs);
    std::fflush(stdout);
}

fs::path work(const std::string& name) {
    const fs::path p = fs::path(NLC_ACCEPT_WORK) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int cli(const std::string& args) {
    const std::string cmd = fmt::format("\"{}\" {} > /dev/null 2>&1", NLC_CLI, args);
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double angle_error(int n, double dt, double t_end) {
    const Grid g(n, 4, 1.0, 4.0 / n);
    DirectorField d = DirectorField::from_angle(g, [](double x, double) { return std::cos(pi * x); });
    const VectorField v(g);
    const DirectorStepper stepper(g, dt);
    const long steps = std::lround(t_end / dt);
    for (long s = 0; s < steps; ++s) d = renormalize(stepper.step(d, d, v)).first;
    const double amp = std::exp(-pi * pi * t_end);
    const auto exact = DirectorField::from_angle(g, [&](double x, double) { return amp * std::cos(pi * x); });
    return lp_norm(d - exact, 2.0) / std::sqrt(g.area());
}

SchemeOptions coupled_options(const FlowState& s) {
    SchemeOptions o;
    o.viscosity = ViscosityModel::affine(1.0, 0.5);
    o.delta_vac = 1e-6 * s.rho.max();
    o.stokes.tol = 1e-12;
    return o;
}

// Shared between the energy and unit-sphere criteria.
double coupled_max_drift = -1.0;

Outcome korn() {
    const int fields = 20;
    std::vector<double> gaps32, gaps64, gaps128;
    for (int k = 1; k <= fields; ++k) {
        gaps32.push_back(korn_identity_check(random_noslip_field(Grid(32, 32, 1.0), 3, k)).relative_gap());
        gaps64.push_back(korn_identity_check(random_noslip_field(Grid(64, 64, 1.0), 3, k)).relative_gap());
        gaps128.push_back(korn_identity_check(random_noslip_field(Grid(128, 128, 1.0), 3, k)).relative_gap());
    }
    double rmin = kInf, rmax = 0.0;
    for (int k = 0; k < fields; ++k)
        for (double r : {gaps32[k] / gaps64[k], gaps64[k] / gaps128[k]}) {
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
    const double worst = max_of(gaps64);
    return {worst <= 0.05 && rmin >= 3.2 && rmax <= 4.8,
            fmt::format("max gap at 64^2 {:.4f} <= 0.05; halving ratios in [{:.3f}, {:.3f}] within [3.2, 4.8]", worst,
                        rmin, rmax)};
}

Outcome energy_law() {
    const Grid g(64, 64, 1.0);
    const double dt = 1e-3, slack_c = 0.1;
    FlowState s = make_preset("coupled-smooth", g, {});
    const SchemeOptions opt = coupled_options(s);
    const Stepper st(g, dt, opt);
    const double e0 = energy(s, opt.delta_vac);
    const double slack = 1e-10 + slack_c * (dt + g.h() * g.h()) * e0;
    double prev = e0, worst_rise = -kInf, worst_bal = 0.0;
    coupled_max_drift = 0.0;
    for (int k = 0; k < 200; ++k) {
        DiagnosticsRecord r;
        s = st.step(s, &r);
        worst_rise = std::max(worst_rise, r.energy - prev);
        worst_bal = std::max(worst_bal, std::abs(r.balance_residual) / (r.visc_dissipation + r.director_dissipation));
        coupled_max_drift = std::max(coupled_max_drift, r.unit_drift);
        prev = r.energy;
    }
    return {worst_rise <= slack && worst_bal <= 0.1,
            fmt::format("max E rise {:.3e} <= slack {:.3e} (C = {}); max |balance| / dissipation {:.4f} <= 0.10; "
                        "E {:.4f} -> {:.4f}",
                        worst_rise, slack, slack_c, worst_bal, e0, prev)};
}

Outcome lm_conservation() {
    std::vector<double> d1, d2, dinf;
    for (int n : {64, 128, 256}) {
        const Grid g(n, n, 1.0);
        const FlowState s = make_preset("coupled-smooth", g, {});
        std::vector<ScalarField> series{plateau_bump(g, 0.35, 0.4, 0.1, 0.25, 1.0, 0.5)};
        for (int k = 0; k < 100; ++k) series.push_back(advect_density(series.back(), s.u, 1e-3).rho);
        d1.push_back(max_of(lm_conservation_report(series, 1.0)));
        d2.push_back(max_of(lm_conservation_report(series, 2.0)));
        dinf.push_back(max_of(lm_conservation_report(series, kInf)));
    }
    const Grid g(128, 128, 1.0);
    const FlowState s = make_preset("coupled-smooth", g, {});
    ScalarField r = s.rho;
    const double top = r.max();
    double overshoot = 0.0;
    for (int k = 0; k < 100; ++k) {
        r = advect_density(r, s.u, 1e-3).rho;
        overshoot = std::max(overshoot, r.max() - top);
    }
    const double h1 = std::min(d1[0] / d1[1], d1[1] / d1[2]), h2 = std::min(d2[0] / d2[1], d2[1] / d2[2]);
    const bool ok = dinf[1] <= 1e-12 && d1[1] <= 0.02 && d2[1] <= 0.02 && h1 >= 1.8 && h2 >= 1.8 && overshoot <= 1e-12;
    return {ok, fmt::format("128^2: drift_inf {:.2e} <= 1e-12, drift_1 {:.3e}, drift_2 {:.3e} <= 0.02; refinement "
                            "factors L1 {:.2f}, L2 {:.2f} >= 1.8; peaked bump max overshoot {:.1e} <= 1e-12",
                            dinf[1], d1[1], d2[1], h1, h2, overshoot)};
}

Outcome unit_sphere() {
    const Grid g(64, 64, 1.0);
    FlowState s = make_preset("angle-heat", g, {});
    const DirectorStepper ds(g, 1e-3);
    double drift = 0.0;
    for (int k = 0; k < 100; ++k) {
        auto [d, dev] = renormalize(ds.step(s.d, s.d, s.u));
        drift = std::max(drift, dev);
        s.d = std::move(d);
    }
    std::vector<double> r1, r2;
    for (int n : {32, 64, 128}) {
        const Grid gn(n, n, 1.0);
        const FlowState a = make_preset("angle-heat", gn, {});
        const double dt = 0.25 * gn.h() * gn.h();
        const DirectorField d1 = renormalize(DirectorStepper(gn, dt).step(a.d, a.d, a.u)).first;
        const OrthogonalityResiduals r = orthogonality_residuals(d1, a.d, a.u, dt);
        r1.push_back(r.r1);
        r2.push_back(r.r2);
    }
    const double o1 = std::min(std::log2(r1[0] / r1[1]), std::log2(r1[1] / r1[2]));
    const double o2 = std::min(std::log2(r2[0] / r2[1]), std::log2(r2[1] / r2[2]));
    const double coupled = coupled_max_drift;
    const bool ok = drift <= 1e-3 && coupled >= 0.0 && coupled <= 1e-3 && o1 >= 1.8 && o2 >= 1.8;
    return {ok, fmt::format("drift angle-heat {:.2e}, coupled {:.2e} <= 1e-3; order in h: r1 {:.3f}, r2 {:.3f} >= 1.8 "
                            "(dt = h^2/4)",
                            drift, coupled, o1, o2)};
}

Outcome exact_director() {
    const double e1 = angle_error(1024, 0.005, 0.1), e2 = angle_error(1024, 0.0025, 0.1),
                 e3 = angle_error(1024, 0.00125, 0.1);
    const double dt_order = std::min(std::log2(e1 / e2), std::log2(e2 / e3));
    const double h1 = angle_error(16, 1e-5, 0.1), h2 = angle_error(32, 1e-5, 0.1), h3 = angle_error(64, 1e-5, 0.1);
    const double h_order = std::min(std::log2(h1 / h2), std::log2(h2 / h3));
    return {dt_order >= 1.0 && h_order >= 1.8,
            fmt::format("dt order {:.4f} >= 1 (pairs {:.4f}, {:.4f} at h = 1/1024, dt 5e-3 .. 1.25e-3); h order {:.3f} "
                        ">= 1.8 (dt = 1e-5)",
                        dt_order, std::log2(e1 / e2), std::log2(e2 / e3), h_order)};
}

Outcome stokes_manufactured() {
    const Grid g(32, 32, 1.0);
    const VectorField us = VectorField::from_stream_function(g, [](double x, double y) {
        const double s = x * (1 - x) * y * (1 - y);
        return s * s;
    });
    ScalarField ps = ScalarField::sample(g, [](double x, double y) { return std::cos(pi * x) * std::cos(pi * y); });
    const double m = ps.mean();
    for (double& v : ps.values()) v -= m;
    const auto rho = ScalarField::sample(g, [](double x, double y) {
        return std::exp(-20 * ((x - .5) * (x - .5) + (y - .3) * (y - .3)));
    });
    SolverOptions opt;
    opt.tol = 1e-11;
    bool ok = true;
    std::string detail;
    for (const auto& [name, mu] : {std::pair{"constant", ScalarField(g, 1.0)},
                                   std::pair{"affine", ViscosityModel::affine(1.0, 1.0).evaluate(rho)}}) {
        const VectorField f = viscous_apply(mu, us) + pressure_gradient(ps);
        const StokesSolution s = solve_stokes(mu, f, opt);
        const double err = face_l2_norm(s.u - us), div = lp_norm(divergence(s.u), 2.0),
                     pmean = std::abs(s.p.mean());
        ok = ok && err <= 1e-8 && div <= opt.tol && pmean <= 1e-12;
        detail += fmt::format("{}{}: |u - u*| {:.1e} <= 1e-8, |div u| {:.1e} <= {:.0e}, |mean p| {:.1e} <= 1e-12",
                              detail.empty() ? "" : "; ", name, err, div, opt.tol, pmean);
    }
    return {ok, detail};
}

Outcome picard() {
    SimConfig c = parse_config_text("preset = coupled-smooth\nnx = 64\nny = 64\nviscosity = affine\nmu1 = 0.5\n");
    const auto rows = picard_study(c, work("picard"));
    bool ok = true;
    std::string table;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        if (r.dt <= 1e-3 && r.max_ratio >= 1.0) ok = false;
        if (r.r2_fit6 < 0.95 || !r.converged) ok = false;
        if (k > 0 && !(r.max_ratio < rows[k - 1].max_ratio)) ok = false;
        table += fmt::format("{}dt {:g}: max ratio {:.3e}, R2 {:.4f}, 1/4 {}", k ? "; " : "", r.dt, r.max_ratio,
                             r.r2_fit6, r.quarter_met ? "met" : "not met");
    }
    return {ok, table + " (ratio < 1 for dt <= 1e-3, R2 >= 0.95, strictly decreasing)"};
}

Outcome max_principle() {
    bool ok = true;
    std::string detail;
    for (int branch : {1, 2}) {
        const SimConfig c = parse_config_text(fmt::format(
            "preset = geometric-configuration\nbranch = {}\nt_final = 0.1\nsnap_every = 0\nviscosity = affine\n"
            "mu1 = 0.5\n",
            branch));
        const RunResult r = run_simulation(c, work(fmt::format("mp{}", branch)));
        ok = ok && r.max_principle_checked && r.max_principle_passed;
        detail += fmt::format("{}branch {}: worst excess {:.2e} <= 1e-6", branch == 1 ? "" : "; ", branch,
                              r.max_principle_excess);
    }
    return {ok, detail + " over 100 steps"};
}

Outcome thresholds() {
    SimConfig c = parse_config_text("nx = 64\nny = 64\nt_final = 0.05\n");
    const ConstantsResult r = estimate_constants(c, work("constants"));
    const bool exact = geometric_threshold(1.0, 1.0).threshold == 0.5;
    const bool ok = r.c1_spread <= 0.25 && r.c2_spread <= 0.25 && exact && r.gate_passed &&
                    std::isfinite(r.budget.budget) && r.budget.dominated();
    return {ok, fmt::format("C1 {:.4f} (spread {:.1e}), C2 {:.4f} (spread {:.1e}) <= 0.25; threshold(1,1) = 0.5 {}; "
                            "threshold {:.4f}; preset gate {:.4f} < 1; budget {:.3e} <= GN bound {:.3e}, fitted C "
                            "{:.3f} <= explicit {:.3f}",
                            r.c1, r.c1_spread, r.c2, r.c2_spread, exact ? "exact" : "WRONG", r.threshold,
                            r.preset_gate, r.budget.budget, r.budget.gn_bound, r.budget.fitted_constant,
                            r.budget.explicit_constant)};
}

Outcome norms() {
    const Grid g(32, 32, 1.0);
    double worst = 0.0;
    for (double p : {1.5, 2.0, 4.0, 8.0}) {
        worst = std::max(worst, std::abs(weak_lp_norm(ScalarField(g, 3.0), p) - 3.0));
        ScalarField spike(g);
        spike(7, 20) = 5.0;
        worst = std::max(worst, std::abs(weak_lp_norm(spike, p) - 5.0 * std::pow(g.cell_area(), 1.0 / p)));
    }
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> n01;
    int cheb_bad = 0;
    for (int t = 0; t < 100; ++t) {
        ScalarField f(g);
        for (double& v : f.values()) v = n01(rng);
        for (double p : {1.5, 2.0, 4.0})
            if (weak_lp_norm(f, p) > lp_norm(f, p) * (1 + 1e-14)) ++cheb_bad;
    }
    const SerrinVerdict a = serrin_check({4, 4, 2}), b = serrin_check({2, kInf, 3}), c = serrin_check({4, 4, 3});
    const bool serrin = a.admissible && a.slack == 0.0 && b.admissible && b.slack == 0.0 && !c.admissible &&
                        std::abs(c.slack + 0.25) < 1e-15;
    NormSeries lin{"t", {}, {}};
    for (int k = 0; k <= 1000; ++k) lin.push(k / 1000.0, k / 1000.0);
    const double boch = std::abs(bochner_norm(lin, 2.0) - 1.0 / std::sqrt(3.0));
    return {worst <= 1e-12 && cheb_bad == 0 && serrin && boch <= 1e-4,
            fmt::format("closed forms {:.1e} <= 1e-12; Chebyshev violations {} / 300; Serrin (4,4,2) (2,inf,3) "
                        "(4,4,3) {}; Bochner int t^2 error {:.1e} <= 1e-4",
                        worst, cheb_bad, serrin ? "match" : "MISMATCH", boch)};
}

Outcome monitor_integrity() {
    const fs::path dir = work("monitor");
    const fs::path cfg = dir / "run.cfg";
    std::ofstream(cfg) << "preset = coupled-smooth\nviscosity = affine\nmu1 = 0.5\nt_final = 0.05\n";
    const int rc_sim = cli(fmt::format("simulate --config \"{}\" --out \"{}\" --quiet", cfg.string(), (dir / "out").string()));
    const VerifyReport rep = verify_snapshots(dir / "out");
    const int rc = cli(fmt::format("verify-snapshot --out \"{}\" --quiet", (dir / "out").string()));
    const auto rows = read_diagnostics(dir / "out" / "diagnostics.csv");
    int decreasing = 0;
    for (std::size_t k = 1; k < rows.size(); ++k)
        if (rows[k].serrin_u_partial < rows[k - 1].serrin_u_partial ||
            rows[k].serrin_gradd_partial < rows[k - 1].serrin_gradd_partial ||
            rows[k].M_quantity < rows[k - 1].M_quantity)
            ++decreasing;
    return {rc_sim == 0 && rep.max_diff <= 1e-10 && decreasing == 0 && rc == 0,
            fmt::format("{} rows, max diff {:.1e} <= 1e-10; decreasing monitor steps {}; verify-snapshot exit {}",
                        rep.rows, rep.max_diff, decreasing, rc)};
}

Outcome determinism() {
    const fs::path dir = work("determinism");
    const fs::path cfg = dir / "run.cfg";
    std::ofstream(cfg) << "preset = vacuum-bubble\nviscosity = exponential\nmu1 = 0.3\nseed = 17\nt_final = 0.02\n";
    int rc = 0;
    for (const char* o : {"a", "b"})
        rc |= cli(fmt::format("simulate --config \"{}\" --out \"{}\" --quiet", cfg.string(), (dir / o).string()));
    const bool same = slurp(dir / "a" / "diagnostics.csv") == slurp(dir / "b" / "diagnostics.csv");
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& p : preset_names()) {
        const fs::path pc = dir / (p + ".cfg");
        std::ofstream(pc) << "preset = " << p << "\nnx = 32\nny = 32\nt_final = 0.05\nsnap_every = 10\n"
                          << "record_every = 1\n";
        rc |= cli(fmt::format("simulate --config \"{}\" --out \"{}\" --quiet", pc.string(), (dir / p).string()));
    }
    const double smoke = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {rc == 0 && same && smoke < 60.0,
            fmt::format("diagnostics.csv {}; smoke suite (6 presets, 32^2, 50 steps) {:.1f} s < 60 s",
                        same ? "bit-identical" : "DIFFERS", smoke)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> known;
    app.add_option("--known-fail", known, "criteria expected to fail; exit 0 only if exactly these fail");
    CLI11_PARSE(app, argc, argv);
    criterion(1, "Korn identity", 10, korn);
    criterion(2, "energy law", 120, energy_law);
    criterion(3, "Lm conservation", 30, lm_conservation);
    criterion(4, "unit-sphere constraint", 0, unit_sphere);
    criterion(5, "exact director solution", 0, exact_director);
    criterion(6, "Stokes manufactured solutions", 0, stokes_manufactured);
    criterion(7, "Picard contraction", 0, picard);
    criterion(8, "maximum principle", 0, max_principle);
    criterion(9, "threshold pipeline", 0, thresholds);
    criterion(10, "norm toolkit", 0, norms);
    criterion(11, "monitor integrity", 0, monitor_integrity);
    criterion(12, "determinism and performance", 0, determinism);
    const std::set<int> expected(known.begin(), known.end());
    fmt::print("{} of 12 criteria failed: [{}]; known failures: [{}]\n", failed.size(), fmt::join(failed, ", "),
               fmt::join(expected, ", "));
    return failed == expected ? 0 : 1;
}
