#include "nlc/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <optional>

#include "nlc/errors.hpp"
#include "nlc/inequalities.hpp"
#include "nlc/io.hpp"
#include "nlc/presets.hpp"

namespace nlc {

namespace {

nlohmann::json num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    return x;
}

MpBranch branch_of(const PresetParams& p) { return p.branch == 2 ? MpBranch::lower : MpBranch::upper; }

std::string fmt_double(double x) { return fmt::format("{}", x); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double spread(const std::vector<double>& v) {
    const double m = median(v);
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x - m) / m);
    return s;
}

}  // namespace

RunResult run_simulation(const SimConfig& c, const fs::path& out, bool quiet) {
    fs::create_directories(out);
    std::vector<fs::path> files;
    const Grid g = c.grid();
    FlowState s = make_preset(c.preset, g, c.preset_params);
    check_initial_data(s, c.unit_tol);
    const SchemeOptions opt = c.scheme_options(s);
    files.push_back(write_text(out, "resolved_config.cfg", resolved_config(c)));

    std::vector<DiagnosticsRecord> records;
    const CompatibilityReport comp = compatibility_init(s.rho, s.u, s.d, opt.viscosity, opt.delta_vac);
    s.p = comp.p0;

    BlowupMonitor mon(c.monitor_config());
    std::optional<MaxPrincipleMonitor> mp;
    if (c.preset == "geometric-configuration")
        mp.emplace(s.d, opt.mp_component, c.preset_params.geo_lower, branch_of(c.preset_params), c.mp_tol);

    const fs::path csv_path = out / "diagnostics.csv";
    files.push_back(csv_path);
    std::ofstream csv(csv_path);
    if (!csv) throw ConfigError(fmt::format("cannot write '{}'", csv_path.string()));
    csv << diagnostics_header() << "\n";

    auto record = [&](DiagnosticsRecord& r, const FlowState& st) {
        mon.update(st);
        const MonitorValues v = mon.current();
        r.serrin_u_partial = v.u;
        r.serrin_gradd_partial = v.grad_d;
        r.M_quantity = v.reported(c.n);
        csv << diagnostics_row(r) << "\n" << std::flush;
        records.push_back(r);
    };
    auto snapshot = [&](long step, const FlowState& st) {
        if (c.snap_every > 0 && step % c.snap_every == 0) {
            const auto f = write_state_snapshot(out, step, st);
            files.insert(files.end(), f.begin(), f.end());
        }
    };
    auto write_report = [&](bool complete, const std::string& note) {
        nlohmann::json j = nlohmann::json::parse(mon.report_json());
        j["complete"] = complete;
        if (!note.empty()) j["note"] = note;
        j["preset"] = c.preset;
        j["steps_recorded"] = records.size();
        j["compatibility"] = {{"gnorm", num(comp.gnorm)}};
        if (mp) {
            j["max_principle"] = {{"component", c.mp_component},
                                  {"lower_bound", mp->lower_bound()},
                                  {"upper_bound", mp->upper_bound()},
                                  {"worst_excess", num(mp->worst_excess())},
                                  {"passed", mp->passed()},
                                  {"summary", mp->report()}};
        }
        files.push_back(write_text(out, "monitor_report.json", j.dump(2) + "\n"));
    };

    const auto t0 = std::chrono::steady_clock::now();
    const long steps = c.steps();
    try {
        DiagnosticsRecord r0 = initial_diagnostics(s, opt);
        r0.step = 0;
        record(r0, s);
        snapshot(0, s);
        const Stepper stepper(g, c.dt, opt);
        const PicardOptions popt{c.tol_phi, c.kmax, true};
        for (long n = 1; n <= steps; ++n) {
            DiagnosticsRecord r;
            if (c.picard) {
                PicardMetrics m;
                s = picard_step(stepper, s, popt, m, &r);
            } else {
                s = stepper.step(s, &r);
            }
            r.step = n;
            if (mp) mp->observe(s.t, s.d);
            if (n % c.record_every == 0) record(r, s);
            snapshot(n, s);
            if (!quiet && (n % std::max<long>(1, steps / 10) == 0 || n == steps))
                fmt::print(stderr, "step {}/{} t = {:.4g} E = {:.6e} stokes its {}\n", n, steps, s.t, r.energy,
                           r.stokes_iters);
        }
    } catch (const std::exception& e) {
        csv.close();
        write_report(false, e.what());
        write_manifest(out, files, false, fmt::format("run aborted after {} records: {}", records.size(), e.what()));
        throw;
    }
    csv.close();
    write_report(true, "");
    write_manifest(out, files, true, "");
    if (!quiet)
        fmt::print(stderr, "finished {} steps in {:.2f} s\n", steps,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    RunResult res{std::move(s), std::move(records), mon.current(), comp.gnorm};
    if (mp) {
        res.max_principle_checked = true;
        res.max_principle_passed = mp->passed();
        res.max_principle_excess = mp->worst_excess();
    }
    return res;
}

VerifyReport verify_snapshots(const fs::path& out, double tol) {
    const SimConfig c = parse_config(out / "resolved_config.cfg");
    const BlowupMonitorConfig cfg = c.monitor_config();
    const std::vector<DiagnosticsRecord> rows = read_diagnostics(out / "diagnostics.csv");
    if (rows.empty()) throw VerificationError("diagnostics.csv has no rows");
    std::vector<MonitorSample> samples;
    for (const auto& r : rows) {
        if (!has_state_snapshot(out, r.step))
            throw VerificationError(fmt::format(
                "no snapshot for recorded step {}; verification needs a snapshot at every recorded step", r.step));
        const FlowState s = read_state_snapshot(out, r.step);
        if (s.t != r.t)
            throw VerificationError(fmt::format("snapshot time {} differs from diagnostics time {} at step {}", s.t,
                                                r.t, r.step));
        samples.push_back(sample_state(s, cfg));
    }
    const std::vector<MonitorValues> vals = recompute_monitors(samples, cfg);
    VerifyReport rep;
    rep.rows = rows.size();
    auto check = [&](const char* col, long step, double got, double want) {
        const double d = std::abs(got - want) / std::max(1.0, std::abs(want));
        if (d > rep.max_diff || rep.worst_column.empty()) {
            rep.max_diff = std::max(rep.max_diff, d);
            rep.worst_column = col;
            rep.worst_step = step;
        }
    };
    for (std::size_t k = 0; k < rows.size(); ++k) {
        check("grad_rho_Lq", rows[k].step, rows[k].grad_rho_Lq, samples[k].grad_rho_Lq);
        check("serrin_u_partial", rows[k].step, rows[k].serrin_u_partial, vals[k].u);
        check("serrin_gradd_partial", rows[k].step, rows[k].serrin_gradd_partial, vals[k].grad_d);
        check("M_quantity", rows[k].step, rows[k].M_quantity, vals[k].reported(cfg.n));
    }
    if (rep.max_diff > tol)
        throw VerificationError(fmt::format("{} differs from the snapshot recomputation by {:.3e} at step {} (tol {:.1e})",
                                            rep.worst_column, rep.max_diff, rep.worst_step, tol));
    return rep;
}

std::vector<PicardStudyRow> picard_study(const SimConfig& c, const fs::path& out, bool quiet) {
    fs::create_directories(out);
    const Grid g = c.grid();
    const FlowState s0 = make_preset(c.preset, g, c.preset_params);
    check_initial_data(s0, c.unit_tol);
    const SchemeOptions opt = c.scheme_options(s0);
    std::vector<PicardStudyRow> rows;
    std::string csv = "dt,iterates,converged,max_ratio,first_ratio,last_ratio,r2_fit6,quarter_met\n";
    for (double dt : c.study_dts) {
        const Stepper stepper(g, dt, opt);
        PicardMetrics m;
        picard_step(stepper, s0, PicardOptions{c.tol_phi, c.kmax, false}, m);
        PicardStudyRow r;
        r.dt = dt;
        r.iterates = static_cast<int>(m.phi.size());
        r.converged = m.converged;
        r.max_ratio = m.max_ratio();
        r.first_ratio = m.ratio.empty() ? 0.0 : m.ratio.front();
        r.last_ratio = m.ratio.empty() ? 0.0 : m.ratio.back();
        r.r2_fit6 = m.log_fit_r2(6);
        r.quarter_met = r.max_ratio <= 0.25;
        rows.push_back(r);
        csv += fmt::format("{},{},{},{},{},{},{},{}\n", fmt_double(dt), r.iterates, r.converged ? 1 : 0,
                           fmt_double(r.max_ratio), fmt_double(r.first_ratio), fmt_double(r.last_ratio),
                           fmt_double(r.r2_fit6), r.quarter_met ? 1 : 0);
        if (!quiet)
            fmt::print(stderr, "dt = {:g}: {} iterates, max ratio {:.3e}, R2 {:.4f}\n", dt, r.iterates, r.max_ratio,
                       r.r2_fit6);
    }
    const fs::path p = write_text(out, "picard_study.csv", csv);
    write_manifest(out, {p}, true, "");
    return rows;
}

ConstantsResult estimate_constants(const SimConfig& c, const fs::path& out, bool quiet) {
    fs::create_directories(out);
    const Grid g = c.grid();
    const FlowState geo = make_preset("geometric-configuration", g, c.preset_params);
    const int comp = c.mp_component - 1;
    const MpBranch branch = branch_of(c.preset_params);
    const std::vector<ScalarField> include(geo.d.comps().begin(), geo.d.comps().end());

    ConstantsResult res;
    for (std::uint64_t k = 0; k < 5; ++k) {
        const EstimatorOptions eo{c.est_trials, c.est_steps, c.est_modes, c.seed + k};
        res.c1_per_seed.push_back(estimate_elliptic_C1(g, eo, include));
        res.c2_per_seed.push_back(estimate_gn_C2(g, eo, include));
        if (!quiet)
            fmt::print(stderr, "seed {}: C1 = {:.5f} C2 = {:.5f}\n", c.seed + k, res.c1_per_seed.back(),
                       res.c2_per_seed.back());
    }
    res.c1 = *std::max_element(res.c1_per_seed.begin(), res.c1_per_seed.end());
    res.c2 = *std::max_element(res.c2_per_seed.begin(), res.c2_per_seed.end());
    res.c1_spread = spread(res.c1_per_seed);
    res.c2_spread = spread(res.c2_per_seed);
    const GeometricThreshold th = geometric_threshold(res.c1, res.c2);
    res.threshold = th.threshold;
    res.dist_sq_bound = th.dist_sq_bound;
    res.preset_gate = geometric_gate(geo.d, comp, branch, res.c1, res.c2);
    res.gate_passed = res.preset_gate < 1.0;

    SimConfig gc = c;
    gc.preset = "geometric-configuration";
    const SchemeOptions opt = gc.scheme_options(geo);
    const Stepper stepper(g, c.dt, opt);
    std::vector<DirectorField> series{geo.d};
    std::vector<double> times{geo.t};
    FlowState s = geo;
    const long steps = std::max<long>(c.steps(), 10);
    for (long n = 1; n <= steps; ++n) {
        s = stepper.step(s);
        series.push_back(s.d);
        times.push_back(s.t);
    }
    res.budget = grad_d_L4_budget(series, times, comp, branch, res.c1, res.c2);

    nlohmann::json j;
    j["C1"] = res.c1;
    j["C2"] = res.c2;
    j["C1_per_seed"] = res.c1_per_seed;
    j["C2_per_seed"] = res.c2_per_seed;
    j["C1_spread"] = res.c1_spread;
    j["C2_spread"] = res.c2_spread;
    j["seeds"] = {c.seed, c.seed + 4};
    j["geometric_threshold"] = res.threshold;
    j["dist_sq_bound"] = res.dist_sq_bound;
    j["preset"] = {{"name", "geometric-configuration"},
                   {"geo_lower", c.preset_params.geo_lower},
                   {"branch", c.preset_params.branch},
                   {"lower_clears_threshold", c.preset_params.geo_lower >= res.threshold},
                   {"gate_value", res.preset_gate},
                   {"gate_passed", res.gate_passed}};
    j["grad_d_L4_budget"] = {{"budget", num(res.budget.budget)},
                             {"fitted_constant", num(res.budget.fitted_constant)},
                             {"explicit_constant", num(res.budget.explicit_constant)},
                             {"gn_bound", num(res.budget.gn_bound)},
                             {"dominated", res.budget.dominated()},
                             {"slices", res.budget.slices.size()},
                             {"t_final", times.back()}};
    const fs::path p = write_text(out, "constants.json", j.dump(2) + "\n");
    write_manifest(out, {p}, true, "");
    return res;
}

std::vector<InequalityRow> check_inequalities(const SimConfig& c, const fs::path& out, bool quiet) {
    fs::create_directories(out);
    const Grid g = c.grid();
    const int modes = c.est_modes;
    std::vector<InequalityRow> rows;
    auto add = [&](const InequalityReport& r, int trial) {
        rows.push_back({r.name, trial, r.lhs, r.rhs_without_constant, r.fitted_constant});
    };
    for (int t = 0; t < c.ineq_trials; ++t) {
        const std::uint64_t base = (c.seed << 20) + 4 * static_cast<std::uint64_t>(t);
        const ScalarField f = random_neumann_field(g, modes, base);
        const ScalarField h = random_neumann_field(g, modes, base + 1);
        add(holder_lorentz_check(f, h, 4.0, 4.0), t);
        const std::pair<ScalarField, ScalarField> fam[] = {{f, h}};
        add(product_absorption_check(fam, 4.0, 0.1, 2), t);
        std::vector<FieldSlice> hist;
        for (int k = 0; k <= 10; ++k) {
            const double tt = 0.1 * k;
            ScalarField sl(g);
            for (std::size_t m = 0; m < sl.size(); ++m)
                sl.values()[m] = std::exp(-tt) * f.values()[m] + tt * h.values()[m];
            hist.push_back({tt, {sl}});
        }
        add(log_sobolev_check(hist, 4.0), t);
        const KornReport k = korn_identity_check(random_noslip_field(g, 3, base + 2));
        rows.push_back({"korn", t, k.deformation_sq, k.half_gradient_sq, k.relative_gap()});
    }
    std::string csv = "suite,trial,lhs,rhs_without_constant,fitted_constant\n";
    for (const auto& r : rows)
        csv += fmt::format("{},{},{},{},{}\n", r.suite, r.trial, fmt_double(r.lhs), fmt_double(r.rhs),
                           fmt_double(r.constant));
    const fs::path p = write_text(out, "inequalities.csv", csv);
    write_manifest(out, {p}, true, "");
    if (!quiet) fmt::print(stderr, "{} inequality checks written to {}\n", rows.size(), p.string());
    return rows;
}

}  // namespace nlc
