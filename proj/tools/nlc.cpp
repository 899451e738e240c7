#include <CLI11.hpp>
#include <fmt/format.h>
#include <optional>

#include "nlc/config.hpp"
#include "nlc/errors.hpp"
#include "nlc/simulation.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitVerify = 3;

const char* kExitCodes =
    "Exit codes: 0 success, 1 configuration error, 2 solver failure, 3 verification mismatch.";

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

void add_common(CLI::App* sub, Common& c, bool needs_config) {
    auto* opt = sub->add_option("--config", c.config, "flat key = value configuration file");
    if (needs_config) opt->required();
    sub->add_option("--out", c.out, "output directory (overrides the out key)");
    sub->add_option("--seed", c.seed, "random seed (overrides the seed key)");
    sub->add_flag("--quiet", c.quiet, "suppress progress output");
}

nlc::SimConfig load(const Common& c) {
    nlc::SimConfig cfg = c.config.empty() ? nlc::SimConfig{} : nlc::parse_config(c.config);
    if (!c.out.empty()) cfg.out = c.out;
    if (c.seed) cfg.seed = *c.seed;
    nlc::validate(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Density-dependent nematic liquid crystal flow: simulation and diagnostics"};
    app.footer(std::string(kExitCodes) + "\n\n" +
               nlc::config_help());
    app.require_subcommand(1);

    Common sim, pic, est, ineq;
    std::string verify_dir;
    double verify_tol = 1e-10;
    bool verify_quiet = false;

    auto* s_sim = app.add_subcommand("simulate", "run a preset and write diagnostics, snapshots and monitors");
    add_common(s_sim, sim, true);
    auto* s_pic = app.add_subcommand("picard-study", "within-step Picard contraction over study_dts");
    add_common(s_pic, pic, false);
    auto* s_est = app.add_subcommand("estimate-constants", "estimate C1, C2 and the geometric threshold");
    add_common(s_est, est, false);
    auto* s_ineq = app.add_subcommand("check-inequalities", "randomized functional-inequality suites");
    add_common(s_ineq, ineq, false);
    auto* s_ver = app.add_subcommand("verify-snapshot", "recompute monitors from snapshots and diff diagnostics");
    s_ver->add_option("--out", verify_dir, "output directory of a finished run")->required();
    s_ver->add_option("--tol", verify_tol, "maximum relative difference");
    s_ver->add_flag("--quiet", verify_quiet, "suppress the summary line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*s_sim) {
            const nlc::SimConfig c = load(sim);
            const nlc::RunResult r = nlc::run_simulation(c, c.out, sim.quiet);
            if (!sim.quiet)
                fmt::print("{} records, M_quantity = {:.6e}, compatibility |g| = {:.3e}{}\n", r.records.size(),
                           r.monitor.reported(c.n), r.compatibility_gnorm,
                           r.max_principle_checked ? (r.max_principle_passed ? ", max principle held" : ", max principle VIOLATED") : "");
            if (r.max_principle_checked && !r.max_principle_passed) return kExitVerify;
        } else if (*s_pic) {
            const nlc::SimConfig c = load(pic);
            const auto rows = nlc::picard_study(c, c.out, pic.quiet);
            if (!pic.quiet)
                for (const auto& r : rows)
                    fmt::print("dt {:<8g} iterates {:>3} max ratio {:.3e} R2 {:.4f} quarter {}\n", r.dt, r.iterates,
                               r.max_ratio, r.r2_fit6, r.quarter_met ? "met" : "not met");
        } else if (*s_est) {
            const nlc::SimConfig c = load(est);
            const auto r = nlc::estimate_constants(c, c.out, est.quiet);
            if (!est.quiet)
                fmt::print("C1 = {:.5f} C2 = {:.5f} threshold = {:.5f} gate = {:.4f} ({}) budget dominated: {}\n", r.c1,
                           r.c2, r.threshold, r.preset_gate, r.gate_passed ? "pass" : "fail",
                           r.budget.dominated() ? "yes" : "no");
        } else if (*s_ineq) {
            const nlc::SimConfig c = load(ineq);
            nlc::check_inequalities(c, c.out, ineq.quiet);
        } else if (*s_ver) {
            const nlc::VerifyReport r = nlc::verify_snapshots(verify_dir, verify_tol);
            if (!verify_quiet)
                fmt::print("verified {} rows, max relative difference {:.3e} ({} at step {})\n", r.rows, r.max_diff,
                           r.worst_column, r.worst_step);
        }
    } catch (const nlc::VerificationError& e) {
        fmt::print(stderr, "verification failed: {}\n", e.what());
        return kExitVerify;
    } catch (const nlc::ConfigError& e) {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return kExitConfig;
    } catch (const nlc::SolverError& e) {
        fmt::print(stderr, "solver failure: {}\n", e.what());
        return kExitSolver;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitSolver;
    }
    return 0;
}
