#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlc/config.hpp"
#include "nlc/monitor.hpp"
#include "nlc/scheme.hpp"

namespace nlc {

struct RunResult {
    FlowState final_state;
    std::vector<DiagnosticsRecord> records;
    MonitorValues monitor;
    double compatibility_gnorm = 0.0;
    bool max_principle_checked = false;
    bool max_principle_passed = true;
    double max_principle_excess = 0.0;
};

/// Runs the configured preset to t_final, writing diagnostics.csv,
/// snapshots, monitor_report.json, resolved_config.cfg and manifest.json into
/// `out`. On failure the manifest is marked truncated and the error rethrown.
RunResult run_simulation(const SimConfig& c, const std::filesystem::path& out, bool quiet = true);

struct VerifyReport {
    std::size_t rows = 0;
    double max_diff = 0.0;  ///< max relative difference over the checked columns
    std::string worst_column;
    long worst_step = 0;
};

/// Rebuilds the monitor series from the snapshots of a finished run and
/// compares grad_rho_Lq, serrin_u_partial, serrin_gradd_partial and
/// M_quantity against diagnostics.csv. Throws VerificationError when the
/// difference exceeds tol.
VerifyReport verify_snapshots(const std::filesystem::path& out, double tol = 1e-10);

struct PicardStudyRow {
    double dt = 0.0;
    int iterates = 0;
    double max_ratio = 0.0;
    double first_ratio = 0.0;
    double last_ratio = 0.0;
    double r2_fit6 = 0.0;
    bool quarter_met = false;  ///< max_ratio <= 1/4
    bool converged = false;
};

/// One within-step Picard solve from the preset initial data per dt in
/// study_dts; writes picard_study.csv.
std::vector<PicardStudyRow> picard_study(const SimConfig& c, const std::filesystem::path& out, bool quiet = true);

struct ConstantsResult {
    std::vector<double> c1_per_seed;
    std::vector<double> c2_per_seed;
    double c1 = 0.0;
    double c2 = 0.0;
    double c1_spread = 0.0;  ///< max |C - median| / median over seeds
    double c2_spread = 0.0;
    double threshold = 0.0;
    double dist_sq_bound = 0.0;
    double preset_gate = 0.0;  ///< C1 C2 ||d0 - e||_inf^2 on the geometric preset
    bool gate_passed = false;
    L4Budget budget;
};

/// Estimates C1, C2 over seeds seed .. seed + 4, derives the geometric
/// threshold, checks the gate on the geometric preset and runs it for the
/// L4 budget; writes constants.json.
ConstantsResult estimate_constants(const SimConfig& c, const std::filesystem::path& out, bool quiet = true);

struct InequalityRow {
    std::string suite;
    int trial = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
};

/// Randomized Lorentz-Hoelder, absorption, log-Sobolev and Korn suites;
/// writes inequalities.csv.
std::vector<InequalityRow> check_inequalities(const SimConfig& c, const std::filesystem::path& out, bool quiet = true);

}  // namespace nlc
