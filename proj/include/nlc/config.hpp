#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nlc/monitor.hpp"
#include "nlc/presets.hpp"
#include "nlc/scheme.hpp"

namespace nlc {

/// Everything a run needs, parsed from a flat `key = value` file.
struct SimConfig {
    int nx = 32;
    int ny = 32;
    double lx = 1.0;
    double ly = 1.0;

    double dt = 1e-3;
    double t_final = 0.05;
    double cfl_cap = 5.0;

    std::string viscosity = "constant";
    double mu0 = 1.0;
    double mu1 = 0.0;

    std::string preset = "equilibrium";
    PresetParams preset_params;
    double delta_vac = -1.0;  ///< < 0 resolves to 1e-6 max(rho0)

    double stokes_tol = 1e-12;
    int stokes_itmax = 400;
    double d_tol = 1e-12;
    double tol_phi = 1e-24;
    double unit_tol = 1e-8;
    double mp_tol = 1e-6;
    int mp_component = 2;  ///< one-based

    double q = 4.0;
    double s1 = 4.0, r1 = 4.0, s2 = 4.0, r2 = 4.0;
    int n = 2;
    double monitor_threshold = kInf;

    bool picard = false;
    int kmax = 30;

    std::string out = "out";
    int record_every = 1;
    int snap_every = 1;
    std::uint64_t seed = 1;

    int est_trials = 12;
    int est_steps = 150;
    int est_modes = 4;
    int ineq_trials = 20;
    std::vector<double> study_dts{4e-3, 2e-3, 1e-3};

    long steps() const;
    BlowupMonitorConfig monitor_config() const;
    SchemeOptions scheme_options(const FlowState& initial) const;
    ViscosityModel viscosity_model() const;
    Grid grid() const;
    double resolved_delta_vac(const FlowState& initial) const;
};

/// One documented key: name, default text and accepted domain.
struct ConfigKey {
    std::string name;
    std::string default_value;
    std::string domain;
};

const std::vector<ConfigKey>& config_keys();
/// `--help` text listing every key with its default.
std::string config_help();

/// Strict parse; unknown, duplicate or malformed keys raise ConfigError
/// naming the key and the expected domain. Validates the result.
SimConfig parse_config_text(const std::string& text);
SimConfig parse_config(const std::filesystem::path& path);

/// Full resolved configuration in the same syntax; parsing it back yields an
/// identical run.
std::string resolved_config(const SimConfig& c);

/// Domain checks that need no preset data, then the preset gates and the
/// CFL bound dt max|u0| / h <= cfl_cap.
void validate(const SimConfig& c);

}  // namespace nlc
