#pragma once

#include <string>
#include <vector>

#include "nlc/scheme.hpp"

namespace nlc {

/// Shape parameters shared by the presets; each preset reads the ones it
/// needs. Coordinates are scaled to the unit square before the formulas apply.
struct PresetParams {
    double rho0 = 1.0;            ///< background density
    double rho_amp = 0.5;         ///< relative height of the density bump
    double u_amp = 0.5;           ///< peak speed of the initial vortex
    double theta_amp = 1.0;       ///< director angle amplitude
    double bubble_radius = 0.2;   ///< vacuum disk radius
    double geo_lower = 0.95;      ///< lower bound on d_2 for the geometric preset
    int branch = 1;               ///< 1: d_2 >= lower, 2: d_2 <= -lower
};

const std::vector<std::string>& preset_names();

/// Initial state of the named preset; throws ConfigError for unknown names.
FlowState make_preset(const std::string& name, const Grid& g, const PresetParams& p);

/// rho0 (1 + amp S(r)) around (cx, cy): S = 1 for r <= r0, 0 for r >= r1 and
/// a C-infinity transition between, so both extremes are attained on plateaus.
ScalarField plateau_bump(const Grid& g, double cx, double cy, double r0, double r1, double rho0, double amp);

/// The admissibility gates on initial data: discrete div u0 = 0, |d0| = 1
/// within unit_tol, rho0 >= 0. Throws ConfigError naming the failed gate.
void check_initial_data(const FlowState& s, double unit_tol);

}  // namespace nlc
