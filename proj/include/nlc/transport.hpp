#pragma once

#include <span>
#include <vector>

#include "nlc/fields.hpp"

namespace nlc {

struct TransportOptions {
    double cfl_cap = 5.0;
    /// A warning flag is raised when ||div v||_{L^2} exceeds this.
    double solenoidal_warn = 1e-8;
};

struct AdvectResult {
    ScalarField rho;
    bool divergence_warning = false;
    double cfl = 0.0;
};

/// Semi-Lagrangian step for rho_t + v . grad rho = 0: RK2 backtrace from every
/// cell center, foot point clamped to the closed domain, bilinear
/// interpolation. Output stays inside [min rho, max rho].
/// Throws ConfigError when dt max|v| / h exceeds the CFL cap.
AdvectResult advect_density(const ScalarField& rho, const VectorField& v, double dt, const TransportOptions& opt = {});

/// Bilinear interpolation of MAC velocity at a point (clamped to the domain).
void velocity_at(const VectorField& v, double x, double y, double& vx, double& vy);

/// Bilinear interpolation of cell-centered samples, constant beyond the
/// outermost centers.
double interpolate_cell(const ScalarField& f, double x, double y);

/// | ||rho(t)||_m - ||rho_0||_m | / ||rho_0||_m for every snapshot, m in {1, 2, inf}.
std::vector<double> lm_conservation_report(std::span<const ScalarField> series, double m);

}  // namespace nlc
