#pragma once

#include <vector>

#include "nlc/director.hpp"
#include "nlc/errors.hpp"
#include "nlc/fields.hpp"
#include "nlc/stokes.hpp"
#include "nlc/transport.hpp"

namespace nlc {

struct FlowState {
    double t = 0.0;
    ScalarField rho;
    VectorField u;
    ScalarField p;
    DirectorField d;
};

struct SchemeOptions {
    ViscosityModel viscosity;
    double delta_vac = 0.0;
    SolverOptions stokes;
    DirectorOptions director;
    TransportOptions transport;
    double q = 4.0;          ///< density-gradient exponent reported in diagnostics
    int mp_component = 1;    ///< zero-based component tracked by min/max columns
};

struct DiagnosticsRecord {
    long step = 0;
    double t = 0.0;
    double energy = 0.0;
    double visc_dissipation = 0.0;
    double director_dissipation = 0.0;
    double balance_residual = 0.0;
    double div_u_L2 = 0.0;
    double grad_rho_Lq = 0.0;
    double grad_u_L2 = 0.0;
    double sqrt_rho_ut_L2 = 0.0;
    double grad2_d_L2 = 0.0;
    double grad3_d_L2 = 0.0;
    double unit_drift = 0.0;
    double min_d_i = 0.0;
    double max_d_i = 0.0;
    int picard_iters = 0;
    double picard_last_ratio = 0.0;
    int stokes_iters = 0;
    double serrin_u_partial = 0.0;
    double serrin_gradd_partial = 0.0;
    double M_quantity = 0.0;
};

struct EnergyLedger {
    double energy_prev = 0.0;
    double energy = 0.0;
    double visc_dissipation = 0.0;      ///< 2 int mu(rho) |D(u)|^2
    double director_dissipation = 0.0;  ///< int |lap d + |grad d|^2 d|^2
    double balance_residual = 0.0;      ///< dE/dt + both dissipations
};

/// E = (1/2) int (rho_delta |u|^2 + |grad d|^2) with face mass and face
/// differences, the pairing under which the scheme's energy telescopes.
double energy(const FlowState& s, double delta_vac);
double kinetic_energy(const ScalarField& rho, const VectorField& u, double delta_vac);

EnergyLedger energy_ledger(const FlowState& prev, const FlowState& next, double dt, const SchemeOptions& opt);

/// Reusable per-(grid, dt) solver state for repeated steps.
class Stepper {
public:
    Stepper(const Grid& g, double dt, SchemeOptions opt);

    /// One linearized sweep with v = state.u frozen: transport, director (then
    /// renormalize), momentum. Fills every diagnostic except the monitor
    /// columns.
    FlowState step(const FlowState& s, DiagnosticsRecord* rec = nullptr) const;

    double dt() const { return dt_; }
    const SchemeOptions& options() const { return opt_; }

    /// One linearized sweep with lagged inputs from `iterate`; returns the
    /// pre-projection director drift through `drift`.
    FlowState sweep(const FlowState& level, const FlowState& iterate, SaddleSolveStats* stokes, double* drift,
                    bool* div_warning = nullptr) const;

private:
    double dt_;
    SchemeOptions opt_;
    DirectorStepper director_;
};

/// Fills the state-dependent diagnostic columns of `rec` for next.
void fill_diagnostics(DiagnosticsRecord& rec, const FlowState& prev, const FlowState& next, double dt,
                      const SchemeOptions& opt);
/// Diagnostics of the initial state (no step taken yet).
DiagnosticsRecord initial_diagnostics(const FlowState& s, const SchemeOptions& opt);

FlowState time_step(const FlowState& s, double dt, const SchemeOptions& opt, DiagnosticsRecord* rec = nullptr);

struct PicardMetrics {
    std::vector<double> phi;
    std::vector<double> psi;
    std::vector<double> ratio;  ///< phi[k] / phi[k-1], k >= 1
    bool converged = false;
    double max_ratio() const;
    /// R^2 of the least-squares line through (k, log phi_k) for the first n iterates.
    double log_fit_r2(std::size_t n) const;
};

class PicardError : public SolverError {
public:
    PicardError(const std::string& what, PicardMetrics m) : SolverError(what), metrics(std::move(m)) {}
    PicardMetrics metrics;
};

struct PicardOptions {
    double tol_phi = 1e-20;
    int kmax = 30;
    /// When false, reaching kmax returns the last iterate instead of throwing.
    bool require_convergence = true;
};

/// Within-step successive approximation: iterate k takes v = u^{k-1} and the
/// director sources from d^{k-1}, starting from the previous time level,
/// until phi^k <= tol_phi. Throws PicardError at kmax unless told otherwise.
FlowState picard_step(const Stepper& stepper, const FlowState& s, const PicardOptions& popt, PicardMetrics& metrics,
                      DiagnosticsRecord* rec = nullptr);

}  // namespace nlc
