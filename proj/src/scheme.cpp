#include "nlc/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "nlc/mac_system.hpp"
#include "nlc/norms.hpp"
#include "nlc/operators.hpp"

namespace nlc {

namespace {

double sq(double x) { return x * x; }

/// h^2 sum over interior faces of w_f u_f^2 with w = face-averaged rho + delta.
double weighted_face_sq(const ScalarField& rho, const VectorField& u, double delta_vac) {
    const MacOperators ops(rho.grid());
    const Vec x = ops.index().pack(u);
    const Vec w = ops.face_average(rho).array() + delta_vac;
    return rho.grid().cell_area() * x.dot(w.cwiseProduct(x));
}

double director_dissipation(const DirectorField& d) {
    return sq(lp_norm(harmonic_map_tension(d), 2.0));
}

}  // namespace

double kinetic_energy(const ScalarField& rho, const VectorField& u, double delta_vac) {
    return 0.5 * weighted_face_sq(rho, u, delta_vac);
}

double energy(const FlowState& s, double delta_vac) {
    return kinetic_energy(s.rho, s.u, delta_vac) + 0.5 * dirichlet_energy(s.d);
}

EnergyLedger energy_ledger(const FlowState& prev, const FlowState& next, double dt, const SchemeOptions& opt) {
    EnergyLedger e;
    e.energy_prev = energy(prev, opt.delta_vac);
    e.energy = energy(next, opt.delta_vac);
    const MacOperators ops(next.rho.grid());
    e.visc_dissipation = viscous_dissipation(ops, opt.viscosity.evaluate(next.rho), next.u);
    e.director_dissipation = director_dissipation(next.d);
    e.balance_residual = (e.energy - e.energy_prev) / dt + e.visc_dissipation + e.director_dissipation;
    return e;
}

namespace {

void fill_state_columns(DiagnosticsRecord& rec, const FlowState& s, const SchemeOptions& opt) {
    rec.t = s.t;
    rec.div_u_L2 = lp_norm(divergence(s.u), 2.0);
    rec.grad_rho_Lq = sobolev_seminorm(s.rho, 1, opt.q);
    rec.grad_u_L2 = lp_norm(velocity_gradient(s.u).frobenius(), 2.0);
    rec.grad2_d_L2 = sobolev_seminorm(s.d, 2, 2.0);
    rec.grad3_d_L2 = sobolev_seminorm(s.d, 3, 2.0);
    const int i = std::clamp(opt.mp_component, 0, s.d.components() - 1);
    rec.min_d_i = s.d.component(i).min();
    rec.max_d_i = s.d.component(i).max();
}

}  // namespace

void fill_diagnostics(DiagnosticsRecord& rec, const FlowState& prev, const FlowState& next, double dt,
                      const SchemeOptions& opt) {
    fill_state_columns(rec, next, opt);
    const EnergyLedger e = energy_ledger(prev, next, dt, opt);
    rec.energy = e.energy;
    rec.visc_dissipation = e.visc_dissipation;
    rec.director_dissipation = e.director_dissipation;
    rec.balance_residual = e.balance_residual;
    rec.sqrt_rho_ut_L2 = std::sqrt(weighted_face_sq(next.rho, (1.0 / dt) * (next.u - prev.u), opt.delta_vac));
}

DiagnosticsRecord initial_diagnostics(const FlowState& s, const SchemeOptions& opt) {
    DiagnosticsRecord rec;
    fill_state_columns(rec, s, opt);
    rec.energy = energy(s, opt.delta_vac);
    const MacOperators ops(s.rho.grid());
    rec.visc_dissipation = viscous_dissipation(ops, opt.viscosity.evaluate(s.rho), s.u);
    rec.director_dissipation = director_dissipation(s.d);
    return rec;
}

Stepper::Stepper(const Grid& g, double dt, SchemeOptions opt)
    : dt_(dt), opt_(std::move(opt)), director_(g, dt, opt_.director) {}

FlowState Stepper::sweep(const FlowState& level, const FlowState& iterate, SaddleSolveStats* stokes, double* drift,
                         bool* div_warning) const {
    const VectorField& v = iterate.u;
    AdvectResult adv = advect_density(level.rho, v, dt_, opt_.transport);
    auto [d, dev] = renormalize(director_.step(level.d, iterate.d, v));
    MomentumOptions mo;
    mo.solver = opt_.stokes;
    mo.delta_vac = opt_.delta_vac;
    StokesSolution sol = momentum_step(adv.rho, level.u, v, d, opt_.viscosity, dt_, mo, &level.rho);
    if (stokes) *stokes = sol.stats;
    if (drift) *drift = dev;
    if (div_warning) *div_warning = adv.divergence_warning;
    return {level.t + dt_, std::move(adv.rho), std::move(sol.u), std::move(sol.p), std::move(d)};
}

FlowState Stepper::step(const FlowState& s, DiagnosticsRecord* rec) const {
    SaddleSolveStats st;
    double drift = 0.0;
    FlowState next = sweep(s, s, &st, &drift);
    if (rec) {
        fill_diagnostics(*rec, s, next, dt_, opt_);
        rec->unit_drift = drift;
        rec->picard_iters = 1;
        rec->picard_last_ratio = 0.0;
        rec->stokes_iters = st.iterations;
    }
    return next;
}

FlowState time_step(const FlowState& s, double dt, const SchemeOptions& opt, DiagnosticsRecord* rec) {
    return Stepper(s.rho.grid(), dt, opt).step(s, rec);
}

double PicardMetrics::max_ratio() const {
    return ratio.empty() ? 0.0 : *std::max_element(ratio.begin(), ratio.end());
}

double PicardMetrics::log_fit_r2(std::size_t n) const {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < std::min(n, phi.size()); ++k)
        if (phi[k] > 0.0) {
            xs.push_back(static_cast<double>(k + 1));
            ys.push_back(std::log(phi[k]));
        }
    const std::size_t m = xs.size();
    if (m < 3) return 0.0;
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < m; ++k) {
        mx += xs[k] / m;
        my += ys[k] / m;
    }
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < m; ++k) {
        sxx += sq(xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
        syy += sq(ys[k] - my);
    }
    return syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
}

FlowState picard_step(const Stepper& stepper, const FlowState& s, const PicardOptions& popt, PicardMetrics& metrics,
                      DiagnosticsRecord* rec) {
    const SchemeOptions& opt = stepper.options();
    metrics = {};
    FlowState prev = s;
    FlowState cur = s;
    SaddleSolveStats st;
    double drift = 0.0;
    int k = 0;
    while (k < popt.kmax) {
        ++k;
        cur = stepper.sweep(s, prev, &st, &drift);
        const VectorField du = cur.u - prev.u;
        const DirectorField dd = cur.d - prev.d;
        const double phi = sq(lp_norm(cur.rho - prev.rho, 2.0)) + weighted_face_sq(cur.rho, du, opt.delta_vac) +
                           dirichlet_energy(dd);
        const double psi = sq(lp_norm(velocity_gradient(du).frobenius(), 2.0)) + sq(lp_norm(laplacian(dd), 2.0));
        if (!metrics.phi.empty()) metrics.ratio.push_back(metrics.phi.back() > 0.0 ? phi / metrics.phi.back() : 0.0);
        metrics.phi.push_back(phi);
        metrics.psi.push_back(psi);
        if (phi <= popt.tol_phi) {
            metrics.converged = true;
            break;
        }
        prev = std::move(cur);
        cur = prev;
    }
    if (!metrics.converged && popt.require_convergence)
        throw PicardError(fmt::format("Picard iteration missed tol_phi = {:.1e} after {} iterates (last phi {:.3e})",
                                      popt.tol_phi, k, metrics.phi.back()),
                          metrics);
    if (rec) {
        fill_diagnostics(*rec, s, cur, stepper.dt(), opt);
        rec->unit_drift = drift;
        rec->picard_iters = k;
        rec->picard_last_ratio = metrics.ratio.empty() ? 0.0 : metrics.ratio.back();
        rec->stokes_iters = st.iterations;
    }
    return cur;
}

}  // namespace nlc
