#pragma once

#include <optional>
#include <string>

#include "nlc/fields.hpp"
#include "nlc/mac_system.hpp"

namespace nlc {

/// mu(rho) for the transported density.
struct ViscosityModel {
    enum class Kind { constant, affine, exponential };

    Kind kind = Kind::constant;
    double mu0 = 1.0;
    double mu1 = 0.0;

    static ViscosityModel constant(double mu0) { return {Kind::constant, mu0, 0.0}; }
    static ViscosityModel affine(double mu0, double mu1) { return {Kind::affine, mu0, mu1}; }
    static ViscosityModel exponential(double mu0, double mu1) { return {Kind::exponential, mu0, mu1}; }

    double operator()(double rho) const;
    /// Pointwise mu(rho); throws ConfigError if any value is not positive.
    ScalarField evaluate(const ScalarField& rho) const;
    /// Positivity on [0, inf) or, for decreasing affine laws, on [0, rho_max].
    void validate(double rho_max) const;
    std::string name() const;
};

struct SaddleSolveStats {
    int iterations = 0;
    int restarts = 0;
    double momentum_residual = 0.0;   ///< ||K u + G p - f|| / ||f||
    double divergence_residual = 0.0; ///< ||div u||_{L^2}
    bool converged = false;
};

struct SolverOptions {
    double tol = 1e-10;
    int itmax = 400;
    int restart = 60;
};

struct StokesSolution {
    VectorField u;
    ScalarField p;
    SaddleSolveStats stats;
};

/// -div(2 mu D(u)) + grad P = F, div u = 0, no-slip walls, mean-zero P.
/// Throws ConfigError for non-positive mu and SolverError on non-convergence.
StokesSolution solve_stokes(const ScalarField& mu, const VectorField& force, const SolverOptions& opt = {});

struct MomentumOptions {
    SolverOptions solver;
    double delta_vac = 0.0;
};

/// One backward-Euler momentum solve with convection velocity v frozen:
///   (rho_d u_new - rho_p u_old) / dt + rho_d (v . grad) u_new + (rho_d - rho_p) u_new / (2 dt)
///     - div(2 mu(rho) D(u_new)) + grad P = -div(grad d . grad d),  div u_new = 0,
/// with rho_d = rho + delta_vac and rho_p the previous-level density (defaults
/// to rho, giving the plain (rho_d / dt)(u_new - u_old) mass term). Convection
/// is skew-symmetrized, so with the mass-averaged form the kinetic energy
/// telescopes exactly.
StokesSolution momentum_step(const ScalarField& rho, const VectorField& u_old, const VectorField& v,
                             const DirectorField& d, const ViscosityModel& mu, double dt,
                             const MomentumOptions& opt = {}, const ScalarField* rho_prev = nullptr);

/// A u = -div(2 mu D(u)) on interior faces.
VectorField viscous_apply(const ScalarField& mu, const VectorField& u);
/// G p on interior faces.
VectorField pressure_gradient(const ScalarField& p);
/// Face-quadrature L^2 norm over interior faces, the norm paired with the
/// saddle-point operators.
double face_l2_norm(const VectorField& u);

struct CompatibilityReport {
    ScalarField p0;
    VectorField residual;  ///< R = -div(2 mu D(u0)) + div(grad d0 . grad d0)
    VectorField g;         ///< (R + grad P0) / sqrt(rho0 + delta_vac)
    double gnorm = 0.0;
};

/// Leray-projects R: P0 is the mean-zero solution of div grad P0 = -div R, so
/// R + grad P0 is discretely solenoidal.
CompatibilityReport compatibility_init(const ScalarField& rho0, const VectorField& u0, const DirectorField& d0,
                                       const ViscosityModel& mu, double delta_vac);

}  // namespace nlc
