#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nlc/fields.hpp"

namespace nlc {

struct DirectorOptions {
    double tol = 1e-12;  ///< normwise backward error per component solve
};

struct DirectorStats {
    int iterations = 0;     ///< solves performed per component (1 when any)
    double residual = 0.0;  ///< max backward error over components
};

/// Factorized-once (sparse LDLT) heat operator I/dt - lap for repeated director steps at a
/// fixed (grid, dt).
class DirectorStepper {
public:
    DirectorStepper(const Grid& g, double dt, const DirectorOptions& opt = {});
    ~DirectorStepper();
    DirectorStepper(DirectorStepper&&) noexcept;
    DirectorStepper& operator=(DirectorStepper&&) noexcept;

    DirectorField step(const DirectorField& d_old, const DirectorField& source, const VectorField& v,
                       DirectorStats* stats = nullptr) const;
    double dt() const { return dt_; }
    const Grid& grid() const { return grid_; }

private:
    struct Impl;
    Grid grid_;
    double dt_;
    DirectorOptions opt_;
    std::unique_ptr<Impl> impl_;
};

/// Backward-Euler harmonic-map heat step with lagged sources:
///   (I/dt - lap) d_new = d_old/dt + |grad s|^2 s - (v . grad) s,  s = source,
/// homogeneous Neumann walls, no renormalization. Solved in increment form so
/// constant fields are reproduced exactly. Throws SolverError when a component
/// solve misses the tolerance.
DirectorField director_step(const DirectorField& d_old, const DirectorField& source, const VectorField& v, double dt,
                            const DirectorOptions& opt = {}, DirectorStats* stats = nullptr);
/// The linearized step with sources from the previous level.
DirectorField director_step(const DirectorField& d, const VectorField& v, double dt, const DirectorOptions& opt = {},
                            DirectorStats* stats = nullptr);

/// d / |d| per cell with the pre-projection max | |d| - 1 |. Throws
/// SolverError if some |d| <= 0.5.
std::pair<DirectorField, double> renormalize(const DirectorField& d);

struct OrthogonalityResiduals {
    double r1 = 0.0;  ///< || (d_t + v . grad d) . d |grad d|^2 ||_{L^1}
    double r2 = 0.0;  ///< || d . lap d + |grad d|^2 ||_{L^1}
};

OrthogonalityResiduals orthogonality_residuals(const DirectorField& d, const DirectorField& d_prev,
                                               const VectorField& v, double dt);

/// |lap d + |grad d|^2 d| per cell, the director dissipation density.
ScalarField harmonic_map_tension(const DirectorField& d);

enum class MpBranch {
    upper,  ///< 0 <= lower <= d_i <= 1
    lower,  ///< -1 <= d_i <= -lower <= 0
};

/// Tracks min/max of one director component over a run against the bounds of
/// the component maximum principle.
class MaxPrincipleMonitor {
public:
    /// `component` is zero-based. Throws ConfigError if `d0` misses the
    /// hypothesis of the chosen branch.
    MaxPrincipleMonitor(const DirectorField& d0, int component, double lower, MpBranch branch, double mp_tol = 1e-6);

    void observe(double t, const DirectorField& d);
    bool passed() const;

    const std::vector<double>& times() const { return t_; }
    const std::vector<double>& minima() const { return min_; }
    const std::vector<double>& maxima() const { return max_; }
    double lower_bound() const;
    double upper_bound() const;
    /// Largest violation of the bounds so far (<= 0 when inside).
    double worst_excess() const;
    std::string report() const;

private:
    int comp_;
    double lower_;
    MpBranch branch_;
    double tol_;
    std::vector<double> t_, min_, max_;
};

struct GeometricThreshold {
    double threshold = 0.0;  ///< 1 - 1 / (2 C1 C2)
    double dist_sq_bound = 0.0;  ///< 2 (1 - threshold) >= ||d - e||_inf^2 for d_i >= threshold
};

GeometricThreshold geometric_threshold(double c1, double c2);

/// ||d - e||_{L^inf} with e = +e_i (upper branch) or -e_i (lower branch).
double distance_to_pole(const DirectorField& d, int component, MpBranch branch);

/// C1 C2 ||d - e||_inf^2 (the gate passes when < 1).
double geometric_gate(const DirectorField& d, int component, MpBranch branch, double c1, double c2);

}  // namespace nlc
