#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlc/director.hpp"
#include "nlc/norms.hpp"
#include "nlc/scheme.hpp"

namespace nlc {

struct BlowupMonitorConfig {
    double q = 4.0;
    SerrinExponents velocity{4.0, 4.0, 2};  ///< (s1, r1)
    SerrinExponents director{4.0, 4.0, 2};  ///< (s2, r2)
    int n = 2;
    double threshold = kInf;  ///< report when M first exceeds this
};

struct ExponentGate {
    bool n_ok = false;
    bool q_ok = false;
    SerrinVerdict velocity;
    SerrinVerdict director;
    bool passed() const { return n_ok && q_ok && velocity.admissible && director.admissible; }
    /// Empty when passed; otherwise the reasons, one per failed condition.
    std::vector<std::string> reasons;
};

/// Checks q > n and the Serrin condition for both pairs with the configured n.
ExponentGate check_exponents(const BlowupMonitorConfig& cfg);

/// Instantaneous spatial norms feeding the monitors.
struct MonitorSample {
    double t = 0.0;
    double grad_rho_Lq = 0.0;   ///< ||grad rho||_{L^q}
    double u_weak = 0.0;        ///< ||u||_{L^{r1}_w}
    double grad_d_weak = 0.0;   ///< ||grad d||_{L^{r2}_w}
};

MonitorSample sample_state(const FlowState& s, const BlowupMonitorConfig& cfg);

/// Cumulative values over (0, t).
struct MonitorValues {
    double t = 0.0;
    double grad_rho = 0.0;  ///< ||grad rho||_{L^inf(0,t;L^q)}
    double u = 0.0;         ///< ||u||_{L^{s1}(0,t;L^{r1}_w)}
    double grad_d = 0.0;    ///< ||grad d||_{L^{s2}(0,t;L^{r2}_w)}
    double M = 0.0;         ///< all three factors
    double M_velocity = 0.0;  ///< density + velocity factors
    double M1 = 0.0;        ///< density + director factors (two-dimensional form)
    /// The value reported as M_quantity: M1 for n = 2, M for n = 3.
    double reported(int n) const { return n == 2 ? M1 : M; }
};

/// Streaming accumulator: running max for the L^inf-in-time factor and
/// trapezoid power sums for the Bochner factors.
class BlowupMonitor {
public:
    /// Throws ConfigError when the exponent gate fails.
    explicit BlowupMonitor(BlowupMonitorConfig cfg);

    void update(const FlowState& s);
    void update(const MonitorSample& s);

    const BlowupMonitorConfig& config() const { return cfg_; }
    const std::vector<MonitorValues>& history() const { return history_; }
    const std::vector<MonitorSample>& samples() const { return samples_; }
    MonitorValues current() const { return history_.empty() ? MonitorValues{} : history_.back(); }
    /// First time M_quantity exceeded the threshold.
    std::optional<double> threshold_crossed() const { return crossed_; }
    std::string report_json() const;

private:
    BlowupMonitorConfig cfg_;
    std::vector<MonitorSample> samples_;
    std::vector<MonitorValues> history_;
    double max_grad_rho_ = 0.0;
    double sum_u_ = 0.0;
    double sum_d_ = 0.0;
    double max_u_ = 0.0;
    double max_d_ = 0.0;
    std::optional<double> crossed_;
};

/// Brute-force recomputation from a sample series: NormSeries plus
/// bochner_norm over the whole prefix, independently of the streaming sums.
std::vector<MonitorValues> recompute_monitors(std::span<const MonitorSample> samples, const BlowupMonitorConfig& cfg);

struct BudgetSlice {
    double t = 0.0;
    double grad_d_L4_4 = 0.0;     ///< ||grad d||_{L^4}^4
    double grad2_d_sq = 0.0;      ///< ||grad^2 d||_{L^2}^2
    double pole_distance = 0.0;   ///< ||d -+ e_i||_{L^inf}
    double bound_terms = 0.0;     ///< ||d - e||^4_inf + ||lap d + |grad d|^2 d||^2 + ||d||^2_{H^1}
};

struct L4Budget {
    double budget = 0.0;             ///< int ||grad d||^4_{L^4} dt
    double fitted_constant = 0.0;    ///< max_t ||grad^2 d||^2 / bound_terms
    double explicit_constant = 0.0;  ///< C1 max(C2, 1) / (1 - C1 C2 eps^2), inf if the gate fails
    double gn_bound = 0.0;           ///< int C2 (C_fit bound_terms eps^2 + eps^4) dt
    std::vector<BudgetSlice> slices;
    bool dominated() const { return budget <= gn_bound && fitted_constant <= explicit_constant; }
};

/// Time-integrated fourth power of ||grad d||_{L^4} against the per-slice
/// elliptic bound; e = +-e_i per branch. Needs >= 2 slices.
L4Budget grad_d_L4_budget(std::span<const DirectorField> series, std::span<const double> times, int component,
                          MpBranch branch, double c1, double c2);

/// (||u||_{H^2} + ||P||_{H^1}) / (||F||_{L^2} (1 + ||grad rho||_{L^q})^{q/(q-n)}),
/// nullopt when F = 0.
std::optional<double> regularity_ratio(const VectorField& u, const ScalarField& p, const VectorField& force,
                                       const ScalarField& rho, double q, int n = 2);

}  // namespace nlc
