#include "nlc/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <json.hpp>

#include "nlc/errors.hpp"
#include "nlc/operators.hpp"

namespace nlc {

namespace {

double sq(double x) { return x * x; }

nlohmann::json num(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

nlohmann::json pair_json(const SerrinExponents& e, const SerrinVerdict& v) {
    return {{"s", num(e.s)}, {"r", num(e.r)}, {"admissible", v.admissible}, {"slack", num(v.slack)}};
}

/// Streaming power sum of one Bochner factor; s = inf keeps the max.
void accumulate(double& sum, double& mx, double s, double prev, double cur, double dt) {
    mx = std::max(mx, cur);
    if (!std::isinf(s)) sum += 0.5 * dt * (std::pow(cur, s) + std::pow(prev, s));
}

double finish(double sum, double mx, double s) { return std::isinf(s) ? mx : std::pow(sum, 1.0 / s); }

std::vector<ScalarField> gradient_components(const DirectorField& d) {
    std::vector<ScalarField> out;
    for (int k = 0; k < d.components(); ++k) {
        CellVector g = gradient(d.component(k));
        out.push_back(std::move(g.x));
        out.push_back(std::move(g.y));
    }
    return out;
}

}  // namespace

ExponentGate check_exponents(const BlowupMonitorConfig& cfg) {
    ExponentGate g;
    g.n_ok = cfg.n == 2 || cfg.n == 3;
    if (!g.n_ok) g.reasons.push_back(fmt::format("n = {} must be 2 or 3", cfg.n));
    g.q_ok = cfg.q > cfg.n;
    if (!g.q_ok) g.reasons.push_back(fmt::format("q > n required (q = {}, n = {})", cfg.q, cfg.n));
    SerrinExponents v = cfg.velocity, d = cfg.director;
    v.n = d.n = cfg.n;
    g.velocity = serrin_check(v);
    g.director = serrin_check(d);
    if (!g.velocity.admissible)
        g.reasons.push_back(fmt::format("(s1, r1) = ({}, {}) fails 2/s + {}/r <= 1 with r > {} (slack {:.3g})", v.s, v.r,
                                        cfg.n, cfg.n, g.velocity.slack));
    if (!g.director.admissible)
        g.reasons.push_back(fmt::format("(s2, r2) = ({}, {}) fails 2/s + {}/r <= 1 with r > {} (slack {:.3g})", d.s, d.r,
                                        cfg.n, cfg.n, g.director.slack));
    return g;
}

MonitorSample sample_state(const FlowState& s, const BlowupMonitorConfig& cfg) {
    MonitorSample m;
    m.t = s.t;
    m.grad_rho_Lq = sobolev_seminorm(s.rho, 1, cfg.q);
    m.u_weak = weak_lp_norm(s.u, cfg.velocity.r);
    const std::vector<ScalarField> gd = gradient_components(s.d);
    m.grad_d_weak = weak_lp_norm(std::span<const ScalarField>(gd), cfg.director.r);
    return m;
}

BlowupMonitor::BlowupMonitor(BlowupMonitorConfig cfg) : cfg_(cfg) {
    const ExponentGate g = check_exponents(cfg_);
    if (!g.passed()) {
        std::string msg = "monitor exponents rejected:";
        for (const auto& r : g.reasons) msg += " " + r + ";";
        throw ConfigError(msg);
    }
}

void BlowupMonitor::update(const FlowState& s) { update(sample_state(s, cfg_)); }

void BlowupMonitor::update(const MonitorSample& s) {
    if (!samples_.empty() && !(s.t > samples_.back().t))
        throw ConfigError(fmt::format("monitor samples must advance in time ({} after {})", s.t, samples_.back().t));
    max_grad_rho_ = std::max(max_grad_rho_, s.grad_rho_Lq);
    if (samples_.empty()) {
        max_u_ = s.u_weak;
        max_d_ = s.grad_d_weak;
    } else {
        const MonitorSample& p = samples_.back();
        accumulate(sum_u_, max_u_, cfg_.velocity.s, p.u_weak, s.u_weak, s.t - p.t);
        accumulate(sum_d_, max_d_, cfg_.director.s, p.grad_d_weak, s.grad_d_weak, s.t - p.t);
    }
    samples_.push_back(s);
    MonitorValues v;
    v.t = s.t;
    v.grad_rho = max_grad_rho_;
    v.u = finish(sum_u_, max_u_, cfg_.velocity.s);
    v.grad_d = finish(sum_d_, max_d_, cfg_.director.s);
    v.M = v.grad_rho + v.u + v.grad_d;
    v.M_velocity = v.grad_rho + v.u;
    v.M1 = v.grad_rho + v.grad_d;
    if (!crossed_ && v.reported(cfg_.n) > cfg_.threshold) crossed_ = s.t;
    history_.push_back(v);
}

std::vector<MonitorValues> recompute_monitors(std::span<const MonitorSample> samples, const BlowupMonitorConfig& cfg) {
    std::vector<MonitorValues> out;
    NormSeries rho{"grad_rho", {}, {}}, u{"u", {}, {}}, d{"grad_d", {}, {}};
    for (const auto& s : samples) {
        rho.push(s.t, s.grad_rho_Lq);
        u.push(s.t, s.u_weak);
        d.push(s.t, s.grad_d_weak);
        MonitorValues v;
        v.t = s.t;
        v.grad_rho = bochner_norm(rho, kInf);
        auto factor = [](const NormSeries& ser, double e) {
            if (ser.values.size() < 2) return std::isinf(e) ? ser.values.front() : 0.0;
            return bochner_norm(ser, e);
        };
        v.u = factor(u, cfg.velocity.s);
        v.grad_d = factor(d, cfg.director.s);
        v.M = v.grad_rho + v.u + v.grad_d;
        v.M_velocity = v.grad_rho + v.u;
        v.M1 = v.grad_rho + v.grad_d;
        out.push_back(v);
    }
    return out;
}

std::string BlowupMonitor::report_json() const {
    const ExponentGate g = check_exponents(cfg_);
    const MonitorValues v = current();
    nlohmann::json j;
    j["exponents"] = {{"q", num(cfg_.q)},
                      {"n", cfg_.n},
                      {"velocity", pair_json(cfg_.velocity, g.velocity)},
                      {"director", pair_json(cfg_.director, g.director)}};
    j["gate"] = {{"passed", g.passed()}, {"reasons", g.reasons}};
    j["samples"] = samples_.size();
    j["t_final"] = v.t;
    j["factors"] = {{"grad_rho_Linf_Lq", num(v.grad_rho)},
                    {"u_Ls1_Lr1w", num(v.u)},
                    {"grad_d_Ls2_Lr2w", num(v.grad_d)}};
    j["M"] = num(v.M);
    j["M_velocity_only"] = num(v.M_velocity);
    j["M1"] = num(v.M1);
    j["M_quantity"] = num(v.reported(cfg_.n));
    j["density_only"] = num(v.grad_rho);
    j["velocity_factor_in_M_quantity"] = cfg_.n != 2;
    j["threshold"] = num(cfg_.threshold);
    j["threshold_crossed"] = crossed_.has_value();
    j["threshold_crossed_at"] = crossed_ ? nlohmann::json(*crossed_) : nlohmann::json(nullptr);
    return j.dump(2);
}

L4Budget grad_d_L4_budget(std::span<const DirectorField> series, std::span<const double> times, int component,
                          MpBranch branch, double c1, double c2) {
    if (series.size() < 2 || times.size() != series.size())
        throw ConfigError("the L4 budget needs at least two director slices with matching times");
    L4Budget b;
    double eps_max = 0.0;
    NormSeries l4{"grad_d_L4_4", {}, {}};
    for (std::size_t k = 0; k < series.size(); ++k) {
        const DirectorField& d = series[k];
        BudgetSlice s;
        s.t = times[k];
        const std::vector<ScalarField> gd = gradient_components(d);
        s.grad_d_L4_4 = std::pow(lp_norm(std::span<const ScalarField>(gd), 4.0), 4);
        s.grad2_d_sq = sq(sobolev_seminorm(d, 2, 2.0));
        s.pole_distance = distance_to_pole(d, component, branch);
        const double h1 = sq(sobolev_norm(d, 1, 2.0));
        s.bound_terms = std::pow(s.pole_distance, 4) + sq(lp_norm(harmonic_map_tension(d), 2.0)) + h1;
        b.fitted_constant = std::max(b.fitted_constant, s.grad2_d_sq / s.bound_terms);
        eps_max = std::max(eps_max, s.pole_distance);
        l4.push(s.t, s.grad_d_L4_4);
        b.slices.push_back(s);
    }
    b.budget = bochner_norm(l4, 1.0);
    const double gate = c1 * c2 * eps_max * eps_max;
    b.explicit_constant = gate < 1.0 ? c1 * std::max(c2, 1.0) / (1.0 - gate) : kInf;
    for (std::size_t k = 1; k < b.slices.size(); ++k) {
        auto term = [&](const BudgetSlice& s) {
            const double e2 = sq(s.pole_distance);
            return c2 * (b.fitted_constant * s.bound_terms * e2 + e2 * e2);
        };
        b.gn_bound += 0.5 * (b.slices[k].t - b.slices[k - 1].t) * (term(b.slices[k]) + term(b.slices[k - 1]));
    }
    return b;
}

std::optional<double> regularity_ratio(const VectorField& u, const ScalarField& p, const VectorField& force,
                                       const ScalarField& rho, double q, int n) {
    if (!(q > n)) throw ConfigError("q > n required");
    const double f = face_l2_norm(force);
    if (f == 0.0) return std::nullopt;
    const CellVector uc = cell_velocity(u);
    const std::vector<ScalarField> comps{uc.x, uc.y};
    const double num_ = sobolev_norm(std::span<const ScalarField>(comps), 2, 2.0) + sobolev_norm(p, 1, 2.0);
    const double weight = std::pow(1.0 + sobolev_seminorm(rho, 1, q), q / (q - n));
    return num_ / (f * weight);
}

}  // namespace nlc
