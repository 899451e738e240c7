#include "nlc/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "nlc/errors.hpp"
#include "nlc/operators.hpp"

namespace nlc {

std::string InequalityReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["lhs"] = lhs;
    j["rhs_without_constant"] = rhs_without_constant;
    j["fitted_constant"] = fitted_constant;
    j["context"] = context;
    return j.dump();
}

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double h1_sq(const ScalarField& f) {
    const double a = lp_norm(f, 2.0), b = sobolev_seminorm(f, 1, 2.0);
    return a * a + b * b;
}

double sq(double x) { return x * x; }

}  // namespace

InequalityReport holder_lorentz_check(const ScalarField& f, const ScalarField& g, double p1, double p2) {
    if (!(p1 > 1.0) || !(p2 > 1.0)) throw ConfigError("Lorentz Hoelder check needs p1, p2 > 1");
    const double inv_p = 1.0 / p1 + 1.0 / p2;
    if (!(inv_p < 1.0))
        throw ConfigError(fmt::format("incompatible exponents: 1/p1 + 1/p2 = {} leaves p <= 1", inv_p));
    const double p = 1.0 / inv_p;
    ScalarField fg(f.grid());
    for (std::size_t k = 0; k < fg.size(); ++k) fg.values()[k] = f.values()[k] * g.values()[k];
    InequalityReport rep;
    rep.name = "holder_lorentz";
    rep.lhs = weak_lp_norm(fg, p);
    rep.rhs_without_constant = weak_lp_norm(f, p1) * weak_lp_norm(g, p2);
    rep.fitted_constant = ratio_or_zero(rep.lhs, rep.rhs_without_constant);
    rep.context = {{"p", p}, {"p1", p1}, {"p2", p2}};
    return rep;
}

InequalityReport product_absorption_check(std::span<const std::pair<ScalarField, ScalarField>> family, double r, double eps,
                               int n) {
    if (!(r > n)) throw ConfigError(fmt::format("product absorption check needs r > n (got r = {}, n = {})", r, n));
    if (!(eps > 0.0)) throw ConfigError("product absorption check needs eps > 0");
    const double power = std::isinf(r) ? 2.0 : 2.0 * r / (r - n);
    InequalityReport rep;
    rep.name = "product_absorption";
    rep.context = {{"r", r}, {"eps", eps}, {"n", static_cast<double>(n)},
                   {"family_size", static_cast<double>(family.size())}};
    double worst = 0.0;
    for (const auto& [f, g] : family) {
        ScalarField fg(f.grid());
        for (std::size_t k = 0; k < fg.size(); ++k) fg.values()[k] = f.values()[k] * g.values()[k];
        const double lhs = sq(lp_norm(fg, 2.0));
        const double absorbed = eps * h1_sq(g);
        const double rest = std::pow(weak_lp_norm(f, r), power) * sq(lp_norm(g, 2.0));
        double needed = 0.0;
        if (lhs > absorbed) needed = rest > 0.0 ? (lhs - absorbed) / rest : kInf;
        if (needed >= worst) {
            worst = needed;
            rep.lhs = lhs;
            rep.rhs_without_constant = rest;
        }
    }
    rep.fitted_constant = worst;
    return rep;
}

InequalityReport log_sobolev_check(std::span<const FieldSlice> history, double q) {
    if (!(q > 2.0)) throw ConfigError(fmt::format("log-Sobolev check needs q > 2 (got {})", q));
    if (history.size() < 2) throw ConfigError("log-Sobolev check needs at least two slices");
    NormSeries linf{"Linf", {}, {}}, h1{"H1", {}, {}}, w1q{"W1q", {}, {}};
    for (const auto& s : history) {
        linf.push(s.t, lp_norm(s.comps, kInf));
        h1.push(s.t, sobolev_norm(s.comps, 1, 2.0));
        w1q.push(s.t, sobolev_norm(s.comps, 1, q));
    }
    InequalityReport rep;
    rep.name = "log_sobolev";
    rep.lhs = sq(bochner_norm(linf, 2.0));
    rep.rhs_without_constant = 1.0 + sq(bochner_norm(h1, 2.0)) * std::log(std::numbers::e + bochner_norm(w1q, 2.0));
    rep.fitted_constant = rep.lhs / rep.rhs_without_constant;
    rep.context = {{"q", q}, {"t0", history.front().t}, {"t1", history.back().t}};
    return rep;
}

double elliptic_ratio(const ScalarField& f) {
    const double hess = sq(sobolev_seminorm(f, 2, 2.0));
    const double lap = sq(lp_norm(laplacian(f), 2.0));
    return ratio_or_zero(hess, lap + h1_sq(f));
}

double gn_ratio(const ScalarField& f) {
    const double grad4 = std::pow(sobolev_seminorm(f, 1, 4.0), 4);
    const double hess = sq(sobolev_seminorm(f, 2, 2.0));
    const double sup = lp_norm(f, kInf);
    return ratio_or_zero(grad4, hess * sup * sup + std::pow(sup, 4));
}

namespace {

class CosineBasis {
public:
    CosineBasis(const Grid& g, int modes) : g_(g), m_(modes + 1) {
        cx_.resize(static_cast<std::size_t>(m_) * g.nx());
        cy_.resize(static_cast<std::size_t>(m_) * g.ny());
        for (int k = 0; k < m_; ++k) {
            for (int i = 0; i < g.nx(); ++i) cx_[k * g.nx() + i] = std::cos(k * std::numbers::pi * g.xc(i) / g.lx());
            for (int j = 0; j < g.ny(); ++j) cy_[k * g.ny() + j] = std::cos(k * std::numbers::pi * g.yc(j) / g.ly());
        }
    }

    int size() const { return m_ * m_; }

    ScalarField field(const std::vector<double>& a) const {
        ScalarField f(g_, 0.0, ScalarBc::neumann());
        for (int l = 0; l < m_; ++l)
            for (int k = 0; k < m_; ++k) {
                const double c = a[l * m_ + k];
                if (c == 0.0) continue;
                for (int j = 0; j < g_.ny(); ++j) {
                    const double wy = c * cy_[l * g_.ny() + j];
                    for (int i = 0; i < g_.nx(); ++i) f(i, j) += wy * cx_[k * g_.nx() + i];
                }
            }
        return f;
    }

    std::vector<double> draw(std::mt19937_64& rng) const {
        std::normal_distribution<double> n01;
        std::vector<double> a(size());
        for (int l = 0; l < m_; ++l)
            for (int k = 0; k < m_; ++k) a[l * m_ + k] = n01(rng) / (1.0 + k + l);
        return a;
    }

private:
    Grid g_;
    int m_;
    std::vector<double> cx_, cy_;
};

void normalize(std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    s = std::sqrt(s);
    if (s > 0.0)
        for (double& x : a) x /= s;
}

template <class Ratio>
double maximize(const Grid& g, const EstimatorOptions& opt, std::span<const ScalarField> include, Ratio ratio) {
    if (opt.trials < 1) throw ConfigError("constant estimators need at least one trial");
    double best = 0.0;
    for (const auto& f : include) best = std::max(best, ratio(f));
    const CosineBasis basis(g, opt.modes);
    std::vector<double> pure(basis.size(), 0.0), best_pure;
    double best_pure_ratio = -1.0;
    for (int m = 1; m < basis.size(); ++m) {
        pure.assign(basis.size(), 0.0);
        pure[m] = 1.0;
        const double r = ratio(basis.field(pure));
        if (r > best_pure_ratio) {
            best_pure_ratio = r;
            best_pure = pure;
        }
    }
    best = std::max(best, best_pure_ratio);
    for (int t = 0; t < opt.trials; ++t) {
        std::mt19937_64 rng((opt.seed << 32) + static_cast<std::uint64_t>(t));
        std::normal_distribution<double> n01;
        std::vector<double> a = basis.draw(rng);
        normalize(a);
        if (t % 2 == 1) {
            for (std::size_t k = 0; k < a.size(); ++k) a[k] = best_pure[k] + 0.25 * a[k];
            normalize(a);
        }
        double cur = ratio(basis.field(a));
        double sigma = 0.3;
        for (int s = 0; s < opt.ascent_steps; ++s) {
            std::vector<double> trial = a;
            for (double& x : trial) x += sigma * n01(rng);
            normalize(trial);
            const double r = ratio(basis.field(trial));
            if (r > cur) {
                cur = r;
                a = std::move(trial);
                sigma = std::min(1.0, sigma * 1.5);
            } else {
                sigma = std::max(1e-3, sigma * 0.85);
            }
        }
        best = std::max(best, cur);
    }
    return best;
}

}  // namespace

ScalarField random_neumann_field(const Grid& g, int modes, std::uint64_t seed) {
    const CosineBasis basis(g, modes);
    std::mt19937_64 rng(seed);
    return basis.field(basis.draw(rng));
}

VectorField random_noslip_field(const Grid& g, int modes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> a(static_cast<std::size_t>(modes) * modes);
    for (double& x : a) x = normal(rng);
    const double lx = g.lx(), ly = g.ly();
    return VectorField::from_stream_function(g, [&](double x, double y) {
        const double sx = std::sin(std::numbers::pi * x / lx), sy = std::sin(std::numbers::pi * y / ly);
        double s = 0.0;
        for (int k = 1; k <= modes; ++k)
            for (int l = 1; l <= modes; ++l)
                s += a[static_cast<std::size_t>(k - 1) * modes + (l - 1)] *
                     std::sin(k * std::numbers::pi * x / lx) * std::sin(l * std::numbers::pi * y / ly);
        return sx * sy * s;
    });
}

double estimate_elliptic_C1(const Grid& g, const EstimatorOptions& opt, std::span<const ScalarField> include) {
    return maximize(g, opt, include, [](const ScalarField& f) { return elliptic_ratio(f); });
}

double estimate_gn_C2(const Grid& g, const EstimatorOptions& opt, std::span<const ScalarField> include) {
    return maximize(g, opt, include, [](const ScalarField& f) { return gn_ratio(f); });
}

double KornReport::relative_gap() const {
    return half_gradient_sq > 0.0 ? std::abs(deformation_sq - half_gradient_sq) / half_gradient_sq : 0.0;
}

KornReport korn_identity_check(const VectorField& u) {
    const Grid& g = u.grid();
    if (u.bc() != VelocityBc::no_slip) throw ConfigError("Korn check needs a no-slip velocity field");
    for (int j = 0; j < g.ny(); ++j)
        if (u.ux(0, j) != 0.0 || u.ux(g.nx(), j) != 0.0) throw ConfigError("Korn check: wall-normal flux is nonzero");
    for (int i = 0; i < g.nx(); ++i)
        if (u.uy(i, 0) != 0.0 || u.uy(i, g.ny()) != 0.0) throw ConfigError("Korn check: wall-normal flux is nonzero");
    const double div = lp_norm(divergence(u), 2.0);
    if (div > 1e-10) throw ConfigError(fmt::format("Korn check: field is not solenoidal (||div u|| = {:.3e})", div));
    const TensorField du = deformation_tensor(u);
    const TensorField gu = velocity_gradient(u);
    KornReport rep;
    rep.deformation_sq = sq(lp_norm(du.frobenius(), 2.0));
    rep.half_gradient_sq = 0.5 * sq(lp_norm(gu.frobenius(), 2.0));
    return rep;
}

}  // namespace nlc
