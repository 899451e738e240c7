#include "nlc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "nlc/errors.hpp"
#include "nlc/operators.hpp"

namespace nlc {

std::vector<double> magnitudes(std::span<const ScalarField> comps) {
    if (comps.empty()) return {};
    std::vector<double> m(comps.front().size(), 0.0);
    for (const auto& c : comps)
        for (std::size_t k = 0; k < m.size(); ++k) m[k] += c.values()[k] * c.values()[k];
    for (double& x : m) x = std::sqrt(x);
    return m;
}

std::vector<double> magnitudes(const VectorField& u) {
    const CellVector c = cell_velocity(u);
    const ScalarField both[] = {c.x, c.y};
    return magnitudes(both);
}

double lp_norm(std::span<const double> mags, double cell_area, double p) {
    if (!(p >= 1.0)) throw ConfigError(fmt::format("L^p norm needs p >= 1 (got {})", p));
    if (std::isinf(p)) {
        double m = 0.0;
        for (double a : mags) m = std::max(m, std::abs(a));
        return m;
    }
    double s = 0.0;
    if (p == 2.0) {
        for (double a : mags) s += a * a;
        return std::sqrt(s * cell_area);
    }
    for (double a : mags) s += std::pow(std::abs(a), p);
    return std::pow(s * cell_area, 1.0 / p);
}

double lp_norm(std::span<const ScalarField> comps, double p) {
    return lp_norm(magnitudes(comps), comps.front().grid().cell_area(), p);
}
double lp_norm(const ScalarField& f, double p) { return lp_norm(f.values(), f.grid().cell_area(), p); }
double lp_norm(const DirectorField& d, double p) { return lp_norm(std::span<const ScalarField>(d.comps()), p); }
double lp_norm(const VectorField& u, double p) { return lp_norm(magnitudes(u), u.grid().cell_area(), p); }

double weak_lp_norm(std::span<const double> mags, double cell_area, double p) {
    if (!(p > 1.0)) throw ConfigError(fmt::format("weak L^p norm needs p > 1 (got {})", p));
    std::vector<double> a(mags.size());
    std::transform(mags.begin(), mags.end(), a.begin(), [](double x) { return std::abs(x); });
    if (std::isinf(p)) return a.empty() ? 0.0 : *std::max_element(a.begin(), a.end());
    std::sort(a.begin(), a.end(), std::greater<>());
    double best = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        best = std::max(best, a[k] * std::pow((k + 1) * cell_area, 1.0 / p));
    return best;
}

double weak_lp_norm(std::span<const ScalarField> comps, double p) {
    return weak_lp_norm(magnitudes(comps), comps.front().grid().cell_area(), p);
}
double weak_lp_norm(const ScalarField& f, double p) { return weak_lp_norm(f.values(), f.grid().cell_area(), p); }
double weak_lp_norm(const DirectorField& d, double p) { return weak_lp_norm(std::span<const ScalarField>(d.comps()), p); }
double weak_lp_norm(const VectorField& u, double p) { return weak_lp_norm(magnitudes(u), u.grid().cell_area(), p); }

namespace {

double binomial(int k, int a) {
    double r = 1.0;
    for (int t = 1; t <= a; ++t) r = r * (k - a + t) / t;
    return r;
}

}  // namespace

double sobolev_seminorm(std::span<const ScalarField> comps, int k, double p) {
    if (k < 1 || k > 3) throw ConfigError(fmt::format("Sobolev order must be 1, 2 or 3 (got {})", k));
    const Grid& g = comps.front().grid();
    std::vector<double> sq(g.cells(), 0.0);
    for (const auto& c : comps)
        for (int a = 0; a <= k; ++a) {
            // ordered multi-indices with `a` x-derivatives occur binomial(k, a) times
            const double w = binomial(k, a);
            const ScalarField dv = derivative(c, a, k - a);
            for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += w * dv.values()[i] * dv.values()[i];
        }
    for (double& x : sq) x = std::sqrt(x);
    return lp_norm(sq, g.cell_area(), p);
}

double sobolev_seminorm(const ScalarField& f, int k, double p) {
    return sobolev_seminorm(std::span<const ScalarField>(&f, 1), k, p);
}
double sobolev_seminorm(const DirectorField& d, int k, double p) {
    return sobolev_seminorm(std::span<const ScalarField>(d.comps()), k, p);
}

double sobolev_norm(std::span<const ScalarField> comps, int k, double p) {
    double acc = lp_norm(comps, p);
    if (std::isinf(p)) {
        for (int j = 1; j <= k; ++j) acc = std::max(acc, sobolev_seminorm(comps, j, p));
        return acc;
    }
    acc = std::pow(acc, p);
    for (int j = 1; j <= k; ++j) acc += std::pow(sobolev_seminorm(comps, j, p), p);
    return std::pow(acc, 1.0 / p);
}

double sobolev_norm(const ScalarField& f, int k, double p) {
    return sobolev_norm(std::span<const ScalarField>(&f, 1), k, p);
}
double sobolev_norm(const DirectorField& d, int k, double p) {
    return sobolev_norm(std::span<const ScalarField>(d.comps()), k, p);
}

void NormSeries::push(double t, double v) {
    if (!times.empty() && !(t > times.back()))
        throw ConfigError(fmt::format("series '{}': times must increase ({} after {})", label, t, times.back()));
    if (!(v >= 0.0) || !std::isfinite(v))
        throw ConfigError(fmt::format("series '{}': norm samples must be finite and >= 0 (got {})", label, v));
    times.push_back(t);
    values.push_back(v);
}

double bochner_norm(const NormSeries& series, double s) {
    if (series.values.empty()) throw ConfigError("Bochner norm of an empty series");
    if (!(s >= 1.0)) throw ConfigError(fmt::format("Bochner exponent must be >= 1 (got {})", s));
    if (std::isinf(s)) return *std::max_element(series.values.begin(), series.values.end());
    if (series.values.size() < 2) throw ConfigError("Bochner norm needs at least two samples");
    double acc = 0.0;
    for (std::size_t k = 1; k < series.values.size(); ++k)
        acc += 0.5 * (series.times[k] - series.times[k - 1]) *
               (std::pow(series.values[k], s) + std::pow(series.values[k - 1], s));
    return std::pow(acc, 1.0 / s);
}

SerrinVerdict serrin_check(const SerrinExponents& e) {
    const double load = 2.0 / e.s + e.n / e.r;
    const double slack = 1.0 - load;
    // points on the critical line are admissible; allow for rounding in 2/s + n/r
    return {e.r > e.n && slack >= -1e-12, slack};
}

}  // namespace nlc
