#include "nlc/director.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "nlc/errors.hpp"
#include "nlc/mac_system.hpp"
#include "nlc/norms.hpp"
#include "nlc/operators.hpp"

namespace nlc {

struct DirectorStepper::Impl {
    SpMat a;
    Eigen::SimplicialLDLT<SpMat> ldlt;
    double norm_inf = 0.0;
};

DirectorStepper::DirectorStepper(const Grid& g, double dt, const DirectorOptions& opt)
    : grid_(g), dt_(dt), opt_(opt), impl_(std::make_unique<Impl>()) {
    if (!(dt > 0.0)) throw ConfigError(fmt::format("dt = {} must be > 0", dt));
    const MacOperators ops(g);
    impl_->a = ops.poisson(Vec::Ones(ops.index().size()));
    for (Eigen::Index i = 0; i < impl_->a.rows(); ++i) impl_->a.coeffRef(i, i) += 1.0 / dt;
    impl_->ldlt.compute(impl_->a);
    for (Eigen::Index i = 0; i < impl_->a.outerSize(); ++i) {
        double row = 0.0;
        for (SpMat::InnerIterator it(impl_->a, i); it; ++it) row += std::abs(it.value());
        impl_->norm_inf = std::max(impl_->norm_inf, row);
    }
    if (impl_->ldlt.info() != Eigen::Success) throw SolverError("director operator factorization failed");
}

DirectorStepper::~DirectorStepper() = default;
DirectorStepper::DirectorStepper(DirectorStepper&&) noexcept = default;
DirectorStepper& DirectorStepper::operator=(DirectorStepper&&) noexcept = default;

DirectorField DirectorStepper::step(const DirectorField& d_old, const DirectorField& source, const VectorField& v,
                                    DirectorStats* stats) const {
    const Grid& g = grid_;
    if (!(d_old.grid() == g)) throw ConfigError("director grid does not match the stepper");
    const DirectorField lap = laplacian(d_old);
    const ScalarField gs = grad_sq(source);
    const bool moving = v.max_abs() > 0.0;
    const DirectorField conv = moving ? convective_derivative(source, v) : DirectorField(g, source.components());
    DirectorField out = d_old;
    DirectorStats st;
    Vec rhs(static_cast<Eigen::Index>(g.cells()));
    for (int k = 0; k < d_old.components(); ++k) {
        for (std::size_t c = 0; c < g.cells(); ++c)
            rhs[static_cast<Eigen::Index>(c)] = lap.component(k).values()[c] +
                                                gs.values()[c] * source.component(k).values()[c] -
                                                conv.component(k).values()[c];
        if (rhs.squaredNorm() == 0.0) continue;
        const Vec inc = impl_->ldlt.solve(rhs);
        const double res = (impl_->a * inc - rhs).lpNorm<Eigen::Infinity>() /
                           (impl_->norm_inf * inc.lpNorm<Eigen::Infinity>() + rhs.lpNorm<Eigen::Infinity>());
        if (impl_->ldlt.info() != Eigen::Success || !(res <= opt_.tol))
            throw SolverError(fmt::format("director component {} solve missed tol {:.1e}: residual {:.3e}", k,
                                          opt_.tol, res));
        st.iterations = 1;
        st.residual = std::max(st.residual, res);
        for (std::size_t c = 0; c < g.cells(); ++c) out.component(k).values()[c] += inc[static_cast<Eigen::Index>(c)];
    }
    if (stats) *stats = st;
    return out;
}

DirectorField director_step(const DirectorField& d_old, const DirectorField& source, const VectorField& v, double dt,
                            const DirectorOptions& opt, DirectorStats* stats) {
    return DirectorStepper(d_old.grid(), dt, opt).step(d_old, source, v, stats);
}

DirectorField director_step(const DirectorField& d, const VectorField& v, double dt, const DirectorOptions& opt,
                            DirectorStats* stats) {
    return director_step(d, d, v, dt, opt, stats);
}

std::pair<DirectorField, double> renormalize(const DirectorField& d) {
    const Grid& g = d.grid();
    DirectorField out = d;
    double dev = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double n = d.norm_at(i, j);
            if (!(n > 0.5))
                throw SolverError(fmt::format("director collapsed: |d| = {} at cell ({}, {})", n, i, j));
            dev = std::max(dev, std::abs(n - 1.0));
            for (int k = 0; k < d.components(); ++k) out.component(k)(i, j) = d.component(k)(i, j) / n;
        }
    return {std::move(out), dev};
}

OrthogonalityResiduals orthogonality_residuals(const DirectorField& d, const DirectorField& d_prev,
                                               const VectorField& v, double dt) {
    const Grid& g = d.grid();
    const ScalarField gs = grad_sq(d);
    const DirectorField lap = laplacian(d);
    const DirectorField conv = convective_derivative(d, v);
    ScalarField a(g), b(g);
    for (std::size_t c = 0; c < g.cells(); ++c) {
        double dot_t = 0.0, dot_l = 0.0;
        for (int k = 0; k < d.components(); ++k) {
            const double dk = d.component(k).values()[c];
            dot_t += ((dk - d_prev.component(k).values()[c]) / dt + conv.component(k).values()[c]) * dk;
            dot_l += dk * lap.component(k).values()[c];
        }
        a.values()[c] = dot_t * gs.values()[c];
        b.values()[c] = dot_l + gs.values()[c];
    }
    return {lp_norm(a, 1.0), lp_norm(b, 1.0)};
}

ScalarField harmonic_map_tension(const DirectorField& d) {
    const Grid& g = d.grid();
    const ScalarField gs = grad_sq(d);
    const DirectorField lap = laplacian(d);
    ScalarField out(g);
    for (std::size_t c = 0; c < g.cells(); ++c) {
        double s = 0.0;
        for (int k = 0; k < d.components(); ++k) {
            const double t = lap.component(k).values()[c] + gs.values()[c] * d.component(k).values()[c];
            s += t * t;
        }
        out.values()[c] = std::sqrt(s);
    }
    return out;
}

MaxPrincipleMonitor::MaxPrincipleMonitor(const DirectorField& d0, int component, double lower, MpBranch branch,
                                         double mp_tol)
    : comp_(component), lower_(lower), branch_(branch), tol_(mp_tol) {
    if (component < 0 || component >= d0.components())
        throw ConfigError(fmt::format("component {} outside 1..{}", component + 1, d0.components()));
    if (!(lower >= 0.0 && lower <= 1.0)) throw ConfigError(fmt::format("lower bound {} must lie in [0, 1]", lower));
    if (!(mp_tol > 0.0)) throw ConfigError("mp_tol must be > 0");
    const ScalarField& c = d0.component(component);
    const double lo = c.min(), hi = c.max();
    const bool ok = branch == MpBranch::upper ? (lo >= lower && hi <= 1.0 + 1e-14)
                                              : (hi <= -lower && lo >= -1.0 - 1e-14);
    if (!ok)
        throw ConfigError(fmt::format("initial d_{} in [{}, {}] violates the hypothesis [{}, {}]", component + 1, lo,
                                      hi, lower_bound(), upper_bound()));
    observe(0.0, d0);
}

double MaxPrincipleMonitor::lower_bound() const { return branch_ == MpBranch::upper ? lower_ : -1.0; }
double MaxPrincipleMonitor::upper_bound() const { return branch_ == MpBranch::upper ? 1.0 : -lower_; }

void MaxPrincipleMonitor::observe(double t, const DirectorField& d) {
    t_.push_back(t);
    min_.push_back(d.component(comp_).min());
    max_.push_back(d.component(comp_).max());
}

double MaxPrincipleMonitor::worst_excess() const {
    double w = -kInf;
    for (std::size_t k = 0; k < t_.size(); ++k)
        w = std::max({w, lower_bound() - min_[k], max_[k] - upper_bound()});
    return w;
}

bool MaxPrincipleMonitor::passed() const { return worst_excess() <= tol_; }

std::string MaxPrincipleMonitor::report() const {
    const double lo = *std::min_element(min_.begin(), min_.end());
    const double hi = *std::max_element(max_.begin(), max_.end());
    return fmt::format("d_{} stayed in [{:.12g}, {:.12g}] against [{}, {}] with tol {:.1e}: {}", comp_ + 1, lo, hi,
                       lower_bound(), upper_bound(), tol_, passed() ? "pass" : "FAIL");
}

GeometricThreshold geometric_threshold(double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw ConfigError("C1 and C2 must be > 0");
    const double th = 1.0 - 1.0 / (2.0 * c1 * c2);
    return {th, 2.0 * (1.0 - th)};
}

double distance_to_pole(const DirectorField& d, int component, MpBranch branch) {
    const double s = branch == MpBranch::upper ? 1.0 : -1.0;
    const Grid& g = d.grid();
    double w = 0.0;
    for (std::size_t c = 0; c < g.cells(); ++c) {
        double q = 0.0;
        for (int k = 0; k < d.components(); ++k) {
            const double e = d.component(k).values()[c] - (k == component ? s : 0.0);
            q += e * e;
        }
        w = std::max(w, q);
    }
    return std::sqrt(w);
}

double geometric_gate(const DirectorField& d, int component, MpBranch branch, double c1, double c2) {
    const double e = distance_to_pole(d, component, branch);
    return c1 * c2 * e * e;
}

}  // namespace nlc
