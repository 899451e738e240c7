#include "nlc/stokes.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "nlc/errors.hpp"
#include "nlc/operators.hpp"

namespace nlc {

double ViscosityModel::operator()(double rho) const {
    switch (kind) {
    case Kind::constant: return mu0;
    case Kind::affine: return mu0 + mu1 * rho;
    case Kind::exponential: return mu0 * std::exp(mu1 * rho);
    }
    return mu0;
}

ScalarField ViscosityModel::evaluate(const ScalarField& rho) const {
    ScalarField mu(rho.grid());
    for (std::size_t c = 0; c < rho.size(); ++c) {
        const double m = (*this)(rho.values()[c]);
        if (!(m > 0.0) || !std::isfinite(m))
            throw ConfigError(fmt::format("viscosity {} is not positive at density {}", m, rho.values()[c]));
        mu.values()[c] = m;
    }
    return mu;
}

void ViscosityModel::validate(double rho_max) const {
    if (!(mu0 > 0.0)) throw ConfigError(fmt::format("mu0 = {} must be > 0", mu0));
    if (kind == Kind::affine && mu1 < 0.0 && !(mu0 + mu1 * rho_max > 0.0))
        throw ConfigError(fmt::format("affine viscosity mu0 + mu1 rho vanishes below rho_max = {}", rho_max));
}

std::string ViscosityModel::name() const {
    switch (kind) {
    case Kind::constant: return "constant";
    case Kind::affine: return "affine";
    case Kind::exponential: return "exponential";
    }
    return "constant";
}

namespace {

void require_positive(const ScalarField& mu) {
    for (double m : mu.values())
        if (!(m > 0.0)) throw ConfigError(fmt::format("viscosity must be > 0 everywhere, found {}", m));
}

/// Factorized velocity block: Cholesky when K is symmetric, LU otherwise.
class VelocitySolver {
public:
    VelocitySolver(const SpMat& k, bool symmetric) {
        if (symmetric) {
            auto s = std::make_unique<Eigen::SimplicialLDLT<SpMat>>(k);
            if (s->info() != Eigen::Success) throw SolverError("velocity block factorization failed");
            solver_ = std::move(s);
        } else {
            auto s = std::make_unique<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>();
            s->analyzePattern(k);
            s->factorize(k);
            if (s->info() != Eigen::Success) throw SolverError("velocity block factorization failed");
            solver_ = std::move(s);
        }
    }

    Vec solve(const Vec& b) const {
        return std::visit([&](const auto& s) -> Vec { return s->solve(b); }, solver_);
    }

private:
    std::variant<std::unique_ptr<Eigen::SimplicialLDLT<SpMat>>,
                 std::unique_ptr<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>>
        solver_;
};

/// Neumann Poisson solve G^T W G x = r for mean-zero r; one diagonal entry is
/// stiffened, which leaves consistent right-hand sides solved exactly.
class PoissonSolver {
public:
    PoissonSolver(const MacOperators& ops, const Vec& weights) {
        SpMat l = ops.poisson(weights);
        l.coeffRef(0, 0) += l.coeff(0, 0);
        solver_.compute(l);
        if (solver_.info() != Eigen::Success) throw SolverError("pressure Poisson factorization failed");
    }
    Vec solve(const Vec& r) const {
        Vec x = solver_.solve(r);
        x.array() -= x.mean();
        return x;
    }

private:
    Eigen::SimplicialLDLT<SpMat> solver_;
};

Vec mean_free(Vec x) {
    x.array() -= x.mean();
    return x;
}

struct SaddleResult {
    Vec u;
    Vec p;
    SaddleSolveStats stats;
};

/// K u + G p = f, G^T u = 0 through the pressure Schur complement
/// S = G^T K^{-1} G, solved by restarted right-preconditioned GMRES.
SaddleResult solve_saddle(const MacOperators& ops, const SpMat& k, bool symmetric, const Vec& f,
                          const std::function<Vec(const Vec&)>& precond, const SolverOptions& opt) {
    if (!(opt.tol > 0.0)) throw ConfigError("solver tol must be > 0");
    const SpMat& gm = ops.gradient();
    const double h = ops.grid().h();
    const Eigen::Index n = gm.cols();
    SaddleResult out{Vec::Zero(k.rows()), Vec::Zero(n), {}};
    const double fnorm = f.norm();
    if (fnorm == 0.0) {
        out.stats.converged = true;
        return out;
    }
    const VelocitySolver ks(k, symmetric);
    auto schur = [&](const Vec& p) -> Vec { return gm.transpose() * ks.solve(gm * p); };
    const Vec b = gm.transpose() * ks.solve(f);

    const int m = std::max(2, opt.restart);
    Vec p = Vec::Zero(n);
    Vec r = b;
    double beta = r.norm();
    int its = 0;
    std::vector<Vec> basis;
    Eigen::MatrixXd hess(m + 1, m);
    Vec cs(m), sn(m), gv(m + 1);
    while (h * beta > opt.tol && its < opt.itmax) {
        basis.assign(1, r / beta);
        hess.setZero();
        gv.setZero();
        gv[0] = beta;
        int j = 0;
        for (; j < m && its < opt.itmax; ++j) {
            ++its;
            Vec w = schur(mean_free(precond(basis[j])));
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i <= j; ++i) {
                    const double c = basis[i].dot(w);
                    hess(i, j) += c;
                    w -= c * basis[i];
                }
            hess(j + 1, j) = w.norm();
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
                hess(i + 1, j) = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
                hess(i, j) = t;
            }
            const double den = std::hypot(hess(j, j), hess(j + 1, j));
            cs[j] = den > 0.0 ? hess(j, j) / den : 1.0;
            sn[j] = den > 0.0 ? hess(j + 1, j) / den : 0.0;
            const double wn = hess(j + 1, j);
            hess(j, j) = den;
            hess(j + 1, j) = 0.0;
            gv[j + 1] = -sn[j] * gv[j];
            gv[j] = cs[j] * gv[j];
            const bool done = h * std::abs(gv[j + 1]) <= 0.25 * opt.tol || wn == 0.0;
            if (!done) basis.push_back(w / wn);
            if (done) {
                ++j;
                break;
            }
        }
        Vec y = Vec::Zero(j);
        for (int i = j - 1; i >= 0; --i) {
            double s = gv[i];
            for (int c = i + 1; c < j; ++c) s -= hess(i, c) * y[c];
            y[i] = s / hess(i, i);
        }
        Vec comb = Vec::Zero(n);
        for (int i = 0; i < j; ++i) comb += y[i] * basis[i];
        p += mean_free(precond(comb));
        r = b - schur(p);
        beta = r.norm();
        ++out.stats.restarts;
    }
    p.array() -= p.mean();
    out.p = p;
    out.u = ks.solve(f - gm * p);
    out.stats.iterations = its;
    out.stats.divergence_residual = h * (gm.transpose() * out.u).norm();
    out.stats.momentum_residual = (k * out.u + gm * p - f).norm() / fnorm;
    out.stats.converged = out.stats.divergence_residual <= opt.tol && out.stats.momentum_residual <= opt.tol;
    if (!out.stats.converged)
        throw SolverError(fmt::format("saddle-point solve did not converge: {} iterations, {} restarts, "
                                      "divergence residual {:.3e}, momentum residual {:.3e}, tol {:.1e}",
                                      its, out.stats.restarts, out.stats.divergence_residual,
                                      out.stats.momentum_residual, opt.tol));
    return out;
}

StokesSolution unpack(const MacOperators& ops, const SaddleResult& r) {
    return {ops.index().unpack(r.u), ops.unpack_cells(r.p), r.stats};
}

}  // namespace

StokesSolution solve_stokes(const ScalarField& mu, const VectorField& force, const SolverOptions& opt) {
    require_positive(mu);
    const MacOperators ops(mu.grid());
    const SpMat a = ops.viscous(mu);
    const Vec f = ops.index().pack(force);
    const Vec muv = ops.pack_cells(mu);
    auto precond = [&](const Vec& r) -> Vec { return muv.cwiseProduct(r); };
    return unpack(ops, solve_saddle(ops, a, true, f, precond, opt));
}

StokesSolution momentum_step(const ScalarField& rho, const VectorField& u_old, const VectorField& v,
                             const DirectorField& d, const ViscosityModel& mu, double dt,
                             const MomentumOptions& opt, const ScalarField* rho_prev) {
    if (!(dt > 0.0)) throw ConfigError(fmt::format("dt = {} must be > 0", dt));
    if (rho.min() < -1e-12) throw ConfigError("density must be nonnegative");
    const MacOperators ops(rho.grid());
    const ScalarField muf = mu.evaluate(rho);
    ScalarField rd = rho;
    for (double& x : rd.values()) x += opt.delta_vac;
    ScalarField rp = rho_prev ? *rho_prev : rho;
    for (double& x : rp.values()) x += opt.delta_vac;
    if (rd.min() <= 0.0) throw ConfigError("density plus delta_vac must be > 0 in the mass term");

    const Vec rdf = ops.face_average(rd);
    const Vec rpf = ops.face_average(rp);
    const Vec mass_new = 0.5 * (rdf + rpf) / dt;
    const bool moving = v.max_abs() > 0.0;
    SpMat k = ops.viscous(muf);
    for (Eigen::Index i = 0; i < k.rows(); ++i) k.coeffRef(i, i) += mass_new[i];
    if (moving) k += ops.skew_convection(v, rd);

    const Vec uo = ops.index().pack(u_old);
    const Vec elastic = ops.index().pack(stress_divergence(d));
    const Vec f = rpf.cwiseProduct(uo) / dt - elastic;

    const Vec muv = ops.pack_cells(muf);
    const PoissonSolver poisson(ops, rdf.cwiseInverse());
    auto precond = [&](const Vec& r) -> Vec {
        return muv.cwiseProduct(r) + poisson.solve(r) / dt;
    };
    return unpack(ops, solve_saddle(ops, k, !moving, f, precond, opt.solver));
}

VectorField viscous_apply(const ScalarField& mu, const VectorField& u) {
    const MacOperators ops(mu.grid());
    return ops.index().unpack(ops.viscous(mu) * ops.index().pack(u));
}

VectorField pressure_gradient(const ScalarField& p) {
    const MacOperators ops(p.grid());
    return ops.index().unpack(ops.gradient() * ops.pack_cells(p));
}

double face_l2_norm(const VectorField& u) {
    const FaceIndex idx(u.grid());
    return u.grid().h() * idx.pack(u).norm();
}

CompatibilityReport compatibility_init(const ScalarField& rho0, const VectorField& u0, const DirectorField& d0,
                                       const ViscosityModel& mu, double delta_vac) {
    const MacOperators ops(rho0.grid());
    const FaceIndex& idx = ops.index();
    const Vec r = ops.viscous(mu.evaluate(rho0)) * idx.pack(u0) + idx.pack(stress_divergence(d0));
    const Vec ones = Vec::Ones(idx.size());
    const PoissonSolver poisson(ops, ones);
    const Vec p0 = -poisson.solve(ops.gradient().transpose() * r);
    const Vec proj = r + ops.gradient() * p0;
    ScalarField rd = rho0;
    for (double& x : rd.values()) x += delta_vac;
    const Vec w = ops.face_average(rd).cwiseSqrt().cwiseInverse();
    CompatibilityReport rep{ops.unpack_cells(p0), idx.unpack(r), idx.unpack(proj.cwiseProduct(w)), 0.0};
    rep.gnorm = face_l2_norm(rep.g);
    return rep;
}

}  // namespace nlc
