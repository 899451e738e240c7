#include "nlc/mac_system.hpp"

#include <vector>

namespace nlc {

using Triplet = Eigen::Triplet<double>;

FaceIndex::FaceIndex(const Grid& g) : g_(g), nux_((g.nx() - 1) * g.ny()), nuy_(g.nx() * (g.ny() - 1)) {}

int FaceIndex::ux(int i, int j) const {
    if (i <= 0 || i >= g_.nx() || j < 0 || j >= g_.ny()) return -1;
    return j * (g_.nx() - 1) + (i - 1);
}

int FaceIndex::uy(int i, int j) const {
    if (j <= 0 || j >= g_.ny() || i < 0 || i >= g_.nx()) return -1;
    return nux_ + (j - 1) * g_.nx() + i;
}

Vec FaceIndex::pack(const VectorField& u) const {
    Vec x(size());
    for (int j = 0; j < g_.ny(); ++j)
        for (int i = 1; i < g_.nx(); ++i) x[ux(i, j)] = u.ux(i, j);
    for (int j = 1; j < g_.ny(); ++j)
        for (int i = 0; i < g_.nx(); ++i) x[uy(i, j)] = u.uy(i, j);
    return x;
}

VectorField FaceIndex::unpack(const Vec& x) const {
    VectorField u(g_, VelocityBc::no_slip);
    for (int j = 0; j < g_.ny(); ++j)
        for (int i = 1; i < g_.nx(); ++i) u.ux(i, j) = x[ux(i, j)];
    for (int j = 1; j < g_.ny(); ++j)
        for (int i = 0; i < g_.nx(); ++i) u.uy(i, j) = x[uy(i, j)];
    return u;
}

MacOperators::MacOperators(const Grid& g) : idx_(g), grad_(idx_.size(), static_cast<int>(g.cells())) {
    const double ih = 1.0 / g.h();
    std::vector<Triplet> t;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 1; i < g.nx(); ++i) {
            const int r = idx_.ux(i, j);
            t.emplace_back(r, static_cast<int>(g.cell(i, j)), ih);
            t.emplace_back(r, static_cast<int>(g.cell(i - 1, j)), -ih);
        }
    for (int j = 1; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const int r = idx_.uy(i, j);
            t.emplace_back(r, static_cast<int>(g.cell(i, j)), ih);
            t.emplace_back(r, static_cast<int>(g.cell(i, j - 1)), -ih);
        }
    grad_.setFromTriplets(t.begin(), t.end());
}

SpMat MacOperators::viscous(const ScalarField& mu) const {
    const Grid& g = grid();
    const int nx = g.nx(), ny = g.ny();
    const int ncell = static_cast<int>(g.cells());
    const int ncorner = (nx + 1) * (ny + 1);
    const double ih = 1.0 / g.h();
    // strain rows: [eps_xx per cell | eps_yy per cell | shear per corner]
    std::vector<Triplet> t;
    std::vector<double> w(2 * ncell + ncorner, 0.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int c = static_cast<int>(g.cell(i, j));
            if (int a = idx_.ux(i + 1, j); a >= 0) t.emplace_back(c, a, ih);
            if (int a = idx_.ux(i, j); a >= 0) t.emplace_back(c, a, -ih);
            if (int a = idx_.uy(i, j + 1); a >= 0) t.emplace_back(ncell + c, a, ih);
            if (int a = idx_.uy(i, j); a >= 0) t.emplace_back(ncell + c, a, -ih);
            w[c] = w[ncell + c] = 2.0 * mu(i, j);
        }
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const int row = 2 * ncell + j * (nx + 1) + i;
            // du_x/dy with the no-slip ghost u(-1) = -u(0) at walls
            if (j == 0) {
                if (int a = idx_.ux(i, 0); a >= 0) t.emplace_back(row, a, 2.0 * ih);
            } else if (j == ny) {
                if (int a = idx_.ux(i, ny - 1); a >= 0) t.emplace_back(row, a, -2.0 * ih);
            } else {
                if (int a = idx_.ux(i, j); a >= 0) t.emplace_back(row, a, ih);
                if (int a = idx_.ux(i, j - 1); a >= 0) t.emplace_back(row, a, -ih);
            }
            if (i == 0) {
                if (int a = idx_.uy(0, j); a >= 0) t.emplace_back(row, a, 2.0 * ih);
            } else if (i == nx) {
                if (int a = idx_.uy(nx - 1, j); a >= 0) t.emplace_back(row, a, -2.0 * ih);
            } else {
                if (int a = idx_.uy(i, j); a >= 0) t.emplace_back(row, a, ih);
                if (int a = idx_.uy(i - 1, j); a >= 0) t.emplace_back(row, a, -ih);
            }
            double msum = 0.0;
            int cnt = 0;
            for (int b = j - 1; b <= j; ++b)
                for (int a = i - 1; a <= i; ++a)
                    if (a >= 0 && a < nx && b >= 0 && b < ny) {
                        msum += mu(a, b);
                        ++cnt;
                    }
            const bool wall_x = (i == 0 || i == nx), wall_y = (j == 0 || j == ny);
            // wall corners own half a dual cell
            const double share = (wall_x ? 0.5 : 1.0) * (wall_y ? 0.5 : 1.0);
            w[row] = share * msum / cnt;
        }
    SpMat s(2 * ncell + ncorner, idx_.size());
    s.setFromTriplets(t.begin(), t.end());
    Eigen::VectorXd wv = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    SpMat a = SpMat(s.transpose()) * wv.asDiagonal() * s;
    a.makeCompressed();
    return a;
}

Vec MacOperators::face_average(const ScalarField& rho) const {
    const Grid& g = grid();
    Vec r(idx_.size());
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 1; i < g.nx(); ++i) r[idx_.ux(i, j)] = 0.5 * (rho(i, j) + rho(i - 1, j));
    for (int j = 1; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) r[idx_.uy(i, j)] = 0.5 * (rho(i, j) + rho(i, j - 1));
    return r;
}

SpMat MacOperators::mass(const ScalarField& rho) const {
    const Vec r = face_average(rho);
    SpMat m(idx_.size(), idx_.size());
    m.reserve(Eigen::VectorXi::Constant(idx_.size(), 1));
    for (int k = 0; k < idx_.size(); ++k) m.insert(k, k) = r[k];
    m.makeCompressed();
    return m;
}

SpMat MacOperators::convection(const VectorField& v, const ScalarField& rho) const {
    const Grid& g = grid();
    const int nx = g.nx(), ny = g.ny();
    const double i2h = 0.5 / g.h();
    const Vec rf = face_average(rho);
    std::vector<Triplet> t;
    // adds coef * u(...) where an out-of-range tangential neighbour is the
    // no-slip ghost -u(self)
    for (int j = 0; j < ny; ++j)
        for (int i = 1; i < nx; ++i) {
            const int r = idx_.ux(i, j);
            const double vx = v.ux(i, j);
            const double vy = 0.25 * (v.uy(i - 1, j) + v.uy(i, j) + v.uy(i - 1, j + 1) + v.uy(i, j + 1));
            const double cx = rf[r] * vx * i2h, cy = rf[r] * vy * i2h;
            if (int a = idx_.ux(i + 1, j); a >= 0) t.emplace_back(r, a, cx);
            if (int a = idx_.ux(i - 1, j); a >= 0) t.emplace_back(r, a, -cx);
            if (j + 1 < ny) t.emplace_back(r, idx_.ux(i, j + 1), cy);
            else t.emplace_back(r, r, -cy);
            if (j > 0) t.emplace_back(r, idx_.ux(i, j - 1), -cy);
            else t.emplace_back(r, r, cy);
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int r = idx_.uy(i, j);
            const double vy = v.uy(i, j);
            const double vx = 0.25 * (v.ux(i, j - 1) + v.ux(i + 1, j - 1) + v.ux(i, j) + v.ux(i + 1, j));
            const double cx = rf[r] * vx * i2h, cy = rf[r] * vy * i2h;
            if (int a = idx_.uy(i, j + 1); a >= 0) t.emplace_back(r, a, cy);
            if (int a = idx_.uy(i, j - 1); a >= 0) t.emplace_back(r, a, -cy);
            if (i + 1 < nx) t.emplace_back(r, idx_.uy(i + 1, j), cx);
            else t.emplace_back(r, r, -cx);
            if (i > 0) t.emplace_back(r, idx_.uy(i - 1, j), -cx);
            else t.emplace_back(r, r, cx);
        }
    SpMat c(idx_.size(), idx_.size());
    c.setFromTriplets(t.begin(), t.end());
    return c;
}

SpMat MacOperators::skew_convection(const VectorField& v, const ScalarField& rho) const {
    const SpMat c = convection(v, rho);
    SpMat n = 0.5 * (c - SpMat(c.transpose()));
    n.prune(0.0);
    return n;
}

SpMat MacOperators::poisson(const Vec& face_weights) const {
    SpMat l = SpMat(grad_.transpose()) * face_weights.asDiagonal() * grad_;
    l.makeCompressed();
    return l;
}

Vec MacOperators::pack_cells(const ScalarField& f) const {
    return Eigen::Map<const Vec>(f.values().data(), static_cast<Eigen::Index>(f.size()));
}

ScalarField MacOperators::unpack_cells(const Vec& x) const {
    ScalarField f(grid());
    for (Eigen::Index k = 0; k < x.size(); ++k) f.values()[k] = x[k];
    return f;
}

double viscous_dissipation(const MacOperators& ops, const ScalarField& mu, const VectorField& u) {
    const Vec x = ops.index().pack(u);
    return ops.grid().cell_area() * x.dot(ops.viscous(mu) * x);
}

}  // namespace nlc
