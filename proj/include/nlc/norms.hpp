#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nlc/fields.hpp"

namespace nlc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-cell Euclidean magnitude of a multi-component cell field.
std::vector<double> magnitudes(std::span<const ScalarField> comps);
/// MAC velocity is averaged to cell centers first.
std::vector<double> magnitudes(const VectorField& u);

/// (sum |f|^p h^2)^(1/p); p = inf gives max |f|.
double lp_norm(std::span<const double> mags, double cell_area, double p);
double lp_norm(const ScalarField& f, double p);
double lp_norm(const DirectorField& d, double p);
double lp_norm(const VectorField& u, double p);
double lp_norm(std::span<const ScalarField> comps, double p);

/// sup_t t |{|f| > t}|^(1/p), evaluated exactly on the discrete measure:
/// with magnitudes sorted descending a_1 >= a_2 >= ..., max_k a_k (k h^2)^(1/p).
double weak_lp_norm(std::span<const double> mags, double cell_area, double p);
double weak_lp_norm(const ScalarField& f, double p);
double weak_lp_norm(const DirectorField& d, double p);
double weak_lp_norm(const VectorField& u, double p);
double weak_lp_norm(std::span<const ScalarField> comps, double p);

/// |f|_{W^{k,p}}: L^p norm of the full k-th derivative block
/// (sum over ordered multi-indices), k in {1, 2, 3}. The third order is
/// indicative only near walls.
double sobolev_seminorm(std::span<const ScalarField> comps, int k, double p);
double sobolev_seminorm(const ScalarField& f, int k, double p);
double sobolev_seminorm(const DirectorField& d, int k, double p);
/// (sum_{j<=k} |f|_{j,p}^p)^(1/p), max for p = inf.
double sobolev_norm(std::span<const ScalarField> comps, int k, double p);
double sobolev_norm(const ScalarField& f, int k, double p);
double sobolev_norm(const DirectorField& d, int k, double p);

/// Spatial-norm samples of one quantity over time, the input to time-integrated
/// (Bochner) norms.
struct NormSeries {
    std::string label;
    std::vector<double> times;
    std::vector<double> values;

    void push(double t, double v);
};

/// (int |v(t)|^s dt)^(1/s) by the trapezoid rule; s = inf gives the max.
double bochner_norm(const NormSeries& series, double s);

/// Time exponent s, space exponent r, dimension n. Infinite exponents are
/// spelled kInf.
struct SerrinExponents {
    double s = 4.0;
    double r = 4.0;
    int n = 2;
};

struct SerrinVerdict {
    bool admissible = false;
    /// 1 - (2/s + n/r)
    double slack = 0.0;
};

/// r > n and 2/s + n/r <= 1.
SerrinVerdict serrin_check(const SerrinExponents& e);

}  // namespace nlc
