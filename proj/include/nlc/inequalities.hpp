#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlc/fields.hpp"
#include "nlc/norms.hpp"

namespace nlc {

/// Outcome of one functional-inequality check: both sides and the constant
/// that makes them agree (lhs / rhs_without_constant).
struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs_without_constant = 0.0;
    double fitted_constant = 0.0;
    std::map<std::string, double> context;

    std::string to_json() const;
};

/// ||f.g||_{L^p_w} against ||f||_{L^{p1}_w} ||g||_{L^{p2}_w}, 1/p = 1/p1 + 1/p2.
InequalityReport holder_lorentz_check(const ScalarField& f, const ScalarField& g, double p1, double p2);

/// ||f g||^2 <= eps ||g||^2_{H^1} + C(eps) ||f||_{L^r_w}^{2r/(r-n)} ||g||^2.
/// Returns the smallest C(eps) valid over the whole family of (f, g) pairs.
InequalityReport product_absorption_check(std::span<const std::pair<ScalarField, ScalarField>> family, double r,
                               double eps, int n = 2);

/// One time slice of a (possibly multi-component) field.
struct FieldSlice {
    double t = 0.0;
    std::vector<ScalarField> comps;
};

/// ||f||^2_{L^2(s,t;L^inf)} <= C [1 + ||f||^2_{L^2(s,t;H^1)} ln(e + ||f||_{L^2(s,t;W^{1,q})})].
InequalityReport log_sobolev_check(std::span<const FieldSlice> history, double q);

/// ||grad^2 f||^2 / (||lap f||^2 + ||f||^2_{H^1}).
double elliptic_ratio(const ScalarField& f);
/// ||grad f||^4_{L^4} / (||grad^2 f||^2 ||f||^2_inf + ||f||^4_inf).
double gn_ratio(const ScalarField& f);

struct EstimatorOptions {
    int trials = 12;
    int ascent_steps = 150;
    int modes = 4;  ///< cosine modes 0..modes per axis
    std::uint64_t seed = 1;
};
/// Largest ratio found over single cosine modes and randomized perturbation
/// ascent; trial t draws from seed * 2^32 + t, odd trials start near the
/// best single mode. Fields in `include` join the maximum. A lower bound on
/// the discrete constant.
double estimate_elliptic_C1(const Grid& g, const EstimatorOptions& opt,
                            std::span<const ScalarField> include = {});
double estimate_gn_C2(const Grid& g, const EstimatorOptions& opt, std::span<const ScalarField> include = {});

/// Random cosine-series field sum_{k,l<=modes} a_kl cos(k pi x / lx) cos(l pi y / ly)
/// with standard normal coefficients damped by 1 / (1 + k + l).
ScalarField random_neumann_field(const Grid& g, int modes, std::uint64_t seed);

/// No-slip, exactly solenoidal velocity from the stream function
/// psi = sum_{k,l<=modes} a_kl sin(pi x) sin(k pi x) sin(pi y) sin(l pi y) on the
/// unit-scaled domain; psi and grad psi vanish on the walls.
VectorField random_noslip_field(const Grid& g, int modes, std::uint64_t seed);

struct KornReport {
    double deformation_sq = 0.0;   ///< int |D(u)|^2
    double half_gradient_sq = 0.0; ///< (1/2) int |grad u|^2
    double relative_gap() const;
};

/// Both sides of int |D(u)|^2 = (1/2) int |grad u|^2 for a no-slip,
/// discretely solenoidal field. Rejects other inputs.
KornReport korn_identity_check(const VectorField& u);

}  // namespace nlc
