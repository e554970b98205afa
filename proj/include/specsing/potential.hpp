#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "specsing/errors.hpp"

namespace specsing {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Potential families. All potentials live on [0,1]; lengths are rescaled so
// that the support is the unit interval and the wavenumber k is dimensionless.
// ---------------------------------------------------------------------------

enum class Pumping { Single, Double };

// Pumping profile f(x) of the perturbation eps*z2*f(x). The built-in kinds are
//   single: f(x) = (e^{-nu x} - 1)/nu
//   double: f(x) = (cosh[nu(x-1/2)] - cosh(nu/2)) / (nu^2 cosh(nu/2))
// both of which degenerate to 0/0 at nu = 0; a series branch supplies the
// analytic limits (-x and (x^2-x)/2) there.
struct GainProfile {
    enum class Kind { SinglePumping, DoublePumping, Custom };
    Kind kind = Kind::SinglePumping;
    double nu = 0.0;
    std::function<cplx(double)> custom_f; // only for Kind::Custom
};

GainProfile single_pumping(double nu);
GainProfile double_pumping(double nu);

// Built-in profile value; handles the nu -> 0 limit with a series branch.
double pumping_profile(GainProfile::Kind kind, double nu, double x);

// Profile value for any kind, including Custom.
cplx profile_value(const GainProfile& p, double x);

// Array of delta functions: v1(x) = sum_i z_i delta(x - a_i),
// 0 < a_1 < ... < a_n < 1.
struct DeltaArraySpec {
    std::vector<double> centers;
    std::vector<cplx> couplings;
};

// v(x) = z1 + eps * z2 * f(x): constant complex barrier plus a profiled
// perturbation.
struct BarrierSpec {
    cplx z1{0.0, 0.0};
    cplx z2{0.0, 0.0};
    double eps = 0.0;
    GainProfile profile;
};

// Arbitrary piecewise-continuous complex potential. `breakpoints` lists interior
// discontinuities so integrators never step across a jump.
struct GenericRegular {
    std::function<cplx(double)> v;
    std::vector<double> breakpoints;
};

using PotentialSpec = std::variant<DeltaArraySpec, BarrierSpec, GenericRegular>;

// Pointwise value of the regular part. Delta arrays have no pointwise value and
// throw DeltaNotPointwise.
cplx evaluate_regular(const PotentialSpec& spec, double x);

// Interior discontinuity points (sorted). Empty for smooth potentials.
std::vector<double> breakpoints(const PotentialSpec& spec);

// Validates the type invariants; throws a ConfigError subclass on violation.
// For custom profiles, a non-normalized integral (int_0^1 |f| > 1) is only a
// warning condition reported through the return value, not an error.
struct ValidationReport {
    bool profile_norm_warning = false;
};
ValidationReport validate(const PotentialSpec& spec);

} // namespace specsing
