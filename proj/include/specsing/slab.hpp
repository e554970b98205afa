#pragma once

#include "specsing/potential.hpp"

namespace specsing {

// ---------------------------------------------------------------------------
// Physical layer for the gain slab: two-level dispersion, pumping profiles in
// lab coordinates, and the mapping onto the dimensionless scattering problem
// on [0,1] with k = 2*pi*L/lambda. Interface units are nm for wavelengths,
// um for the thickness, cm^-1 for gains; internally everything is converted
// to nm so the mapped quantities come out dimensionless.
// ---------------------------------------------------------------------------

struct SlabMedium {
    double n0 = 3.4;           // host refractive index
    double L_um = 300.0;       // slab thickness
    double lambda0_nm = 1500.0; // atomic resonance wavelength
    double gamma_hat = 0.02;   // damping / resonance-frequency ratio
    double alpha_per_cm = 200.0; // attenuation (max attainable gain)
    double nu = 0.0;           // pumping decay constant
    Pumping pumping = Pumping::Single;

    double L_nm() const { return L_um * 1e3; }
    double alpha_per_nm() const { return alpha_per_cm * 1e-7; }
};

// Throws MalformedConfig if the physical invariants are violated
// (n0 > 1, positive lengths, 0 < gamma_hat < 1, nu >= 0).
void validate_medium(const SlabMedium& m);

// Everything the abstract engines need at one (lambda, g0) point.
struct DispersionPoint {
    double lambda_nm = 0.0;
    double g0_per_cm = 0.0;
    double omega_hat = 0.0; // lambda0 / lambda
    cplx zeta;              // 1 / (1 - w^2 - i*gamma_hat*w), w = omega_hat
    cplx zeta1;             // constant-barrier height
    cplx zeta2;             // perturbation strength
    double eps = 0.0;       // perturbation parameter (proportional to nu)
    cplx fn;                // sqrt(1 - zeta1/k^2), principal branch
    double k = 0.0;         // 2*pi*L/lambda
};

// Two-level dispersion: n^2 = n0^2 + n0*gh*l0*g / (2*pi*(w^2 - 1 + i*gh*w)).
cplx refractive_index_sq(const SlabMedium& m, double lambda_nm,
                         double g_per_cm);

// Gain at depth z (z = 0 mid-slab, |z| <= L/2), boundary value g0 at the
// illuminated face(s). Throws OutsideSlab beyond the faces.
double gain_profile_z(const SlabMedium& m, double g0_per_cm, double z_um);

DispersionPoint map_parameters(const SlabMedium& m, double lambda_nm,
                               double g0_per_cm);

// fn0 and its closed-form partial derivatives: fn10 = d fn/d lambda (per nm),
// fn01 = d fn/d g0 (per nm^-1).
struct FnDerivatives {
    cplx fn0, fn10, fn01;
};
FnDerivatives fn_and_derivatives(const SlabMedium& m, double lambda_nm,
                                 double g0_per_cm);

// The exact mapped potential x -> (2*pi*L/lambda)^2 [1 - n^2(lambda, z(x))]
// on [0,1], bypassing the (zeta1, zeta2, eps, f) split entirely; this is what
// the ODE oracle integrates.
PotentialSpec build_potential(const SlabMedium& m, double lambda_nm,
                              double g0_per_cm);

// Gamma_{1-} of the exact mapped potential, holomorphically continued to
// complex (lambda, g0) so root finders can take derivative steps in complex
// directions. tol is the ODE local-error control. `scale` is the size of the
// terms that cancel in Gamma_{1-} (|phi1'(1)| + |k||phi1(1)|); convergence
// thresholds are expressed relative to it.
struct SlabBoundary {
    cplx gamma1m;
    cplx k;
    double scale = 0.0;
};
SlabBoundary slab_oracle(const SlabMedium& m, cplx lambda_nm, cplx g0_per_cm,
                         double tol = 1e-13);

cplx slab_gamma1m(const SlabMedium& m, cplx lambda_nm, cplx g0_per_cm,
                  double tol = 1e-13);

} // namespace specsing
