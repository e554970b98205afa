#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "specsing/perturb.hpp"
#include "specsing/slab.hpp"

namespace specsing {

// ---------------------------------------------------------------------------
// Root-finding layer: unperturbed barrier singularities, Taylor data of the
// F-series, the first-order (lambda1, g1) corrections, the generic
// (n, k)-gauge hierarchy through second order, and a full-numeric Newton
// solver on the exact potential used as the oracle for all of it.
// ---------------------------------------------------------------------------

struct UnperturbedRoot {
    double lambda0_nm = 0.0;
    double g0_per_cm = 0.0;
    double k0 = 0.0;
    cplx fn0;
};

// Newton over real (lambda, g0) on the complex residual e^{-2ink} - rho^2
// with the exact analytic Jacobian (chain rule through the dispersion
// derivatives). Without a seed, lambda starts at 2*n0*L/m and g0 at the
// minimizer of the residual magnitude over [0, alpha]. Converged when the
// residual magnitude drops below 1e-12.
UnperturbedRoot solve_unperturbed(
    const SlabMedium& medium, int mode_m,
    std::optional<std::pair<double, double>> seed = std::nullopt);

// Coefficients F_lpq of the double power series of F_l about (fn0, k0):
// F_lpq = (1/p!q!) d^p_n d^q_k F_l. First index: perturbation order l.
struct TaylorData {
    cplx F000, F010, F001;        // F0 and its first partials
    cplx F020, F011, F002;        // F0 second-order (with the 1/2! weights)
    cplx F100, F110, F101, F200;  // F1, its first partials, and F2
};

// (fn0, k0) must satisfy the barrier singularity condition to 1e-8
// (NotAtSingularity otherwise). F010/F001 are closed forms; F100 is the
// closed form for the built-in profiles at nu > 1e-3 and the xi-quadrature
// otherwise; everything second-order comes from central differences sized
// against the oscillation rates (k in the n-direction, |n| in k).
TaylorData taylor_data(cplx fn0, double k0, const GainProfile& profile,
                       int order = 64);

struct CorrectionCoefficients {
    cplx X, Y;           // X*lambda1 + Y*g1 + rhs = 0 (g1 in nm^-1 here)
    cplx rhs;            // F100 * zeta2
    double lambda1_nm = 0.0; // per unit eps
    double g1_per_cm = 0.0;  // per unit eps
};

CorrectionCoefficients first_order_correction(const TaylorData& td,
                                              const SlabMedium& medium,
                                              double lambda0_nm,
                                              double g0_per_cm);

// The (n, k)-gauge hierarchy with k_m = 0:
//   fn1 = -F100 z2 / F010,
//   fn2 = -(F020 fn1^2 + F110 fn1 z2 + F200 z2^2) / F010.
// order selects 1 or 2; fn2 is zero at order 1.
std::pair<cplx, cplx> generic_corrections(const TaylorData& td, cplx z2,
                                          int order);

struct SingularityResult {
    int mode_m = 0;
    double nu = 0.0;
    Pumping pumping = Pumping::Single;
    // 0: unperturbed root; 1: first-order perturbative; -1: full numeric
    int order = 0;
    double lambda0_nm = 0.0; // unperturbed root (or solver seed for order -1)
    double g0_per_cm = 0.0;
    double lambda_star_nm = 0.0;
    double g_star_per_cm = 0.0;
    double eps = 0.0;
    cplx fn0;
    double k0 = 0.0;
    // |M22| of the exact potential at the starred point (ODE oracle); never
    // zeroed, so first-order rows show their genuine truncation error.
    double residual = 0.0;
    cplx X, Y, rhs; // back-substitution data, populated for order 1
};

// Newton over real (lambda, g0) on the exact-potential Gamma_{1-}, with
// derivatives by central differences in the imaginary directions (the
// integrand is holomorphic, so this avoids cancellation near the root).
// Converged when |Gamma_{1-}| / scale < 1e-11.
SingularityResult full_numeric_singularity(const SlabMedium& medium,
                                           int mode_m,
                                           std::pair<double, double> seed);

// Mode label m = round(2 Re(fn0) L / lambda) with fn0 taken at zero gain.
int mode_number(double lambda_nm, const SlabMedium& medium);

// The whole table: for every (mode, nu, Single/Double) cell, solve the
// unperturbed problem, apply the first-order correction (nu = 0 rows stay at
// order 0), and attach the ODE-oracle residual. Cells run in parallel;
// `threads` <= 0 means SPECSING_THREADS or hardware concurrency. Row order is
// deterministic: mode ascending, nu ascending, Single before Double.
std::vector<SingularityResult> table1_pipeline(const SlabMedium& base,
                                               std::vector<int> modes,
                                               std::vector<double> nus,
                                               int threads = 0,
                                               bool want_single = true,
                                               bool want_double = true);

} // namespace specsing
