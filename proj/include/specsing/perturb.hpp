#pragma once

#include <functional>
#include <vector>

#include "specsing/cheb.hpp"
#include "specsing/potential.hpp"

namespace specsing {

// ---------------------------------------------------------------------------
// Green's-function perturbation series. The potential splits as v = v0 + e*v1
// with v0 exactly solvable; corrections obey
//   phi^(l)(x) = int_0^x G(x,y) v1(y) phi^(l-1)(y) dy,
//   G(x,y) = (i/k) [phi1(x) phi2(y) - phi2(x) phi1(y)],
// so each level costs two prefix integrals (G is separable), not an
// l-dimensional quadrature. Two bases ship: free (v0 = 0) and constant
// barrier (v0 = z1).
// ---------------------------------------------------------------------------

struct UnperturbedBasis {
    double k = 0.0;
    std::function<cplx(double)> phi1, dphi1; // phi1(0)=1, phi1'(0)=-ik
    std::function<cplx(double)> phi2, dphi2; // phi2(0)=1, phi2'(0)=0
    std::function<cplx(double, double)> green;    // G(x,y), G(x,x)=0
    std::function<cplx(double, double)> green_dx; // d/dx G, = 1 at y=x
    // Radians the basis functions accumulate across [0,1]; drives panel counts.
    double phase_scale = 0.0;
};

UnperturbedBasis make_basis_free(double k);
UnperturbedBasis make_basis_barrier(cplx z1, double k);

// Scaled internal wavenumber n = sqrt(1 - z1/k^2), principal branch Re >= 0;
// a purely imaginary root resolves to Im > 0. Throws RefractiveRootVanishes
// when |n| < 1e-10 and ZeroWaveNumber for k under the clamp.
cplx refractive_root(cplx z1, double k);

// ---------------------------------------------------------------------------
// Smooth perturbations: the recursion materialized as interpolants.
// ---------------------------------------------------------------------------

// All correction levels 1..levels for basis solution j in {1,2}. phi/dphi are
// closures over the prefix interpolants; gp/gm hold the boundary combinations
// Gamma^(l)_{j+-} = phi^(l)'(1) +- ik phi^(l)(1) at index l-1.
struct CorrectionStack {
    std::vector<std::function<cplx(double)>> phi, dphi;
    std::vector<cplx> gp, gm;
};

CorrectionStack correction_stack(const UnperturbedBasis& basis, int j,
                                 const std::function<cplx(double)>& v1,
                                 int levels, int order = 64);

// phi_j^(l)(x) for one l; by construction it and its derivative vanish at 0.
cplx phi_correction(const UnperturbedBasis& basis, int j,
                    const std::function<cplx(double)>& v1, int ell, double x,
                    int order = 64);

// Gamma_{j,sign}^(l); sign is +1 or -1.
cplx jost_correction(const UnperturbedBasis& basis, int j,
                     const std::function<cplx(double)>& v1, int ell, int sign,
                     int order = 64);

// ---------------------------------------------------------------------------
// Delta-array perturbations: the iterated integrals collapse to finite sums
// over index chains, evaluated exactly (no quadrature). The step factors
// theta(a_{i_{m+1}} - a_{i_m}) and the vanishing of G on the diagonal are kept
// as numeric factors over all n^l index tuples, so the truncation of the
// series at l = n is an observed outcome, not something built in.
// ---------------------------------------------------------------------------
cplx jost_correction_delta(const UnperturbedBasis& basis,
                           const DeltaArraySpec& deltas, int ell, int j,
                           int sign);

// ---------------------------------------------------------------------------
// Constant-barrier specialization. Conventions: n is the scaled internal
// wavenumber (refractive_root), rho = (n-1)/(n+1) the interface reflection
// amplitude; spectral singularities of the unperturbed barrier solve
// e^{-2ink} = rho^2.
// ---------------------------------------------------------------------------

// Gamma_{1-}^(0) for the barrier, expanded form:
//   F0 = -(k/n) [(n^2+1) sin(nk) + 2in cos(nk)].
cplx barrier_F0(cplx fn, double k);

// Same quantity, factored so the singularity condition is explicit:
//   F0 = k (n+1)^2 e^{ink} / (2in) * [e^{-2ink} - rho^2].
cplx barrier_F0_factored(cplx fn, double k);

// e^{-2ink} - rho^2; zero exactly at a spectral singularity of the barrier.
cplx ss_zero_residual(cplx fn, double k);

// xi(n,k,x) = phi1(x) phi1(1-x), the weight in the first-order integral.
cplx barrier_xi(cplx fn, double k, double x);

// The singularity condition e^{-2ink} = rho^2 has two square-root branches
// e^{-ink} = sigma rho, sigma = +-1, and closed forms at a singularity depend
// on which one holds. Returns the sigma nearer to (fn0, k0): at a
// singularity cos(nk) = sigma (n^2+1)/(n^2-1), so sigma is read off the sign
// of Re[cos(nk) conj((n^2+1)/(n^2-1))]. For the lasing slab the branch
// alternates with the longitudinal mode number.
int ss_branch(cplx fn0, double k0);

// At a singularity xi collapses to
//   sigma = +1:   (1 - 1/n^2) cos^2[n k (x - 1/2)]
//   sigma = -1:  -(1 - 1/n^2) sin^2[n k (x - 1/2)].
cplx barrier_xi_at_ss(cplx fn0, double k0, double x);

// F_l from the nested simplex integral
//   F_l = (nk)^{1-l} int_0^1 dx_l ... int_0^{x_2} dx_1
//           phi1(x_1) phi1(1-x_l) prod sin[nk(x_{m+1}-x_m)] prod f(x_p),
// evaluated by per-level prefix integration of the sin-addition split. This is
// an independent path from jost_correction (different kernel decomposition);
// the two must agree, and tests enforce it. l = 1 reduces to int xi f.
cplx barrier_F_ell(cplx fn, double k, const GainProfile& profile, int ell,
                   int order = 64);

// Closed form of F1 at a spectral singularity (where xi takes its squared
// trigonometric shape on the branch picked by ss_branch) for the two built-in
// profiles. Requires nu > 0; below nu ~ 1e-3 the expressions lose digits to
// cancellation and the quadrature path should be used instead. Throws
// NotAtSingularity if (fn0, k0) does not satisfy the singularity condition
// to 1e-8.
cplx F100_closed(cplx fn0, double k0, double nu, Pumping pumping);

} // namespace specsing
