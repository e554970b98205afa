#pragma once

#include <array>
#include <complex>

#include "specsing/potential.hpp"

namespace specsing {

// ---------------------------------------------------------------------------
// Brute-force engine: integrate -phi'' + v phi = k^2 phi for the two
// fundamental solutions fixed by
//   phi1(0) = 1, phi1'(0) = -ik,      phi2(0) = 1, phi2'(0) = 0,
// form the Jost combinations Gamma_{j+-} = phi_j'(1) +- ik phi_j(1), and
// assemble the transfer matrix. Real zeros of M22 (equivalently Gamma_{1-})
// are the spectral singularities.
// ---------------------------------------------------------------------------

struct FundamentalPair {
    cplx phi1, dphi1; // phi_1(1;k), phi_1'(1;k)
    cplx phi2, dphi2; // phi_2(1;k), phi_2'(1;k)
    double k = 0.0;

    // phi1 phi2' - phi2 phi1'; constant along x, equal to ik exactly.
    cplx wronskian() const { return phi1 * dphi2 - phi2 * dphi1; }
};

struct JostQuad {
    cplx g1p, g1m; // Gamma_{1+}, Gamma_{1-}
    cplx g2p, g2m; // Gamma_{2+}, Gamma_{2-}
};

struct TransferMatrix {
    cplx m11, m12, m21, m22;
    double k = 0.0;

    cplx det() const { return m11 * m22 - m12 * m21; }
};

// Wavenumbers below this are rejected (the transfer matrix divides by 2ik).
inline constexpr double k_min_clamp = 1e-6;

// Adaptive integration of the fundamental pair across [0,1], split at the
// potential's interior discontinuities. tol sets the local error control
// (mixed absolute/relative). Throws DeltaNotPointwise for delta arrays and
// ZeroWaveNumber below the k clamp.
FundamentalPair integrate_fundamental(const PotentialSpec& spec, double k,
                                      double tol = 1e-12);

JostQuad jost_from_pair(const FundamentalPair& pair);

TransferMatrix assemble_transfer_matrix(const JostQuad& j, double k);

// Convenience: the M22 entry, -e^{ik} Gamma_{1-} / (2ik).
cplx m22(const PotentialSpec& spec, double k, double tol = 1e-12);

// Analytic-continuation variant used by root finders: integrates the system
// for a complex wavenumber and a caller-supplied potential callable. All
// quantities downstream of a holomorphic parametrization stay holomorphic, so
// derivative steps can be taken in complex directions. Returns boundary values
// of (phi1, phi1') only, which is all Gamma_{1-} needs.
struct Phi1Boundary {
    cplx phi1, dphi1;
};
Phi1Boundary integrate_phi1_complex_k(const std::function<cplx(double)>& v,
                                      const std::vector<double>& breaks,
                                      cplx k, double tol = 1e-12);

// Gamma_{1-} for a complex wavenumber, from the boundary values above.
cplx gamma1m_complex_k(const std::function<cplx(double)>& v,
                       const std::vector<double>& breaks, cplx k,
                       double tol = 1e-12);

} // namespace specsing
