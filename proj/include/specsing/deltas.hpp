#pragma once

#include <vector>

#include "specsing/potential.hpp"
#include "specsing/transfer.hpp"

namespace specsing {

// ---------------------------------------------------------------------------
// Exact transfer matrix for an array of n complex delta functions. The entries
// are finite sums over strictly increasing index chains i_1 < ... < i_l with
// products of couplings and phase pair-factors; they are evaluated by a prefix
// recursion over the chain end (O(n^2) per order), never by enumerating
// subsets. The series truncates at l = n, so these are closed forms, not
// approximations.
// ---------------------------------------------------------------------------

TransferMatrix closed_form_matrix(const DeltaArraySpec& spec, double k);

// Independent oracle: ordered product of single-delta matrices,
// M = M_n * ... * M_1 (leftmost scatterer applied first). Each factor is the
// n = 1 closed form with its own center; in the plane-wave basis free
// propagation between deltas is the identity, so the product reproduces the
// full matrix. Kept deliberately naive as a cross-check.
TransferMatrix composition_oracle(const DeltaArraySpec& spec, double k);

// Chain-sum coefficients of the correction series for the fundamental
// solutions: phi_j^(l)(x) = sum_i values[i] sin[k(x-a_i)] theta(x-a_i).
// values is identically zero for l > n.
struct ZCoefficient {
    int ell = 0;
    int j = 0;
    std::vector<cplx> values;
};

ZCoefficient z_coefficients(const DeltaArraySpec& spec, double k, int ell,
                            int j);

// ---------------------------------------------------------------------------
// Singularity searches over real k.
// ---------------------------------------------------------------------------

enum class DeltaStrategy {
    // Couplings held fixed: scan |M22| over the k grid, polish each interior
    // local minimum, keep those below 1e-8 * max(1, ||M||_F).
    ScanFixedCouplings,
    // One designated coupling solved for: M22 is affine in any single z_j, so
    // each grid k yields the unique complex z_j with M22(k) = 0.
    SolveOneCoupling,
};

struct DeltaRoot {
    double k = 0.0;
    cplx coupling{0.0, 0.0}; // solved coupling value (SolveOneCoupling only)
    bool solved = false;     // whether `coupling` is meaningful
    double residual = 0.0;   // |M22| at the reported point
};

std::vector<DeltaRoot> find_singularities_delta(const DeltaArraySpec& spec,
                                                double k_min, double k_max,
                                                int k_points,
                                                DeltaStrategy strategy,
                                                int solve_index = 0);

// Test device: replaces each delta by a rectangle of width w and height z_i/w.
// The rectangles must fit inside (0,1) without touching each other. The ODE
// engine run on this potential converges to the delta-array matrix at first
// order in w.
GenericRegular regularize(const DeltaArraySpec& spec, double w);

} // namespace specsing
