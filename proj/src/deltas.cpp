#include "specsing/deltas.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace specsing {

namespace {

const cplx I(0.0, 1.0);

// Sum over l = 1..n of pref_base^{-l} * sum over chains i_1 < ... < i_l of
//   w[i_1] * prod_p z[i_p] * prod_m [1 - e^{sigma * 2ik (a_{m+1} - a_m)}].
// C[p] accumulates the chain sum for chains ending at p; extending a chain
// appends a larger index, so the start weight rides along from the seed.
cplx chain_sum(const DeltaArraySpec& s, double k, int sigma,
               const std::vector<cplx>& w, cplx pref_base) {
    const int n = static_cast<int>(s.centers.size());
    std::vector<cplx> C(n);
    for (int i = 0; i < n; ++i) C[i] = w[i] * s.couplings[i];

    cplx total(0.0, 0.0);
    cplx pref(1.0, 0.0);
    for (int l = 1; l <= n; ++l) {
        pref /= pref_base;
        for (int i = 0; i < n; ++i) total += pref * C[i];
        if (l == n) break;
        std::vector<cplx> D(n, cplx(0.0, 0.0));
        for (int p = 1; p < n; ++p) {
            cplx acc(0.0, 0.0);
            for (int q = 0; q < p; ++q) {
                const double d = s.centers[p] - s.centers[q];
                acc += C[q] * (1.0 - std::exp(cplx(0.0, sigma * 2.0 * k * d)));
            }
            D[p] = acc * s.couplings[p];
        }
        C = std::move(D);
    }
    return total;
}

void check_k(double k) {
    if (!(k > k_min_clamp))
        throw ZeroWaveNumber("delta-array matrix needs k > " +
                             std::to_string(k_min_clamp));
}

double frobenius(const TransferMatrix& m) {
    return std::sqrt(std::norm(m.m11) + std::norm(m.m12) + std::norm(m.m21) +
                     std::norm(m.m22));
}

} // namespace

TransferMatrix closed_form_matrix(const DeltaArraySpec& spec, double k) {
    validate(PotentialSpec{spec});
    check_k(k);
    const int n = static_cast<int>(spec.centers.size());
    const cplx two_ik = 2.0 * I * k;

    std::vector<cplx> ones(n, cplx(1.0, 0.0));
    std::vector<cplx> wm(n), wp(n);
    for (int i = 0; i < n; ++i) {
        wm[i] = std::exp(cplx(0.0, -2.0 * k * spec.centers[i]));
        wp[i] = std::exp(cplx(0.0, 2.0 * k * spec.centers[i]));
    }

    TransferMatrix m;
    m.k = k;
    m.m11 = 1.0 + chain_sum(spec, k, -1, ones, two_ik);
    m.m12 = chain_sum(spec, k, -1, wm, two_ik);
    m.m21 = chain_sum(spec, k, +1, wp, -two_ik);
    m.m22 = 1.0 + chain_sum(spec, k, +1, ones, -two_ik);
    return m;
}

TransferMatrix composition_oracle(const DeltaArraySpec& spec, double k) {
    validate(PotentialSpec{spec});
    check_k(k);

    TransferMatrix m;
    m.k = k;
    m.m11 = m.m22 = 1.0;
    m.m12 = m.m21 = 0.0;
    for (size_t i = 0; i < spec.centers.size(); ++i) {
        const cplx z = spec.couplings[i];
        const double a = spec.centers[i];
        const cplx izk = I * z / (2.0 * k);
        const cplx f11 = 1.0 - izk;
        const cplx f12 = -izk * std::exp(cplx(0.0, -2.0 * k * a));
        const cplx f21 = izk * std::exp(cplx(0.0, 2.0 * k * a));
        const cplx f22 = 1.0 + izk;
        // left-multiply: factors for larger centers stack on the left
        const cplx n11 = f11 * m.m11 + f12 * m.m21;
        const cplx n12 = f11 * m.m12 + f12 * m.m22;
        const cplx n21 = f21 * m.m11 + f22 * m.m21;
        const cplx n22 = f21 * m.m12 + f22 * m.m22;
        m.m11 = n11;
        m.m12 = n12;
        m.m21 = n21;
        m.m22 = n22;
    }
    return m;
}

ZCoefficient z_coefficients(const DeltaArraySpec& spec, double k, int ell,
                            int j) {
    validate(PotentialSpec{spec});
    check_k(k);
    if (ell < 1) throw std::invalid_argument("z_coefficients needs ell >= 1");
    if (j != 1 && j != 2)
        throw std::invalid_argument("solution index must be 1 or 2");

    const int n = static_cast<int>(spec.centers.size());
    ZCoefficient out;
    out.ell = ell;
    out.j = j;
    out.values.assign(n, cplx(0.0, 0.0));
    if (ell > n) return out; // series truncates: theta(n - l) = 0

    // E[p] = sum over chains of the current length ending at p of
    // phi_j(a_{i_1}) * prod z_{i_m} sin[k(a_{i_{m+1}} - a_{i_m})]; the final
    // coupling z_{i_l} enters only at readout.
    std::vector<cplx> E(n);
    for (int p = 0; p < n; ++p)
        E[p] = (j == 1) ? std::exp(cplx(0.0, -k * spec.centers[p]))
                        : cplx(std::cos(k * spec.centers[p]), 0.0);
    for (int len = 2; len <= ell; ++len) {
        std::vector<cplx> F(n, cplx(0.0, 0.0));
        for (int p = 1; p < n; ++p) {
            cplx acc(0.0, 0.0);
            for (int q = 0; q < p; ++q)
                acc += E[q] * spec.couplings[q] *
                       std::sin(k * (spec.centers[p] - spec.centers[q]));
            F[p] = acc;
        }
        E = std::move(F);
    }
    const double kpow = std::pow(k, -ell);
    for (int p = 0; p < n; ++p) out.values[p] = kpow * spec.couplings[p] * E[p];
    return out;
}

std::vector<DeltaRoot> find_singularities_delta(const DeltaArraySpec& spec,
                                                double k_min, double k_max,
                                                int k_points,
                                                DeltaStrategy strategy,
                                                int solve_index) {
    validate(PotentialSpec{spec});
    if (!(k_min > k_min_clamp) || !(k_max > k_min) || k_points < 2)
        throw MalformedConfig("need k_min > clamp, k_max > k_min, k_points >= 2");

    const int n = static_cast<int>(spec.centers.size());
    std::vector<double> grid(k_points);
    for (int i = 0; i < k_points; ++i)
        grid[i] = k_min + (k_max - k_min) * i / (k_points - 1);

    std::vector<DeltaRoot> roots;

    if (strategy == DeltaStrategy::SolveOneCoupling) {
        if (solve_index < 0 || solve_index >= n)
            throw MalformedConfig("solve_index outside the coupling list");
        for (double k : grid) {
            DeltaArraySpec probe = spec;
            probe.couplings[solve_index] = 0.0;
            const cplx a0 = closed_form_matrix(probe, k).m22;
            probe.couplings[solve_index] = 1.0;
            const cplx b = closed_form_matrix(probe, k).m22 - a0;
            if (std::abs(b) < 1e-14 * std::max(1.0, std::abs(a0)))
                continue; // M22 insensitive to this coupling at this k
            const cplx z = -a0 / b;
            probe.couplings[solve_index] = z;
            DeltaRoot r;
            r.k = k;
            r.coupling = z;
            r.solved = true;
            r.residual = std::abs(closed_form_matrix(probe, k).m22);
            roots.push_back(r);
        }
        if (roots.empty())
            throw NoRootInRange(
                "coupling equation degenerate across the whole k grid");
        return roots;
    }

    // ScanFixedCouplings: polish interior local minima of |M22|
    std::vector<double> mag(grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
        mag[i] = std::abs(closed_form_matrix(spec, grid[i]).m22);

    for (size_t i = 1; i + 1 < grid.size(); ++i) {
        if (!(mag[i] <= mag[i - 1] && mag[i] <= mag[i + 1])) continue;
        double lo = grid[i - 1], hi = grid[i + 1];
        for (int it = 0; it < 240 && hi - lo > 1e-14 * hi; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (std::abs(closed_form_matrix(spec, m1).m22) <
                std::abs(closed_form_matrix(spec, m2).m22))
                hi = m2;
            else
                lo = m1;
        }
        const double ks = 0.5 * (lo + hi);
        const TransferMatrix m = closed_form_matrix(spec, ks);
        const double res = std::abs(m.m22);
        if (res >= 1e-8 * std::max(1.0, frobenius(m))) continue;
        if (!roots.empty() && std::abs(roots.back().k - ks) < 1e-9)
            continue; // same minimum reached from adjacent grid cells
        DeltaRoot r;
        r.k = ks;
        r.residual = res;
        roots.push_back(r);
    }
    return roots;
}

GenericRegular regularize(const DeltaArraySpec& spec, double w) {
    validate(PotentialSpec{spec});
    if (!(w > 0.0)) throw MalformedConfig("regularization width must be > 0");
    const auto& a = spec.centers;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] - w / 2.0 <= 0.0 || a[i] + w / 2.0 >= 1.0)
            throw MalformedConfig("rectangle sticks out of (0,1)");
        if (i > 0 && a[i] - a[i - 1] <= w)
            throw MalformedConfig("rectangles overlap");
    }

    GenericRegular g;
    auto centers = spec.centers;
    auto heights = spec.couplings;
    for (auto& h : heights) h /= w;
    g.v = [centers, heights, w](double x) {
        for (size_t i = 0; i < centers.size(); ++i)
            if (std::abs(x - centers[i]) < w / 2.0) return heights[i];
        return cplx(0.0, 0.0);
    };
    for (double c : centers) {
        g.breakpoints.push_back(c - w / 2.0);
        g.breakpoints.push_back(c + w / 2.0);
    }
    std::sort(g.breakpoints.begin(), g.breakpoints.end());
    return g;
}

} // namespace specsing
