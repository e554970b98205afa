#include "specsing/transfer.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>

namespace specsing {

namespace {

namespace ode = boost::numeric::odeint;

// One pass integrates both fundamental solutions: y = (phi1, phi1', phi2, phi2').
using state4 = std::array<cplx, 4>;
// Root-finder variant carries only (phi1, phi1').
using state2 = std::array<cplx, 2>;

// Integrate dy/dx = f(y,x) over [0,1] split at interior breakpoints so the
// stepper never crosses a jump of v.
template <typename State, typename Rhs>
void integrate_split(Rhs rhs, State& y, const std::vector<double>& breaks,
                     double tol, double suggested_h) {
    auto stepper = ode::make_controlled<ode::runge_kutta_fehlberg78<State>>(tol, tol);
    double a = 0.0;
    auto run = [&](double lo, double hi) {
        if (hi <= lo)
            return;
        // Stage evaluations land exactly on (or an ulp past) the segment ends,
        // where a discontinuous v may be read from the wrong side of the jump.
        // Clamp the evaluation point strictly inside the open interval so each
        // segment only ever sees its own branch of v.
        const double in_lo = std::nextafter(lo, hi);
        const double in_hi = std::nextafter(hi, lo);
        auto seg_rhs = [&rhs, in_lo, in_hi](const State& s, State& ds, double x) {
            rhs(s, ds, std::clamp(x, in_lo, in_hi));
        };
        const double h0 = std::min(suggested_h, (hi - lo) / 4.0);
        try {
            ode::integrate_adaptive(stepper, seg_rhs, y, lo, hi, h0);
        } catch (const std::exception& e) {
            throw StepSizeUnderflow(std::string("adaptive integration failed: ") + e.what());
        }
    };
    for (double b : breaks) {
        if (b > a && b < 1.0) {
            run(a, b);
            a = b;
        }
    }
    run(a, 1.0);
}

// Initial step heuristic: resolve the local phase sqrt(|v| + k^2).
double phase_step(double k, double vmag) {
    const double omega = std::sqrt(k * k + vmag) + 1.0;
    return std::min(0.05, 1.0 / omega);
}

} // namespace

FundamentalPair integrate_fundamental(const PotentialSpec& spec, double k, double tol) {
    if (!(k >= k_min_clamp))
        throw ZeroWaveNumber("wavenumber below the 1e-6 clamp");
    if (std::holds_alternative<DeltaArraySpec>(spec))
        throw DeltaNotPointwise("cannot integrate a bare delta array; regularize first");

    const cplx ik(0.0, k);
    state4 y{cplx(1.0), -ik, cplx(1.0), cplx(0.0)};
    const double k2 = k * k;
    auto rhs = [&spec, k2](const state4& s, state4& ds, double x) {
        const cplx w = evaluate_regular(spec, x) - k2;
        ds[0] = s[1];
        ds[1] = w * s[0];
        ds[2] = s[3];
        ds[3] = w * s[2];
    };
    const double vmag = std::abs(evaluate_regular(spec, 0.5));
    integrate_split(rhs, y, breakpoints(spec), tol, phase_step(k, vmag));
    return FundamentalPair{y[0], y[1], y[2], y[3], k};
}

JostQuad jost_from_pair(const FundamentalPair& p) {
    const cplx ik(0.0, p.k);
    return JostQuad{p.dphi1 + ik * p.phi1, p.dphi1 - ik * p.phi1,
                    p.dphi2 + ik * p.phi2, p.dphi2 - ik * p.phi2};
}

TransferMatrix assemble_transfer_matrix(const JostQuad& j, double k) {
    if (!(k >= k_min_clamp))
        throw ZeroWaveNumber("wavenumber below the 1e-6 clamp");
    const cplx i(0.0, 1.0);
    const cplx pref = 1.0 / (2.0 * i * k);
    const cplx em = std::exp(-i * k), ep = std::exp(i * k);
    return TransferMatrix{
        pref * (-em * (j.g1p - 2.0 * j.g2p)),
        pref * (em * j.g1p),
        pref * (ep * (j.g1m - 2.0 * j.g2m)),
        pref * (-ep * j.g1m),
        k,
    };
}

cplx m22(const PotentialSpec& spec, double k, double tol) {
    const JostQuad j = jost_from_pair(integrate_fundamental(spec, k, tol));
    const cplx i(0.0, 1.0);
    return -std::exp(i * k) * j.g1m / (2.0 * i * k);
}

Phi1Boundary integrate_phi1_complex_k(const std::function<cplx(double)>& v,
                                      const std::vector<double>& breaks, cplx k,
                                      double tol) {
    if (!(std::abs(k) >= k_min_clamp))
        throw ZeroWaveNumber("wavenumber below the 1e-6 clamp");
    const cplx ik = cplx(0.0, 1.0) * k;
    state2 y{cplx(1.0), -ik};
    const cplx k2 = k * k;
    auto rhs = [&v, k2](const state2& s, state2& ds, double x) {
        const cplx w = v(x) - k2;
        ds[0] = s[1];
        ds[1] = w * s[0];
    };
    integrate_split(rhs, y, breaks, tol, phase_step(std::abs(k), std::abs(v(0.5))));
    return Phi1Boundary{y[0], y[1]};
}

cplx gamma1m_complex_k(const std::function<cplx(double)>& v,
                       const std::vector<double>& breaks, cplx k, double tol) {
    const Phi1Boundary b = integrate_phi1_complex_k(v, breaks, k, tol);
    return b.dphi1 - cplx(0.0, 1.0) * k * b.phi1;
}

} // namespace specsing
