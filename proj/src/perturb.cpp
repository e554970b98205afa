#include "specsing/perturb.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "specsing/transfer.hpp" // k_min_clamp

namespace specsing {

namespace {

const cplx I(0.0, 1.0);

void check_j(int j) {
    if (j != 1 && j != 2)
        throw std::invalid_argument("basis solution index must be 1 or 2");
}

void check_sign(int sign) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("Jost sign must be +1 or -1");
}

} // namespace

cplx refractive_root(cplx z1, double k) {
    if (!(k > k_min_clamp))
        throw ZeroWaveNumber("refractive_root needs k > " +
                             std::to_string(k_min_clamp));
    cplx fn = std::sqrt(1.0 - z1 / (k * k));
    // principal branch Re >= 0; on the cut (Re = 0) take Im > 0
    if (fn.real() < 0.0 || (fn.real() == 0.0 && fn.imag() < 0.0)) fn = -fn;
    if (std::abs(fn) < 1e-10)
        throw RefractiveRootVanishes("z1 = k^2 within 1e-10");
    return fn;
}

UnperturbedBasis make_basis_free(double k) {
    if (!(k > k_min_clamp))
        throw ZeroWaveNumber("free basis needs k > " +
                             std::to_string(k_min_clamp));
    UnperturbedBasis b;
    b.k = k;
    b.phi1 = [k](double x) { return std::exp(-I * k * x); };
    b.dphi1 = [k](double x) { return -I * k * std::exp(-I * k * x); };
    b.phi2 = [k](double x) { return cplx(std::cos(k * x), 0.0); };
    b.dphi2 = [k](double x) { return cplx(-k * std::sin(k * x), 0.0); };
    b.green = [k](double x, double y) {
        return cplx(std::sin(k * (x - y)) / k, 0.0);
    };
    b.green_dx = [k](double x, double y) {
        return cplx(std::cos(k * (x - y)), 0.0);
    };
    b.phase_scale = k;
    return b;
}

UnperturbedBasis make_basis_barrier(cplx z1, double k) {
    const cplx fn = refractive_root(z1, k);
    const cplx nk = fn * k;
    UnperturbedBasis b;
    b.k = k;
    b.phi1 = [fn, nk](double x) {
        return std::cos(nk * x) - I / fn * std::sin(nk * x);
    };
    b.dphi1 = [fn, nk, k](double x) {
        return -nk * std::sin(nk * x) - I * k * std::cos(nk * x);
    };
    b.phi2 = [nk](double x) { return std::cos(nk * x); };
    b.dphi2 = [nk](double x) { return -nk * std::sin(nk * x); };
    b.green = [nk](double x, double y) { return std::sin(nk * (x - y)) / nk; };
    b.green_dx = [nk](double x, double y) { return std::cos(nk * (x - y)); };
    b.phase_scale = std::abs(nk);
    return b;
}

CorrectionStack correction_stack(const UnperturbedBasis& basis, int j,
                                 const std::function<cplx(double)>& v1,
                                 int levels, int order) {
    check_j(j);
    if (levels < 1)
        throw std::invalid_argument("correction_stack needs levels >= 1");

    const cplx ik(0.0, basis.k);
    const cplx iok = I / basis.k;
    // copies, so returned closures do not dangle on the caller's basis
    const std::function<cplx(double)> f1 = basis.phi1, f2 = basis.phi2;
    const std::function<cplx(double)> df1 = basis.dphi1, df2 = basis.dphi2;

    CorrectionStack st;
    std::function<cplx(double)> prev = (j == 1) ? f1 : f2;
    for (int l = 1; l <= levels; ++l) {
        // phi^(l-1) concentrates near the basis frequency, so the products
        // below stay within ~(l+1.5) characteristic phases; budget for that.
        const int panels = PanelCheb::panels_for_phase(
            (l + 1.5) * 1.1 * basis.phase_scale + 20.0, order);
        auto h = [prev, &v1](double y) { return v1(y) * prev(y); };
        PanelCheb p([&](double y) { return f2(y) * h(y); }, 0.0, 1.0, panels,
                    order);
        PanelCheb q([&](double y) { return f1(y) * h(y); }, 0.0, 1.0, panels,
                    order);
        auto A = std::make_shared<PanelCheb>(p.antiderivative());
        auto B = std::make_shared<PanelCheb>(q.antiderivative());
        std::function<cplx(double)> phi_l = [iok, f1, f2, A, B](double x) {
            return iok * (f1(x) * (*A)(x) - f2(x) * (*B)(x));
        };
        std::function<cplx(double)> dphi_l = [iok, df1, df2, A, B](double x) {
            return iok * (df1(x) * (*A)(x) - df2(x) * (*B)(x));
        };
        const cplx ph = phi_l(1.0), dph = dphi_l(1.0);
        st.phi.push_back(phi_l);
        st.dphi.push_back(dphi_l);
        st.gp.push_back(dph + ik * ph);
        st.gm.push_back(dph - ik * ph);
        prev = phi_l;
    }
    return st;
}

cplx phi_correction(const UnperturbedBasis& basis, int j,
                    const std::function<cplx(double)>& v1, int ell, double x,
                    int order) {
    if (ell < 1) throw std::invalid_argument("phi_correction needs ell >= 1");
    CorrectionStack st = correction_stack(basis, j, v1, ell, order);
    return st.phi[static_cast<size_t>(ell) - 1](x);
}

cplx jost_correction(const UnperturbedBasis& basis, int j,
                     const std::function<cplx(double)>& v1, int ell, int sign,
                     int order) {
    check_sign(sign);
    if (ell < 1) throw std::invalid_argument("jost_correction needs ell >= 1");
    CorrectionStack st = correction_stack(basis, j, v1, ell, order);
    return sign > 0 ? st.gp[static_cast<size_t>(ell) - 1]
                    : st.gm[static_cast<size_t>(ell) - 1];
}

cplx jost_correction_delta(const UnperturbedBasis& basis,
                           const DeltaArraySpec& deltas, int ell, int j,
                           int sign) {
    check_j(j);
    check_sign(sign);
    if (ell < 1)
        throw std::invalid_argument("jost_correction_delta needs ell >= 1");
    validate(PotentialSpec{deltas});

    const int n = static_cast<int>(deltas.centers.size());
    const cplx ik(0.0, basis.k);
    const auto& phi0 = (j == 1) ? basis.phi1 : basis.phi2;
    // theta(0) = 1: coincident arguments are admitted, the Green's-function
    // zero on the diagonal is what actually kills the repeated-index terms
    auto theta = [](double t) { return t >= 0.0 ? 1.0 : 0.0; };

    std::vector<int> idx(static_cast<size_t>(ell), 0);
    cplx sum(0.0, 0.0);
    for (;;) {
        cplx term = phi0(deltas.centers[idx[0]]);
        for (int m = 0; m + 1 < ell; ++m) {
            const double lo = deltas.centers[idx[m]];
            const double hi = deltas.centers[idx[m + 1]];
            term *= basis.green(hi, lo) * theta(hi - lo) *
                    deltas.couplings[idx[m]];
        }
        const double last = deltas.centers[idx[static_cast<size_t>(ell) - 1]];
        const cplx kernel = basis.green_dx(1.0, last) +
                            static_cast<double>(sign) * ik *
                                basis.green(1.0, last);
        sum += term * kernel * deltas.couplings[idx[static_cast<size_t>(ell) - 1]];

        int p = 0;
        while (p < ell && ++idx[p] == n) {
            idx[p] = 0;
            ++p;
        }
        if (p == ell) break;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Barrier specialization
// ---------------------------------------------------------------------------

namespace {

void check_fn(cplx fn) {
    if (std::abs(fn) < 1e-10)
        throw RefractiveRootVanishes("|n| < 1e-10 in barrier formula");
}

} // namespace

cplx barrier_F0(cplx fn, double k) {
    check_fn(fn);
    const cplx nk = fn * k;
    return -(k / fn) * ((fn * fn + 1.0) * std::sin(nk) +
                        2.0 * I * fn * std::cos(nk));
}

cplx barrier_F0_factored(cplx fn, double k) {
    check_fn(fn);
    const cplx nk = fn * k;
    const cplx rho = (fn - 1.0) / (fn + 1.0);
    return k * (fn + 1.0) * (fn + 1.0) * std::exp(I * nk) / (2.0 * I * fn) *
           (std::exp(-2.0 * I * nk) - rho * rho);
}

cplx ss_zero_residual(cplx fn, double k) {
    const cplx rho = (fn - 1.0) / (fn + 1.0);
    return std::exp(-2.0 * I * fn * k) - rho * rho;
}

cplx barrier_xi(cplx fn, double k, double x) {
    check_fn(fn);
    const cplx nk = fn * k;
    const cplx inv2 = 1.0 / (fn * fn);
    return 0.5 * ((1.0 + inv2) * std::cos(nk) -
                  2.0 * I * std::sin(nk) / fn +
                  (1.0 - inv2) * std::cos(nk * (2.0 * x - 1.0)));
}

int ss_branch(cplx fn0, double k0) {
    check_fn(fn0);
    const cplx n2 = fn0 * fn0;
    const cplx target = (n2 + 1.0) / (n2 - 1.0);
    return std::real(std::cos(fn0 * k0) * std::conj(target)) >= 0.0 ? 1 : -1;
}

cplx barrier_xi_at_ss(cplx fn0, double k0, double x) {
    check_fn(fn0);
    const cplx amp = 1.0 - 1.0 / (fn0 * fn0);
    if (ss_branch(fn0, k0) > 0) {
        const cplx c = std::cos(fn0 * k0 * (x - 0.5));
        return amp * c * c;
    }
    const cplx s = std::sin(fn0 * k0 * (x - 0.5));
    return -amp * s * s;
}

cplx barrier_F_ell(cplx fn, double k, const GainProfile& profile, int ell,
                   int order) {
    check_fn(fn);
    if (ell < 1) throw std::invalid_argument("barrier_F_ell needs ell >= 1");
    const cplx nk = fn * k;
    const double ps = std::abs(nk);
    auto f = [&profile](double x) { return profile_value(profile, x); };

    if (ell == 1) {
        const int panels =
            PanelCheb::panels_for_phase(2.2 * ps + 20.0, order);
        PanelCheb g([&](double x) { return barrier_xi(fn, k, x) * f(x); }, 0.0,
                    1.0, panels, order);
        return g.integral();
    }

    // T_0(x) = phi1(x); T_m(x) = int_0^x sin[nk(x-y)] f(y) T_{m-1}(y) dy via
    // the addition split sin[nk(x-y)] = sin(nk x)cos(nk y) - cos(nk x)sin(nk y)
    auto phi1 = [fn, nk](double x) {
        return std::cos(nk * x) - I / fn * std::sin(nk * x);
    };
    std::function<cplx(double)> T = phi1;
    for (int m = 1; m <= ell - 1; ++m) {
        const int panels = PanelCheb::panels_for_phase(
            (m + 1.5) * 1.1 * ps + 20.0, order);
        auto w = [&T, &f](double y) { return f(y) * T(y); };
        PanelCheb pc([&](double y) { return std::cos(nk * y) * w(y); }, 0.0,
                     1.0, panels, order);
        PanelCheb psn([&](double y) { return std::sin(nk * y) * w(y); }, 0.0,
                      1.0, panels, order);
        auto C = std::make_shared<PanelCheb>(pc.antiderivative());
        auto S = std::make_shared<PanelCheb>(psn.antiderivative());
        T = [nk, C, S](double x) {
            return std::sin(nk * x) * (*C)(x) - std::cos(nk * x) * (*S)(x);
        };
    }
    const int panels = PanelCheb::panels_for_phase(
        (ell + 1.5) * 1.1 * ps + 20.0, order);
    PanelCheb outer([&](double x) { return phi1(1.0 - x) * f(x) * T(x); }, 0.0,
                    1.0, panels, order);
    return std::pow(nk, 1 - ell) * outer.integral();
}

cplx F100_closed(cplx fn0, double k0, double nu, Pumping pumping) {
    check_fn(fn0);
    if (!(nu > 0.0))
        throw std::invalid_argument("F100_closed needs nu > 0");
    const cplx res = ss_zero_residual(fn0, k0);
    if (std::abs(res) > 1e-8)
        throw NotAtSingularity("singularity residual " +
                               std::to_string(std::abs(res)) +
                               " exceeds 1e-8 in F100_closed");

    const cplx b = fn0 * k0;
    const cplx D = 4.0 * b * b + nu * nu;
    const cplx s = std::sin(b);
    const cplx chalf = std::cos(0.5 * b);
    const cplx c2 = chalf * chalf;
    const cplx pre = -(fn0 * fn0 - 1.0) / (2.0 * fn0 * fn0 * fn0 * k0);

    cplx base;
    if (pumping == Pumping::Single) {
        const cplx num = 2.0 * b * (2.0 * b * b - b * nu * s + nu * nu * c2) *
                             std::exp(-nu) -
                         2.0 * b * (2.0 * b * b + b * nu * s + nu * nu * c2) +
                         nu * (b + s) * D;
        base = pre * num / (nu * nu * D);
    } else {
        const double t = std::tanh(0.5 * nu);
        const cplx num = 4.0 * b * b * b * nu - 8.0 * b * b * b * t +
                         b * nu * nu * nu - 4.0 * b * nu * nu * c2 * t +
                         nu * nu * nu * s;
        base = pre * num / (nu * nu * nu * D);
    }
    if (ss_branch(fn0, k0) > 0)
        return base;

    // On the e^{-ink} = -rho branch xi differs from its cos^2 shape by the
    // constant -(1 - 1/n^2), so F1 shifts by that constant times int_0^1 f.
    double intf;
    if (pumping == Pumping::Single)
        intf = nu < 1e-4 ? -0.5 + nu / 6.0 - nu * nu / 24.0
                         : (1.0 - std::exp(-nu) - nu) / (nu * nu);
    else
        intf = nu < 1e-4 ? -1.0 / 12.0 + nu * nu / 120.0
                         : (2.0 * std::tanh(0.5 * nu) / nu - 1.0) / (nu * nu);
    return base - (1.0 - 1.0 / (fn0 * fn0)) * intf;
}

} // namespace specsing
