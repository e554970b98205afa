#include "specsing/finder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "specsing/errors.hpp"

namespace specsing {

namespace {

constexpr cplx I{0.0, 1.0};

// Residual of the constant-barrier singularity condition together with its
// partials in the two "physical" directions. r = e^{-2 i n k} - rho^2 with
// rho = (n-1)/(n+1); dr/dn and dr/dk are exact.
struct BarrierResidual {
    cplx r, dr_dn, dr_dk;
};

BarrierResidual barrier_residual(cplx fn, double k) {
    const cplx e = std::exp(-2.0 * I * fn * k);
    const cplx rho = (fn - 1.0) / (fn + 1.0);
    BarrierResidual br;
    br.r = e - rho * rho;
    br.dr_dn = -2.0 * I * k * e - 4.0 * rho / ((fn + 1.0) * (fn + 1.0));
    br.dr_dk = -2.0 * I * fn * e;
    return br;
}

// Solve the 2x2 real system  Re(a) x + Re(b) y = -Re(r),
//                            Im(a) x + Im(b) y = -Im(r).
// Returns false when the determinant is negligible against |a||b|.
bool solve_real_2x2(cplx a, cplx b, cplx r, double& x, double& y) {
    const double det = std::real(a) * std::imag(b) - std::real(b) * std::imag(a);
    const double floor = 1e-18 * std::abs(a) * std::abs(b);
    if (!(std::abs(det) > floor)) return false;
    x = (-std::real(r) * std::imag(b) + std::real(b) * std::imag(r)) / det;
    y = (-std::imag(r) * std::real(a) + std::imag(a) * std::real(r)) / det;
    return true;
}

double clamp_step(double v, double lim) {
    return std::clamp(v, -lim, lim);
}

} // namespace

UnperturbedRoot solve_unperturbed(const SlabMedium& medium, int mode_m,
                                  std::optional<std::pair<double, double>> seed) {
    validate_medium(medium);
    if (mode_m <= 0) throw MalformedConfig("mode number must be positive");

    double lam, g_cm;
    if (seed) {
        lam = seed->first;
        g_cm = seed->second;
    } else {
        // Half-wave stack estimate for the wavelength; for the gain, take the
        // best point of a coarse scan of the residual magnitude over the
        // physically admissible range [0, alpha].
        lam = 2.0 * medium.n0 * medium.L_nm() / static_cast<double>(mode_m);
        const int npts = 201;
        double best = std::numeric_limits<double>::infinity();
        g_cm = 0.0;
        for (int i = 0; i < npts; ++i) {
            const double g = medium.alpha_per_cm * static_cast<double>(i) /
                             static_cast<double>(npts - 1);
            const auto dp = map_parameters(medium, lam, g);
            const double mag = std::abs(barrier_residual(dp.fn, dp.k).r);
            if (mag < best) {
                best = mag;
                g_cm = g;
            }
        }
    }

    const double step_lam_max = 1.0;   // nm
    const double step_g_max = 20.0;    // cm^-1
    for (int it = 0; it < 60; ++it) {
        const auto fd = fn_and_derivatives(medium, lam, g_cm);
        const double k = 2.0 * std::numbers::pi * medium.L_nm() / lam;
        const auto br = barrier_residual(fd.fn0, k);
        if (std::abs(br.r) < 1e-12) {
            UnperturbedRoot root;
            root.lambda0_nm = lam;
            root.g0_per_cm = g_cm;
            root.k0 = k;
            root.fn0 = fd.fn0;
            return root;
        }
        // Chain rule onto the laboratory variables. fn10 is per nm, fn01 per
        // nm^-1 of gain; the gain step is converted to cm^-1 for clamping.
        const cplx dr_dlam = br.dr_dn * fd.fn10 + br.dr_dk * (-k / lam);
        const cplx dr_dg_nm = br.dr_dn * fd.fn01;
        double dlam = 0.0, dg_nm = 0.0;
        if (!solve_real_2x2(dr_dlam, dr_dg_nm, br.r, dlam, dg_nm))
            throw JacobianSingular(
                "barrier root solve for mode " + std::to_string(mode_m) +
                " hit a degenerate Jacobian");
        lam += clamp_step(dlam, step_lam_max);
        g_cm += clamp_step(dg_nm * 1e7, step_g_max);
    }
    throw NoConvergence("barrier root solve for mode " +
                        std::to_string(mode_m) +
                        " did not converge in 60 iterations");
}

TaylorData taylor_data(cplx fn0, double k0, const GainProfile& profile,
                       int order) {
    const double miss = std::abs(ss_zero_residual(fn0, k0));
    if (!(miss < 1e-8))
        throw NotAtSingularity(
            "expansion point misses the barrier singularity condition by " +
            std::to_string(miss));

    TaylorData td;
    const cplx zeta1 = k0 * k0 * (1.0 - fn0 * fn0);
    // The root-evaluated partials of F0 carry the square-root branch of the
    // singularity condition: substituting cos(nk) = sigma (n^2+1)/(n^2-1)
    // into dF0/dn and dF0/dk leaves an overall factor sigma. The
    // finite-difference blocks below pick the branch up automatically.
    const double sigma = ss_branch(fn0, k0);
    td.F000 = barrier_F0(fn0, k0);
    td.F010 = sigma * (zeta1 + 2.0 * I * k0) / fn0;
    td.F001 = sigma * zeta1 / k0;

    // Second-order block of F0 from the closed form. Step sizes follow the
    // usual optimum for second central differences, scaled by the local
    // oscillation rate of each direction (k for n, |n| for k).
    const double hn2 = 3.2e-4 / k0;
    const double hk2 = 3.2e-4 / std::abs(fn0);
    td.F020 = 0.5 *
              (barrier_F0(fn0 + hn2, k0) - 2.0 * td.F000 +
               barrier_F0(fn0 - hn2, k0)) /
              (hn2 * hn2);
    td.F002 = 0.5 *
              (barrier_F0(fn0, k0 + hk2) - 2.0 * td.F000 +
               barrier_F0(fn0, k0 - hk2)) /
              (hk2 * hk2);
    td.F011 = (barrier_F0(fn0 + hn2, k0 + hk2) -
               barrier_F0(fn0 + hn2, k0 - hk2) -
               barrier_F0(fn0 - hn2, k0 + hk2) +
               barrier_F0(fn0 - hn2, k0 - hk2)) /
              (4.0 * hn2 * hk2);

    // First-order series coefficient: closed form when available, quadrature
    // otherwise (custom profiles, or nu so small the closed form loses digits
    // to its nu-power denominators).
    const bool closed =
        profile.kind != GainProfile::Kind::Custom && profile.nu > 1e-3;
    if (closed) {
        const Pumping p = profile.kind == GainProfile::Kind::SinglePumping
                              ? Pumping::Single
                              : Pumping::Double;
        td.F100 = F100_closed(fn0, k0, profile.nu, p);
    } else {
        td.F100 = barrier_F_ell(fn0, k0, profile, 1, order);
    }

    const double hn1 = 6.06e-6 / k0;
    const double hk1 = 6.06e-6 / std::abs(fn0);
    td.F110 = (barrier_F_ell(fn0 + hn1, k0, profile, 1, order) -
               barrier_F_ell(fn0 - hn1, k0, profile, 1, order)) /
              (2.0 * hn1);
    td.F101 = (barrier_F_ell(fn0, k0 + hk1, profile, 1, order) -
               barrier_F_ell(fn0, k0 - hk1, profile, 1, order)) /
              (2.0 * hk1);
    td.F200 = barrier_F_ell(fn0, k0, profile, 2, order);
    return td;
}

CorrectionCoefficients first_order_correction(const TaylorData& td,
                                              const SlabMedium& medium,
                                              double lambda0_nm,
                                              double g0_per_cm) {
    const auto fd = fn_and_derivatives(medium, lambda0_nm, g0_per_cm);
    const auto dp = map_parameters(medium, lambda0_nm, g0_per_cm);

    // Linearized singularity condition in the laboratory variables:
    //   X * lambda1 + Y * g1 + F100 * zeta2 = 0, lambda1 and g1 real,
    // with X, Y chained through the dispersion derivatives. F010 and F001
    // already carry the square-root branch sign of the root, so they are
    // taken from the Taylor data rather than re-derived here.
    const cplx dk_dl = -dp.k / lambda0_nm;
    CorrectionCoefficients cc;
    cc.X = td.F010 * fd.fn10 + td.F001 * dk_dl;
    cc.Y = td.F010 * fd.fn01;
    cc.rhs = td.F100 * dp.zeta2;

    const double den = std::imag(cc.X * std::conj(cc.Y));
    if (!(std::abs(den) > 1e-18 * std::abs(cc.X) * std::abs(cc.Y)))
        throw DegenerateXY(
            "wavelength and gain responses are collinear; the first-order "
            "system has no unique real solution");
    cc.lambda1_nm = -std::imag(cc.rhs * std::conj(cc.Y)) / den;
    cc.g1_per_cm = std::imag(cc.rhs * std::conj(cc.X)) / den * 1e7;
    return cc;
}

std::pair<cplx, cplx> generic_corrections(const TaylorData& td, cplx z2,
                                          int order) {
    if (order < 1 || order > 2)
        throw std::invalid_argument("generic_corrections: order must be 1 or 2");
    if (!(std::abs(td.F010) > 1e-14 * std::max(1.0, std::abs(td.F100 * z2))))
        throw DegenerateF010(
            "leading coefficient F010 is too small to divide by");
    const cplx fn1 = -td.F100 * z2 / td.F010;
    cplx fn2 = 0.0;
    if (order == 2)
        fn2 = -(td.F020 * fn1 * fn1 + td.F110 * fn1 * z2 + td.F200 * z2 * z2) /
              td.F010;
    return {fn1, fn2};
}

SingularityResult full_numeric_singularity(const SlabMedium& medium,
                                           int mode_m,
                                           std::pair<double, double> seed) {
    validate_medium(medium);
    double lam = seed.first;
    double g_cm = seed.second;
    const double ode_tol = 1e-13;
    // The boundary functional is holomorphic in both laboratory variables, so
    // imaginary-direction central differences give derivatives without the
    // subtractive cancellation a real step would suffer this close to a zero.
    const double hl = 1e-6;   // nm
    const double hg = 1e-5;   // cm^-1

    SlabBoundary bd;
    bool converged = false;
    for (int it = 0; it < 40; ++it) {
        bd = slab_oracle(medium, lam, g_cm, ode_tol);
        if (std::abs(bd.gamma1m) < 1e-11 * bd.scale) {
            converged = true;
            break;
        }
        const cplx dG_dl = (slab_gamma1m(medium, lam + I * hl, g_cm, ode_tol) -
                            slab_gamma1m(medium, lam - I * hl, g_cm, ode_tol)) /
                           (2.0 * I * hl);
        const cplx dG_dg = (slab_gamma1m(medium, lam, g_cm + I * hg, ode_tol) -
                            slab_gamma1m(medium, lam, g_cm - I * hg, ode_tol)) /
                           (2.0 * I * hg);
        double dlam = 0.0, dg = 0.0;
        if (!solve_real_2x2(dG_dl, dG_dg, bd.gamma1m, dlam, dg))
            throw JacobianSingular(
                "full numeric solve for mode " + std::to_string(mode_m) +
                " hit a degenerate Jacobian");
        const double step_l = clamp_step(dlam, 0.2);
        const double step_g = clamp_step(dg, 10.0);
        lam += step_l;
        g_cm += step_g;
        // The integrator noise floor sits near 1e-10 of scale, which the
        // residual cannot always dip under; once the Newton step is orders of
        // magnitude below the reporting precision the iteration is done.
        if (std::abs(step_l) < 1e-9 && std::abs(step_g) < 1e-7) {
            bd = slab_oracle(medium, lam, g_cm, ode_tol);
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergence(
            "full numeric solve for mode " + std::to_string(mode_m) +
            " stalled at relative residual " +
            std::to_string(std::abs(bd.gamma1m) / bd.scale));

    SingularityResult res;
    res.mode_m = mode_m;
    res.nu = medium.nu;
    res.pumping = medium.pumping;
    res.order = -1;
    res.lambda0_nm = seed.first;
    res.g0_per_cm = seed.second;
    res.lambda_star_nm = lam;
    res.g_star_per_cm = g_cm;
    const auto dp = map_parameters(medium, lam, g_cm);
    res.eps = dp.eps;
    res.fn0 = dp.fn;
    res.k0 = dp.k;
    res.residual = std::abs(bd.gamma1m) / (2.0 * std::abs(bd.k));
    return res;
}

int mode_number(double lambda_nm, const SlabMedium& medium) {
    const auto fd = fn_and_derivatives(medium, lambda_nm, 0.0);
    return static_cast<int>(std::lround(2.0 * std::real(fd.fn0) *
                                        medium.L_nm() / lambda_nm));
}

std::vector<SingularityResult> table1_pipeline(const SlabMedium& base,
                                               std::vector<int> modes,
                                               std::vector<double> nus,
                                               int threads, bool want_single,
                                               bool want_double) {
    validate_medium(base);
    if (!want_single && !want_double)
        throw EmptyArray("table pipeline needs at least one pumping kind");
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    std::sort(nus.begin(), nus.end());
    nus.erase(std::unique(nus.begin(), nus.end()), nus.end());
    if (modes.empty() || nus.empty())
        throw EmptyArray("table pipeline needs at least one mode and one "
                         "pumping rate");
    for (double nu : nus)
        if (nu < 0.0) throw MalformedConfig("pumping rate nu must be >= 0");

    // The unperturbed root depends only on the mode, not on nu or the
    // pumping arrangement; solve each one once up front.
    std::map<int, UnperturbedRoot> roots;
    for (int m : modes) roots[m] = solve_unperturbed(base, m);

    struct Cell {
        int m;
        double nu;
        Pumping p;
    };
    std::vector<Cell> cells;
    cells.reserve(modes.size() * nus.size() * 2);
    for (int m : modes)
        for (double nu : nus) {
            if (want_single) cells.push_back({m, nu, Pumping::Single});
            if (want_double) cells.push_back({m, nu, Pumping::Double});
        }

    std::vector<SingularityResult> out(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());

    auto solve_cell = [&](const Cell& c) {
        SlabMedium med = base;
        med.nu = c.nu;
        med.pumping = c.p;
        const UnperturbedRoot& root = roots.at(c.m);

        SingularityResult res;
        res.mode_m = c.m;
        res.nu = c.nu;
        res.pumping = c.p;
        res.lambda0_nm = root.lambda0_nm;
        res.g0_per_cm = root.g0_per_cm;
        res.fn0 = root.fn0;
        res.k0 = root.k0;
        if (c.nu == 0.0) {
            res.order = 0;
            res.lambda_star_nm = root.lambda0_nm;
            res.g_star_per_cm = root.g0_per_cm;
            res.eps = 0.0;
        } else {
            res.order = 1;
            const GainProfile prof = c.p == Pumping::Single
                                         ? single_pumping(c.nu)
                                         : double_pumping(c.nu);
            const TaylorData td = taylor_data(root.fn0, root.k0, prof);
            const CorrectionCoefficients cc =
                first_order_correction(td, med, root.lambda0_nm,
                                       root.g0_per_cm);
            res.eps =
                map_parameters(med, root.lambda0_nm, root.g0_per_cm).eps;
            res.lambda_star_nm = root.lambda0_nm + cc.lambda1_nm * res.eps;
            res.g_star_per_cm = root.g0_per_cm + cc.g1_per_cm * res.eps;
            res.X = cc.X;
            res.Y = cc.Y;
            res.rhs = cc.rhs;
        }
        // Honest diagnostic: |M22| of the exact inhomogeneous slab at the
        // starred point, so first-order rows carry their truncation error.
        const SlabBoundary bd =
            slab_oracle(med, res.lambda_star_nm, res.g_star_per_cm, 1e-12);
        res.residual = std::abs(bd.gamma1m) / (2.0 * std::abs(bd.k));
        return res;
    };

    int nthreads = threads;
    if (nthreads <= 0) {
        if (const char* env = std::getenv("SPECSING_THREADS"))
            nthreads = std::atoi(env);
        if (nthreads <= 0)
            nthreads = static_cast<int>(std::thread::hardware_concurrency());
        if (nthreads <= 0) nthreads = 1;
    }
    nthreads = std::min<int>(nthreads, static_cast<int>(cells.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                out[i] = solve_cell(cells[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace specsing
