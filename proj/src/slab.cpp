#include "specsing/slab.hpp"

#include <cmath>
#include <numbers>

#include "specsing/perturb.hpp"
#include "specsing/transfer.hpp"

namespace specsing {

namespace {

const cplx I(0.0, 1.0);
constexpr double pi = std::numbers::pi;
constexpr double per_cm_to_per_nm = 1e-7;

// Shape of the pumping profile in x = z/L + 1/2; the gain is
// (g0 + alpha) * decay(x) - alpha, so decay(0 or both faces) = 1.
double decay_shape(const SlabMedium& m, double x) {
    if (m.pumping == Pumping::Single) return std::exp(-m.nu * x);
    return std::cosh(m.nu * (x - 0.5)) / std::cosh(0.5 * m.nu);
}

} // namespace

void validate_medium(const SlabMedium& m) {
    if (!(m.n0 > 1.0)) throw MalformedConfig("slab needs n0 > 1");
    if (!(m.L_um > 0.0)) throw MalformedConfig("slab needs L_um > 0");
    if (!(m.lambda0_nm > 0.0))
        throw MalformedConfig("slab needs lambda0_nm > 0");
    if (!(m.alpha_per_cm > 0.0))
        throw MalformedConfig("slab needs alpha_per_cm > 0");
    if (!(m.gamma_hat > 0.0 && m.gamma_hat < 1.0))
        throw MalformedConfig("slab needs 0 < gamma_hat < 1");
    if (!(m.nu >= 0.0)) throw MalformedConfig("slab needs nu >= 0");
}

cplx refractive_index_sq(const SlabMedium& m, double lambda_nm,
                         double g_per_cm) {
    const double w = m.lambda0_nm / lambda_nm;
    const cplx denom = w * w - 1.0 + I * m.gamma_hat * w;
    return m.n0 * m.n0 + m.n0 * m.gamma_hat * m.lambda0_nm *
                             (g_per_cm * per_cm_to_per_nm) /
                             (2.0 * pi * denom);
}

double gain_profile_z(const SlabMedium& m, double g0_per_cm, double z_um) {
    const double half = 0.5 * m.L_um;
    if (std::abs(z_um) > half * (1.0 + 1e-12))
        throw OutsideSlab("z = " + std::to_string(z_um) + " um, half-width " +
                          std::to_string(half) + " um");
    const double x = z_um / m.L_um + 0.5;
    return (g0_per_cm + m.alpha_per_cm) * decay_shape(m, x) - m.alpha_per_cm;
}

DispersionPoint map_parameters(const SlabMedium& m, double lambda_nm,
                               double g0_per_cm) {
    validate_medium(m);
    DispersionPoint p;
    p.lambda_nm = lambda_nm;
    p.g0_per_cm = g0_per_cm;
    p.omega_hat = m.lambda0_nm / lambda_nm;
    const double w = p.omega_hat;
    p.zeta = 1.0 / (1.0 - w * w - I * m.gamma_hat * w);
    p.k = 2.0 * pi * m.L_nm() / lambda_nm;
    const double g_nm = g0_per_cm * per_cm_to_per_nm;
    p.zeta1 = p.k * p.k *
              (1.0 - m.n0 * m.n0 +
               m.gamma_hat * m.n0 * m.lambda0_nm * g_nm * p.zeta / (2.0 * pi));
    p.zeta2 = 2.0 * pi * w * w * (g0_per_cm / m.alpha_per_cm + 1.0) * p.zeta;
    const double nu_pow =
        (m.pumping == Pumping::Single) ? m.nu : m.nu * m.nu;
    p.eps = m.L_nm() * m.L_nm() * m.alpha_per_nm() * m.gamma_hat * m.n0 *
            nu_pow / m.lambda0_nm;
    p.fn = refractive_root(p.zeta1, p.k);
    return p;
}

FnDerivatives fn_and_derivatives(const SlabMedium& m, double lambda_nm,
                                 double g0_per_cm) {
    const DispersionPoint p = map_parameters(m, lambda_nm, g0_per_cm);
    FnDerivatives d;
    d.fn0 = p.fn;
    const double l = lambda_nm, l0 = m.lambda0_nm, gh = m.gamma_hat;
    const double g_nm = g0_per_cm * per_cm_to_per_nm;
    const cplx Q = l * l - I * gh * l0 * l - l0 * l0;
    d.fn10 = gh * m.n0 * l0 * l0 * l * (2.0 * l0 + I * gh * l) * g_nm /
             (4.0 * pi * d.fn0 * Q * Q);
    d.fn01 = -gh * m.n0 * l0 * l * l / (4.0 * pi * d.fn0 * Q);
    return d;
}

PotentialSpec build_potential(const SlabMedium& m, double lambda_nm,
                              double g0_per_cm) {
    validate_medium(m);
    const SlabMedium medium = m;
    const double k = 2.0 * pi * m.L_nm() / lambda_nm;
    GenericRegular g;
    g.v = [medium, lambda_nm, g0_per_cm, k](double x) {
        const double z = (x - 0.5) * medium.L_um;
        const double gain = gain_profile_z(medium, g0_per_cm, z);
        return k * k * (1.0 - refractive_index_sq(medium, lambda_nm, gain));
    };
    return PotentialSpec{g};
}

SlabBoundary slab_oracle(const SlabMedium& m, cplx lambda_nm, cplx g0_per_cm,
                         double tol) {
    validate_medium(m);
    const SlabMedium medium = m;
    const cplx w = m.lambda0_nm / lambda_nm;
    const cplx k = 2.0 * pi * m.L_nm() / lambda_nm;
    // dispersion coupling per cm^-1 of gain, constant across the slab
    const cplx coupling = m.n0 * m.gamma_hat * m.lambda0_nm *
                          per_cm_to_per_nm /
                          (2.0 * pi * (w * w - 1.0 + I * m.gamma_hat * w));
    const cplx gpa = g0_per_cm + m.alpha_per_cm;
    const double n0sq = m.n0 * m.n0;
    const double alpha = m.alpha_per_cm;
    auto v = [medium, k, coupling, gpa, n0sq, alpha](double x) {
        const cplx gain = gpa * decay_shape(medium, x) - alpha;
        return k * k * (1.0 - (n0sq + coupling * gain));
    };
    const Phi1Boundary b = integrate_phi1_complex_k(v, {}, k, tol);
    SlabBoundary out;
    out.k = k;
    out.gamma1m = b.dphi1 - I * k * b.phi1;
    out.scale = std::abs(b.dphi1) + std::abs(k) * std::abs(b.phi1);
    return out;
}

cplx slab_gamma1m(const SlabMedium& m, cplx lambda_nm, cplx g0_per_cm,
                  double tol) {
    return slab_oracle(m, lambda_nm, g0_per_cm, tol).gamma1m;
}

} // namespace specsing
