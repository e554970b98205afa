#include "specsing/potential.hpp"

#include <algorithm>
#include <cmath>

namespace specsing {

GainProfile single_pumping(double nu) {
    return GainProfile{GainProfile::Kind::SinglePumping, nu, nullptr};
}

GainProfile double_pumping(double nu) {
    return GainProfile{GainProfile::Kind::DoublePumping, nu, nullptr};
}

double pumping_profile(GainProfile::Kind kind, double nu, double x) {
    // Below this the direct formulas lose ~8 digits to cancellation; the series
    // branch keeps full accuracy through the nu -> 0 limit.
    constexpr double series_cut = 1e-4;
    switch (kind) {
    case GainProfile::Kind::SinglePumping: {
        if (nu < series_cut) {
            // (e^{-nu x} - 1)/nu = -x * sum_{j>=0} (-nu x)^j/(j+1)!
            const double t = nu * x;
            return -x * (1.0 - t / 2.0 + t * t / 6.0 - t * t * t / 24.0
                         + t * t * t * t / 120.0);
        }
        return (std::exp(-nu * x) - 1.0) / nu;
    }
    case GainProfile::Kind::DoublePumping: {
        if (nu < series_cut) {
            // numerator = sum_{j>=1} nu^{2j} [(x-1/2)^{2j} - (1/2)^{2j}]/(2j)!
            const double u = x - 0.5;
            const double a = u * u - 0.25;
            const double b = u * u * u * u - 0.0625;
            return (a / 2.0 + nu * nu * b / 24.0) / std::cosh(nu / 2.0);
        }
        return (std::cosh(nu * (x - 0.5)) - std::cosh(nu / 2.0))
               / (nu * nu * std::cosh(nu / 2.0));
    }
    case GainProfile::Kind::Custom:
        break;
    }
    throw NonIntegrableProfile("pumping_profile called with a custom kind; use profile_value");
}

cplx profile_value(const GainProfile& p, double x) {
    if (p.kind == GainProfile::Kind::Custom) {
        if (!p.custom_f)
            throw NonIntegrableProfile("custom profile has no callable");
        return p.custom_f(x);
    }
    return pumping_profile(p.kind, p.nu, x);
}

cplx evaluate_regular(const PotentialSpec& spec, double x) {
    return std::visit(
        [x](const auto& s) -> cplx {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DeltaArraySpec>) {
                throw DeltaNotPointwise("delta arrays have no pointwise value");
            } else if constexpr (std::is_same_v<T, BarrierSpec>) {
                if (s.eps == 0.0)
                    return s.z1;
                return s.z1 + s.eps * s.z2 * profile_value(s.profile, x);
            } else {
                return s.v(x);
            }
        },
        spec);
}

std::vector<double> breakpoints(const PotentialSpec& spec) {
    if (const auto* g = std::get_if<GenericRegular>(&spec)) {
        std::vector<double> b = g->breakpoints;
        std::sort(b.begin(), b.end());
        return b;
    }
    return {};
}

ValidationReport validate(const PotentialSpec& spec) {
    ValidationReport report;
    std::visit(
        [&report](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DeltaArraySpec>) {
                if (s.centers.empty())
                    throw EmptyArray("delta array needs at least one center");
                if (s.centers.size() != s.couplings.size())
                    throw MalformedConfig("centers and couplings differ in length");
                for (double a : s.centers)
                    if (!(a > 0.0 && a < 1.0))
                        throw CenterOutOfRange("centers must lie strictly inside (0,1)");
                for (std::size_t i = 1; i < s.centers.size(); ++i)
                    if (!(s.centers[i] > s.centers[i - 1]))
                        throw UnorderedCenters("centers must be strictly increasing");
                for (const cplx& z : s.couplings)
                    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                        throw MalformedConfig("non-finite coupling");
            } else if constexpr (std::is_same_v<T, BarrierSpec>) {
                if (!std::isfinite(std::abs(s.eps * s.z2)))
                    throw MalformedConfig("non-finite perturbation strength");
                if (s.profile.kind != GainProfile::Kind::Custom && s.profile.nu < 0.0)
                    throw NonIntegrableProfile("decay constant nu must be >= 0");
                if (s.profile.kind == GainProfile::Kind::Custom) {
                    if (!s.profile.custom_f)
                        throw NonIntegrableProfile("custom profile has no callable");
                    // Cheap trapezoid estimate of int_0^1 |f|; the normalization
                    // int |f| <= 1 is advisory for custom profiles.
                    double norm = 0.0;
                    const int n = 256;
                    for (int i = 0; i <= n; ++i) {
                        const double x = double(i) / n;
                        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
                        const double a = std::abs(s.profile.custom_f(x));
                        if (!std::isfinite(a))
                            throw NonIntegrableProfile("custom profile is not finite on [0,1]");
                        norm += w * a / n;
                    }
                    if (norm > 1.0)
                        report.profile_norm_warning = true;
                }
            } else {
                if (!s.v)
                    throw MalformedConfig("generic potential has no callable");
                for (double b : s.breakpoints)
                    if (!(b > 0.0 && b < 1.0))
                        throw MalformedConfig("breakpoints must lie strictly inside (0,1)");
            }
        },
        spec);
    return report;
}

} // namespace specsing
