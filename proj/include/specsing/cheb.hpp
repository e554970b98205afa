#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "specsing/errors.hpp"

namespace specsing {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Piecewise-Chebyshev interpolant on [a,b]: equal panels, Chebyshev-Lobatto
// nodes per panel. Supports evaluation anywhere, exact antidifferentiation of
// the interpolant (continuous across panels, vanishing at a), and integration.
// This is the workhorse for the nested perturbation integrals: each nesting
// level interpolates the previous level's prefix integrals, so integrands that
// oscillate thousands of radians stay resolvable by raising the panel count.
// ---------------------------------------------------------------------------
class PanelCheb {
public:
    PanelCheb() = default;
    PanelCheb(const std::function<cplx(double)>& f, double a, double b,
              int panels, int order = 32);

    cplx eval(double x) const;
    cplx operator()(double x) const { return eval(x); }

    // Antiderivative F(x) = int_a^x of the interpolant.
    PanelCheb antiderivative() const;

    // int_a^b of the interpolant.
    cplx integral() const;

    double lo() const { return a_; }
    double hi() const { return b_; }
    int panels() const { return static_cast<int>(coef_.size()); }
    int order() const { return order_; }

    // Panel budget for an integrand whose fastest oscillation accumulates
    // `phase` radians over the interval. Roughly 4 points per radian keeps a
    // degree-32 panel at ~1e-13 interpolation error.
    static int panels_for_phase(double phase, int order = 32);

private:
    double a_ = 0.0, b_ = 1.0, h_ = 1.0;
    int order_ = 32;
    std::vector<std::vector<cplx>> coef_; // per-panel Chebyshev coefficients
    std::vector<cplx> offset_;            // accumulated value at panel starts
};

} // namespace specsing
