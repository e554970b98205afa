#include "specsing/cheb.hpp"

#include <cmath>
#include <numbers>

namespace specsing {

namespace {

// Chebyshev-Lobatto interpolation coefficients from nodal values.
// Nodes t_j = cos(pi j / N), values v_j; returns c with f = sum c_m T_m(t).
std::vector<cplx> lobatto_coefficients(const std::vector<cplx>& v) {
    const int N = static_cast<int>(v.size()) - 1;
    std::vector<cplx> c(N + 1);
    for (int m = 0; m <= N; ++m) {
        cplx s = 0.0;
        for (int j = 0; j <= N; ++j) {
            const double w = (j == 0 || j == N) ? 0.5 : 1.0;
            s += w * v[j] * std::cos(std::numbers::pi * m * j / N);
        }
        const double scale = (m == 0 || m == N) ? 1.0 / N : 2.0 / N;
        c[m] = scale * s;
    }
    return c;
}

cplx clenshaw(const std::vector<cplx>& c, double t) {
    cplx b1 = 0.0, b2 = 0.0;
    for (int m = static_cast<int>(c.size()) - 1; m >= 1; --m) {
        const cplx b0 = 2.0 * t * b1 - b2 + c[m];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c[0];
}

} // namespace

PanelCheb::PanelCheb(const std::function<cplx(double)>& f, double a, double b,
                     int panels, int order)
    : a_(a), b_(b), order_(order) {
    if (!(b > a) || panels < 1 || order < 2)
        throw QuadratureFailure("bad PanelCheb parameters");
    h_ = (b - a) / panels;
    coef_.resize(panels);
    offset_.assign(panels, cplx(0.0));
    std::vector<cplx> vals(order + 1);
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h_;
        for (int j = 0; j <= order; ++j) {
            const double t = std::cos(std::numbers::pi * j / order);
            vals[j] = f(lo + 0.5 * h_ * (t + 1.0));
        }
        coef_[p] = lobatto_coefficients(vals);
    }
}

cplx PanelCheb::eval(double x) const {
    if (coef_.empty())
        throw QuadratureFailure("empty PanelCheb");
    int p = static_cast<int>((x - a_) / h_);
    if (p < 0) p = 0;
    if (p >= panels()) p = panels() - 1;
    const double t = 2.0 * (x - (a_ + p * h_)) / h_ - 1.0;
    return offset_[p] + clenshaw(coef_[p], t);
}

PanelCheb PanelCheb::antiderivative() const {
    for (const cplx& o : offset_)
        if (o != cplx(0.0))
            throw QuadratureFailure("antiderivative of an already-offset interpolant");
    PanelCheb F;
    F.a_ = a_;
    F.b_ = b_;
    F.h_ = h_;
    F.order_ = order_;
    F.coef_.resize(coef_.size());
    F.offset_.assign(coef_.size(), cplx(0.0));
    cplx running = 0.0;
    for (std::size_t p = 0; p < coef_.size(); ++p) {
        const auto& c = coef_[p];
        const int N = static_cast<int>(c.size()) - 1;
        // Antiderivative coefficients on the t scale: B_m = (c_{m-1}-c_{m+1})/(2m)
        // for m >= 2, but B_1 = (2 c_0 - c_2)/2 since int T_0 = T_1 outright;
        // then rescale by h/2 for the x measure and pin the value at t = -1 to 0.
        std::vector<cplx> B(N + 2, cplx(0.0));
        for (int m = 1; m <= N + 1; ++m) {
            const cplx cm1 = (m == 1) ? 2.0 * c[0] : c[m - 1];
            const cplx cp1 = (m + 1 <= N) ? c[m + 1] : cplx(0.0);
            B[m] = 0.5 * h_ * (cm1 - cp1) / (2.0 * m);
        }
        cplx at_minus1 = 0.0;
        for (int m = 1; m <= N + 1; ++m)
            at_minus1 += ((m % 2) ? -1.0 : 1.0) * B[m];
        B[0] = -at_minus1;
        cplx at_plus1 = 0.0;
        for (int m = 0; m <= N + 1; ++m)
            at_plus1 += B[m];
        F.coef_[p] = std::move(B);
        F.offset_[p] = running;          // offset carried by this panel start
        running += at_plus1;             // accumulated integral through panel p
    }
    // offsets were computed with the internal clenshaw value already subtracted
    // at t=-1, plus the per-panel offset_ carried over; offsets were filled above
    // in panel order, and the base antiderivative starts at 0 at x=a.
    return F;
}

cplx PanelCheb::integral() const {
    cplx total = 0.0;
    for (const auto& c : coef_) {
        // int_{-1}^{1} T_m dt = 0 for odd m, 2/(1-m^2) for even m.
        cplx s = 0.0;
        for (std::size_t m = 0; m < c.size(); m += 2)
            s += c[m] * (2.0 / (1.0 - double(m) * double(m)));
        total += 0.5 * h_ * s;
    }
    return total;
}

int PanelCheb::panels_for_phase(double phase, int order) {
    const double rad_per_panel = 0.25 * order; // ~4 nodes per radian
    const int n = static_cast<int>(std::ceil(std::abs(phase) / rad_per_panel));
    return std::max(4, n);
}

} // namespace specsing
