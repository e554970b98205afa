#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "specsing/cheb.hpp"
#include "specsing/errors.hpp"

using namespace specsing;
using namespace std::complex_literals;

namespace {

double max_err(const PanelCheb& p, const std::function<cplx(double)>& ref,
               int samples = 1000) {
    double worst = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double x = p.lo() + (p.hi() - p.lo()) * i / double(samples);
        worst = std::max(worst, std::abs(p.eval(x) - ref(x)));
    }
    return worst;
}

} // namespace

TEST_CASE("interpolation reproduces a smooth oscillatory function") {
    auto f = [](double x) { return cplx(std::exp(0.3 * x) * std::cos(5.0 * x),
                                        std::sin(4.0 * x)); };
    PanelCheb p(f, 0.0, 2.0, 4, 32);
    CHECK(max_err(p, f) < 1e-13);
    CHECK(p.lo() == 0.0);
    CHECK(p.hi() == 2.0);
    CHECK(p.panels() == 4);
    CHECK(p.order() == 32);
}

TEST_CASE("antiderivative matches the closed form, including the T1 term") {
    // cos(10x) makes the first-degree coefficient of the antiderivative carry
    // real weight; regression guard for the special-cased m = 1 recurrence.
    auto f = [](double x) { return cplx(std::cos(10.0 * x), 0.0); };
    PanelCheb p(f, 0.0, 1.0, 5, 32);
    const PanelCheb A = p.antiderivative();
    auto ref = [](double x) { return cplx(std::sin(10.0 * x) / 10.0, 0.0); };
    CHECK(max_err(A, ref) < 1e-13);
    CHECK(std::abs(A.eval(0.0)) < 1e-15); // vanishes at the left end
}

TEST_CASE("antiderivative is continuous across panel joins") {
    auto f = [](double x) { return std::exp(cplx(0.0, 7.0) * x); };
    PanelCheb p(f, -1.0, 1.0, 6, 24);
    const PanelCheb A = p.antiderivative();
    const double h = 2.0 / 6.0;
    for (int j = 1; j < 6; ++j) {
        const double x = -1.0 + j * h;
        const cplx below = A.eval(std::nextafter(x, -2.0));
        const cplx above = A.eval(std::nextafter(x, 2.0));
        CHECK(std::abs(below - above) < 1e-13);
    }
    // and it actually is the antiderivative
    auto ref = [](double x) {
        const cplx iw(0.0, 7.0);
        return (std::exp(iw * x) - std::exp(-iw)) / iw;
    };
    CHECK(max_err(A, ref) < 1e-12);
}

TEST_CASE("integral agrees with the antiderivative endpoint and closed forms") {
    auto f = [](double x) { return std::exp(cplx(0.1, 9.0) * x); };
    PanelCheb p(f, 0.0, 1.5, 8, 32);
    const cplx w(0.1, 9.0);
    const cplx exact = (std::exp(w * 1.5) - 1.0) / w;
    CHECK(std::abs(p.integral() - exact) < 1e-13);
    CHECK(std::abs(p.antiderivative().eval(1.5) - exact) < 1e-13);
}

TEST_CASE("offset interpolants refuse a second antidifferentiation") {
    auto f = [](double x) { return cplx(x, 0.0); };
    PanelCheb p(f, 0.0, 1.0, 4, 16);
    const PanelCheb A = p.antiderivative();
    CHECK_THROWS_AS(A.antiderivative(), QuadratureFailure);
}

TEST_CASE("constructor rejects nonsense parameters") {
    auto f = [](double x) { return cplx(x, 0.0); };
    CHECK_THROWS_AS(PanelCheb(f, 0.0, 1.0, 0, 32), QuadratureFailure);
    CHECK_THROWS_AS(PanelCheb(f, 0.0, 1.0, 4, 1), QuadratureFailure);
    CHECK_THROWS_AS(PanelCheb(f, 1.0, 0.0, 4, 32), QuadratureFailure);
    PanelCheb empty;
    CHECK_THROWS_AS(empty.eval(0.5), QuadratureFailure);
}

TEST_CASE("panels_for_phase scales linearly with the accumulated phase") {
    CHECK(PanelCheb::panels_for_phase(0.0) == 4);        // floor
    CHECK(PanelCheb::panels_for_phase(10.0, 32) == 4);   // still under the floor
    const int p1 = PanelCheb::panels_for_phase(1000.0, 32);
    const int p2 = PanelCheb::panels_for_phase(2000.0, 32);
    CHECK(p1 >= 1000.0 / (0.25 * 32));
    CHECK(p2 >= 2 * p1 - 1);
    // higher order buys fewer panels
    CHECK(PanelCheb::panels_for_phase(4000.0, 64) < PanelCheb::panels_for_phase(4000.0, 32));
}

TEST_CASE("high-phase integrand: panel budget from panels_for_phase suffices") {
    const double w = 300.0;
    auto f = [w](double x) { return std::exp(cplx(0.0, w) * x); };
    const int panels = PanelCheb::panels_for_phase(w, 32);
    PanelCheb p(f, 0.0, 1.0, panels, 32);
    const cplx exact = (std::exp(cplx(0.0, w)) - 1.0) / cplx(0.0, w);
    CHECK(std::abs(p.integral() - exact) < 1e-12);
}
