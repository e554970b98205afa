#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>

#include "specsing/potential.hpp"

using namespace specsing;

TEST_CASE("pumping profiles: closed forms away from the series cut") {
    const double nu = 1.3;
    for (double x : {0.0, 0.17, 0.5, 0.83, 1.0}) {
        const double fs = pumping_profile(GainProfile::Kind::SinglePumping, nu, x);
        CHECK(fs == doctest::Approx((std::exp(-nu * x) - 1.0) / nu).epsilon(1e-14));
        const double fd = pumping_profile(GainProfile::Kind::DoublePumping, nu, x);
        const double ref = (std::cosh(nu * (x - 0.5)) - std::cosh(nu / 2.0))
                           / (nu * nu * std::cosh(nu / 2.0));
        CHECK(fd == doctest::Approx(ref).epsilon(1e-14));
    }
}

TEST_CASE("pumping profiles: nu -> 0 limits are -x and (x^2-x)/2") {
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        CHECK(pumping_profile(GainProfile::Kind::SinglePumping, 0.0, x)
              == doctest::Approx(-x).epsilon(1e-15));
        CHECK(pumping_profile(GainProfile::Kind::DoublePumping, 0.0, x)
              == doctest::Approx((x * x - x) / 2.0).epsilon(1e-15));
    }
}

TEST_CASE("pumping profiles: series branch is accurate at the cut") {
    // The implementation switches to a series below nu = 1e-4, where the
    // direct formulas lose ~8 digits to cancellation. Long-double evaluation
    // of the direct formulas keeps ~11 digits there and referees both sides.
    const double lo = 0.99999e-4, hi = 1.00001e-4;
    auto ref = [](GainProfile::Kind kind, double nu, double x) {
        const long double n = nu, t = x;
        if (kind == GainProfile::Kind::SinglePumping)
            return double((std::exp(-n * t) - 1.0L) / n);
        return double((std::cosh(n * (t - 0.5L)) - std::cosh(n / 2.0L))
                      / (n * n * std::cosh(n / 2.0L)));
    };
    for (double x : {0.1, 0.5, 0.9}) {
        for (auto kind : {GainProfile::Kind::SinglePumping,
                          GainProfile::Kind::DoublePumping}) {
            // series side: essentially exact
            CHECK(std::abs(pumping_profile(kind, lo, x) - ref(kind, lo, x))
                  < 1e-11);
            // direct side: within its cancellation budget
            CHECK(std::abs(pumping_profile(kind, hi, x) - ref(kind, hi, x))
                  < 2e-8);
        }
    }
}

TEST_CASE("pumping profiles: endpoint zeros and double-pump symmetry") {
    for (double nu : {0.0, 0.05, 0.5, 2.0}) {
        CHECK(std::abs(pumping_profile(GainProfile::Kind::SinglePumping, nu, 0.0)) < 1e-15);
        CHECK(std::abs(pumping_profile(GainProfile::Kind::DoublePumping, nu, 0.0)) < 1e-15);
        CHECK(std::abs(pumping_profile(GainProfile::Kind::DoublePumping, nu, 1.0)) < 1e-15);
        for (double x : {0.1, 0.3, 0.47}) {
            const double a = pumping_profile(GainProfile::Kind::DoublePumping, nu, x);
            const double b = pumping_profile(GainProfile::Kind::DoublePumping, nu, 1.0 - x);
            CHECK(a == doctest::Approx(b).epsilon(1e-14));
            CHECK(a <= 0.0); // both built-ins are non-positive on [0,1]
        }
    }
}

TEST_CASE("profile_value dispatches to custom callables") {
    GainProfile p;
    p.kind = GainProfile::Kind::Custom;
    p.custom_f = [](double x) { return cplx(std::sin(3.0 * x), x); };
    const cplx v = profile_value(p, 0.4);
    CHECK(std::abs(v - cplx(std::sin(1.2), 0.4)) < 1e-15);

    GainProfile empty;
    empty.kind = GainProfile::Kind::Custom;
    CHECK_THROWS_AS(profile_value(empty, 0.5), NonIntegrableProfile);
    CHECK_THROWS_AS(pumping_profile(GainProfile::Kind::Custom, 0.1, 0.5),
                    NonIntegrableProfile);
}

TEST_CASE("evaluate_regular over the potential variants") {
    BarrierSpec flat;
    flat.z1 = cplx(2.0, -3.0);
    flat.eps = 0.0;
    CHECK(std::abs(evaluate_regular(PotentialSpec{flat}, 0.3) - flat.z1) < 1e-15);

    BarrierSpec pert;
    pert.z1 = cplx(1.0, 0.5);
    pert.z2 = cplx(0.0, 4.0);
    pert.eps = 0.25;
    pert.profile = single_pumping(0.7);
    const double x = 0.6;
    const cplx want = pert.z1 + pert.eps * pert.z2
                      * pumping_profile(GainProfile::Kind::SinglePumping, 0.7, x);
    CHECK(std::abs(evaluate_regular(PotentialSpec{pert}, x) - want) < 1e-15);

    GenericRegular gen;
    gen.v = [](double t) { return cplx(t * t, -t); };
    CHECK(std::abs(evaluate_regular(PotentialSpec{gen}, 0.5) - cplx(0.25, -0.5)) < 1e-15);

    DeltaArraySpec d;
    d.centers = {0.5};
    d.couplings = {cplx(0.0, 1.0)};
    CHECK_THROWS_AS(evaluate_regular(PotentialSpec{d}, 0.5), DeltaNotPointwise);
}

TEST_CASE("breakpoints are sorted and empty for smooth potentials") {
    GenericRegular gen;
    gen.v = [](double) { return cplx(0.0, 0.0); };
    gen.breakpoints = {0.8, 0.2, 0.5};
    const auto b = breakpoints(PotentialSpec{gen});
    REQUIRE(b.size() == 3);
    CHECK(b[0] == 0.2);
    CHECK(b[1] == 0.5);
    CHECK(b[2] == 0.8);

    CHECK(breakpoints(PotentialSpec{BarrierSpec{}}).empty());
    DeltaArraySpec d;
    d.centers = {0.3};
    d.couplings = {cplx(1.0, 0.0)};
    CHECK(breakpoints(PotentialSpec{d}).empty());
}

TEST_CASE("validate: delta-array invariants") {
    DeltaArraySpec good;
    good.centers = {0.2, 0.5, 0.8};
    good.couplings = {cplx(0, 1), cplx(1, 0), cplx(2, -2)};
    CHECK_NOTHROW(validate(PotentialSpec{good}));

    DeltaArraySpec empty;
    CHECK_THROWS_AS(validate(PotentialSpec{empty}), EmptyArray);

    DeltaArraySpec mismatched = good;
    mismatched.couplings.pop_back();
    CHECK_THROWS_AS(validate(PotentialSpec{mismatched}), MalformedConfig);

    DeltaArraySpec outside = good;
    outside.centers[0] = 0.0; // boundary is not inside
    CHECK_THROWS_AS(validate(PotentialSpec{outside}), CenterOutOfRange);
    outside.centers[0] = 1.2;
    CHECK_THROWS_AS(validate(PotentialSpec{outside}), CenterOutOfRange);

    DeltaArraySpec unordered = good;
    std::swap(unordered.centers[0], unordered.centers[1]);
    CHECK_THROWS_AS(validate(PotentialSpec{unordered}), UnorderedCenters);

    DeltaArraySpec repeated = good;
    repeated.centers[1] = repeated.centers[0];
    CHECK_THROWS_AS(validate(PotentialSpec{repeated}), UnorderedCenters);

    DeltaArraySpec nan_coupling = good;
    nan_coupling.couplings[1] = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(validate(PotentialSpec{nan_coupling}), MalformedConfig);
}

TEST_CASE("validate: barrier invariants and the custom-profile norm warning") {
    BarrierSpec neg_nu;
    neg_nu.profile = single_pumping(-0.1);
    CHECK_THROWS_AS(validate(PotentialSpec{neg_nu}), NonIntegrableProfile);

    BarrierSpec no_callable;
    no_callable.profile.kind = GainProfile::Kind::Custom;
    CHECK_THROWS_AS(validate(PotentialSpec{no_callable}), NonIntegrableProfile);

    BarrierSpec infinite;
    infinite.profile.kind = GainProfile::Kind::Custom;
    infinite.profile.custom_f = [](double x) {
        return cplx(x == 0.5 ? std::numeric_limits<double>::infinity() : 0.0, 0.0);
    };
    CHECK_THROWS_AS(validate(PotentialSpec{infinite}), NonIntegrableProfile);

    // int_0^1 |f| > 1 is advisory, not an error.
    BarrierSpec loud;
    loud.profile.kind = GainProfile::Kind::Custom;
    loud.profile.custom_f = [](double) { return cplx(2.0, 0.0); };
    CHECK(validate(PotentialSpec{loud}).profile_norm_warning);

    BarrierSpec quiet;
    quiet.profile.kind = GainProfile::Kind::Custom;
    quiet.profile.custom_f = [](double x) { return cplx(-x, 0.0); };
    CHECK_FALSE(validate(PotentialSpec{quiet}).profile_norm_warning);

    BarrierSpec builtin;
    builtin.z1 = cplx(0.0, -5.0);
    builtin.profile = double_pumping(0.3);
    CHECK_FALSE(validate(PotentialSpec{builtin}).profile_norm_warning);
}

TEST_CASE("validate: generic potentials need a callable and interior breakpoints") {
    GenericRegular hollow;
    CHECK_THROWS_AS(validate(PotentialSpec{hollow}), MalformedConfig);

    GenericRegular bad_break;
    bad_break.v = [](double) { return cplx(1.0, 0.0); };
    bad_break.breakpoints = {0.5, 1.0};
    CHECK_THROWS_AS(validate(PotentialSpec{bad_break}), MalformedConfig);

    GenericRegular fine;
    fine.v = [](double x) { return cplx(x, 0.0); };
    fine.breakpoints = {0.25, 0.75};
    CHECK_NOTHROW(validate(PotentialSpec{fine}));
}
