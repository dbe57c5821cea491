#include <cmath>

#include "doctest.h"
#include "piston/piston_path.hpp"

using namespace piston;

TEST_CASE("constant trajectory") {
    const PistonSpec spec = PistonSpec::constant(1.0);
    const PistonEval e = spec.evaluate(7.0);
    CHECK(e.w == 7.0);
    CHECK(e.w_prime == 1.0);
    CHECK(e.w_second == 0.0);
    CHECK(spec.evaluate(0.0).w == 0.0);
    CHECK_THROWS_AS(spec.evaluate(-1.0), std::domain_error);
    CHECK_THROWS_AS(PistonSpec::constant(0.0), std::domain_error);
}

TEST_CASE("log-periodic trajectory") {
    const PistonSpec spec = PistonSpec::log_periodic(1.0, 0.1, 2.0);
    {
        const PistonEval e = spec.evaluate(0.0);
        CHECK(e.w == 0.0);
        CHECK(e.w_prime == doctest::Approx(1.1).epsilon(1e-15));
        CHECK(e.w_second == 0.0);  // sin(0) = 0
    }
    // (1+t) w'' = -w_b omega sin(omega ln(1+t))
    for (double t : {0.3, 1.0, 4.0, 20.0}) {
        const PistonEval e = spec.evaluate(t);
        const double expect = -0.1 * 2.0 * std::sin(2.0 * std::log1p(t)) / (1.0 + t);
        CHECK(e.w_second == doctest::Approx(expect).epsilon(1e-13));
        CHECK(std::abs((1.0 + t) * e.w_second) <= 0.1 * 2.0 + 1e-15);
    }
    CHECK_THROWS_AS(PistonSpec::log_periodic(1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("decaying trajectory") {
    const PistonSpec spec = PistonSpec::decaying(1.0, 0.2);
    for (double t : {0.0, 0.5, 3.0, 50.0}) {
        const PistonEval e = spec.evaluate(t);
        CHECK(e.w == doctest::Approx(t + 0.2 * std::log1p(t)).epsilon(1e-15));
        CHECK(e.w_prime == doctest::Approx(1.0 + 0.2 / (1.0 + t)).epsilon(1e-15));
        // (1+t)|w''| = 0.2/(1+t) <= 0.2
        CHECK(std::abs((1.0 + t) * e.w_second) ==
              doctest::Approx(0.2 / (1.0 + t)).epsilon(1e-13));
        CHECK(std::abs((1.0 + t) * e.w_second) <= 0.2);
    }
}

TEST_CASE("w is the antiderivative of w'") {
    const PistonSpec specs[] = {PistonSpec::constant(1.3),
                                PistonSpec::log_periodic(1.0, 0.3, 1.7),
                                PistonSpec::decaying(0.8, 0.4)};
    const double h = 1e-6;
    for (const PistonSpec& spec : specs) {
        for (double t = 0.0; t < 20.0; t += 0.77) {
            const double fd = (spec.evaluate(t + h).w - spec.evaluate(t).w) / h;
            const double wp = spec.evaluate(t + 0.5 * h).w_prime;
            CHECK(std::abs(fd - wp) < 1e-8);
        }
    }
}

TEST_CASE("tabulated trajectory uses monotone interpolation") {
    const PistonSpec spec =
        PistonSpec::tabulated({{0.0, 1.0}, {1.0, 1.2}, {3.0, 0.9}, {6.0, 1.0}});
    CHECK(spec.evaluate(0.0).w == 0.0);
    CHECK(spec.evaluate(1.0).w_prime == doctest::Approx(1.2).epsilon(1e-14));
    // Between knots the speed stays within the local data range.
    for (double t = 0.0; t <= 6.0; t += 0.05) CHECK(spec.evaluate(t).w_prime > 0.0);
    // Beyond the table: clamped speed, zero acceleration.
    CHECK(spec.evaluate(10.0).w_prime == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spec.evaluate(10.0).w_second == 0.0);
    // w continuous across the table end.
    const double a = spec.evaluate(6.0 - 1e-9).w;
    const double b = spec.evaluate(6.0 + 1e-9).w;
    CHECK(std::abs(a - b) < 1e-7);

    CHECK_THROWS_AS(PistonSpec::tabulated({{0.0, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(PistonSpec::tabulated({{0.5, 1.0}, {1.0, 1.0}}), std::domain_error);
    CHECK_THROWS_AS(PistonSpec::tabulated({{0.0, 1.0}, {1.0, -0.1}}), std::domain_error);
}

TEST_CASE("assumption report: constant piston passes everything") {
    const PistonSpec spec = PistonSpec::constant(1.0);
    for (double kappa : {1e-6, 1.0, 10.0}) {
        const AssumptionReport rep = validate(spec, 1e-4, Gamma(1.4), kappa, 0.1);
        CHECK(rep.a1_ok);
        CHECK(rep.ratio == doctest::Approx(1.0));
        CHECK(rep.ratio_ok);
        CHECK(rep.a3_sup == 0.0);
        CHECK(rep.a3_ok);
        CHECK(rep.all_ok());
    }
}

TEST_CASE("assumption report: wide-variation bound") {
    const PistonSpec spec = PistonSpec::log_periodic(1.0, 0.6, 1.0);
    const AssumptionReport rep = validate(spec, 1e-4, Gamma(1.4), 1.0, 0.1);
    CHECK(rep.ratio == doctest::Approx(4.0).epsilon(1e-14));  // 1.6 / 0.4
    CHECK_FALSE(rep.ratio_ok);
}

TEST_CASE("assumption report: acceleration budget shrinks with rho_inf") {
    const PistonSpec spec = PistonSpec::log_periodic(1.0, 0.1, 1.0);
    const AssumptionReport rep = validate(spec, 1e-4, Gamma(2.0), 1.0, 0.1);
    CHECK(rep.a3_sup == doctest::Approx(0.1).epsilon(1e-14));
    // budget = (1e-4)^{0.6} ~ 3.98e-3 < 0.1
    CHECK_FALSE(rep.a3_ok);
    CHECK(rep.ratio_ok);
}

TEST_CASE("closed-form acceleration bounds match the reported sup") {
    const PistonSpec lp = PistonSpec::log_periodic(1.0, 0.25, 3.0);
    CHECK(validate(lp, 1e-6, Gamma(1.4), 1.0, 0.1).a3_sup ==
          doctest::Approx(0.25 * 3.0).epsilon(1e-12));
    const PistonSpec dec = PistonSpec::decaying(1.0, 0.07);
    CHECK(validate(dec, 1e-6, Gamma(1.4), 1.0, 0.1).a3_sup ==
          doctest::Approx(0.07).epsilon(1e-12));
}

TEST_CASE("tabulated report is sampled") {
    const PistonSpec spec = PistonSpec::tabulated({{0.0, 1.0}, {2.0, 1.4}, {5.0, 1.1}});
    const AssumptionReport rep = validate(spec, 1e-4, Gamma(1.4), 1.0, 0.1, 10.0, 512);
    CHECK(rep.a1_ok);
    CHECK(rep.w_star > 0.9);
    CHECK(rep.w_upper <= 1.4 + 1e-12);
    CHECK(rep.details.find("sampled") != std::string::npos);
}
