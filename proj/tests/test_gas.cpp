#include <cmath>
#include <random>

#include "doctest.h"
#include "piston/gas.hpp"

using namespace piston;

TEST_CASE("gamma range is enforced") {
    CHECK_THROWS_AS(Gamma(1.0), std::domain_error);
    CHECK_THROWS_AS(Gamma(3.0), std::domain_error);
    CHECK_THROWS_AS(Gamma(0.5), std::domain_error);
    CHECK(Gamma(1.4).value() == 1.4);
    CHECK(Gamma::unchecked(4.0).value() == 4.0);
}

TEST_CASE("sound speed values and domain") {
    CHECK(sound_speed(0.0, Gamma(1.4)) == 0.0);
    CHECK(sound_speed(1.0, Gamma(2.0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(sound_speed(4.0 / 3.0, Gamma(2.0)) ==
          doctest::Approx(1.6329931618554518).epsilon(1e-15));
    CHECK_THROWS_AS(sound_speed(-1e-12, Gamma(1.4)), std::domain_error);
}

TEST_CASE("sound speed is monotone in density") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ur(0.0, 5.0), ug(1.05, 2.95);
    for (int i = 0; i < 200; ++i) {
        const Gamma g(ug(rng));
        double a = ur(rng), b = ur(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        CHECK(sound_speed(a, g) < sound_speed(b, g));
    }
}

TEST_CASE("eigenvalues") {
    {
        const auto [lm, lp] = eigenvalues({0.0, 5.0}, Gamma(2.0));
        CHECK(lm == 5.0);
        CHECK(lp == 5.0);
    }
    {
        const auto [lm, lp] = eigenvalues({1.0, 0.0}, Gamma(2.0));
        CHECK(lm == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
        CHECK(lp == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    }
    {
        const auto [lm, lp] = eigenvalues({4.0 / 3.0, 1.0}, Gamma(2.0));
        CHECK(lm == doctest::Approx(-0.6329931618554518).epsilon(1e-14));
        CHECK(lp == doctest::Approx(2.6329931618554518).epsilon(1e-14));
    }
}

TEST_CASE("eigenvalue gap equals twice the sound speed") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ur(1e-8, 10.0), uu(-5.0, 5.0), ug(1.05, 2.95);
    for (int i = 0; i < 500; ++i) {
        const Gamma g(ug(rng));
        const GasState st{ur(rng), uu(rng)};
        const auto [lm, lp] = eigenvalues(st, g);
        const double c = sound_speed(st.rho, g);
        CHECK(std::abs((lp - lm) - 2.0 * c) <= 1e-14 * std::max(1.0, 2.0 * c));
    }
}

TEST_CASE("riemann invariants and their inverse") {
    {
        const auto [rm, rp] = riemann_invariants({0.0, 3.0}, Gamma(1.4));
        CHECK(rm == 3.0);
        CHECK(rp == 3.0);
    }
    {
        const auto [rm, rp] = riemann_invariants({4.0 / 3.0, 1.0}, Gamma(2.0));
        CHECK(rm == doctest::Approx(-2.2659863237109037).epsilon(1e-14));
        CHECK(rp == doctest::Approx(4.2659863237109037).epsilon(1e-14));
    }
    {
        const GasState st = state_from_invariants(3.0, 3.0, Gamma(1.4));
        CHECK(st.rho == 0.0);
        CHECK(st.u == 3.0);
    }
    {
        const GasState st = state_from_invariants(-2.2659863237109037, 4.2659863237109037,
                                                  Gamma(2.0));
        CHECK(st.rho == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
        CHECK(st.u == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(state_from_invariants(1.0, 0.0, Gamma(1.4)), std::domain_error);
}

TEST_CASE("invariant round trips on random states") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ur(1e-6, 10.0), uu(-5.0, 5.0), ug(1.05, 2.95);
    for (int i = 0; i < 500; ++i) {
        const Gamma g(ug(rng));
        const GasState st{ur(rng), uu(rng)};
        const auto [rm, rp] = riemann_invariants(st, g);
        const GasState back = state_from_invariants(rm, rp, g);
        CHECK(back.rho == doctest::Approx(st.rho).epsilon(1e-12));
        CHECK(back.u == doctest::Approx(st.u).epsilon(1e-12));
    }
}

TEST_CASE("rescalings") {
    const Gamma g(2.0);
    const GasState st{4.0 / 3.0, 1.5};

    SUBCASE("unit scaling is the identity in both modes") {
        for (auto mode : {RescaleMode::vanishing_pressure, RescaleMode::high_speed}) {
            const ScaledPoint p = rescale(st, 1.0, 2.0, 3.0, mode, g);
            CHECK(p.state.rho == st.rho);
            CHECK(p.state.u == st.u);
            CHECK(p.t == 2.0);
            CHECK(p.x == 3.0);
        }
    }
    SUBCASE("vanishing-pressure scaling divides the density") {
        const ScaledPoint p =
            rescale({4.0 / 3.0, 1.0}, 2.0 / 3.0, 1.0, 1.0, RescaleMode::vanishing_pressure, g);
        CHECK(p.state.rho == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(p.state.u == 1.0);
    }
    SUBCASE("mode-1 round trip is exact") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> ur(1e-8, 1e-1);
        for (int i = 0; i < 100; ++i) {
            const double rho_inf = ur(rng);
            const ScaledPoint p =
                rescale(st, rho_inf, 2.0, 3.0, RescaleMode::vanishing_pressure, g);
            const ScaledPoint q =
                unrescale(p.state, rho_inf, p.t, p.x, RescaleMode::vanishing_pressure, g);
            CHECK(q.state.rho == doctest::Approx(st.rho).epsilon(1e-14));
            CHECK(q.state.u == st.u);
        }
    }
    SUBCASE("mode-2 round trip") {
        const double rho_inf = 1e-5;
        const ScaledPoint p = rescale(st, rho_inf, 2.0, 3.0, RescaleMode::high_speed, g);
        const ScaledPoint q = unrescale(p.state, rho_inf, p.t, p.x, RescaleMode::high_speed, g);
        CHECK(q.state.rho == doctest::Approx(st.rho).epsilon(1e-14));
        CHECK(q.state.u == doctest::Approx(st.u).epsilon(1e-14));
        CHECK(q.t == doctest::Approx(2.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(rescale(st, 0.0, 0.0, 0.0, RescaleMode::vanishing_pressure, g),
                    std::domain_error);
}
