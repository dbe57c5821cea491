#include <cmath>
#include <random>

#include "doctest.h"
#include "piston/shock_polar.hpp"

using namespace piston;

namespace {

// Centered finite difference, the independent check on f'.
double fd_derivative(double k, Gamma g, double h) {
    return (f_polar(k + h, g) - f_polar(k - h, g)) / (2.0 * h);
}

}  // namespace

TEST_CASE("shock polar f(k)") {
    const Gamma g2(2.0);
    CHECK(f_polar(1.0 + 1e-12, g2) < 1e-5);  // -> 0 as k -> 1+
    CHECK(f_polar(2.0, g2) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
    // f(k) ~ k^{gamma/2} for large k
    for (double gv : {1.4, 2.0, 2.5}) {
        const Gamma g(gv);
        const double k = 1e8;
        CHECK(f_polar(k, g) / std::pow(k, gv / 2.0) == doctest::Approx(1.0).epsilon(1e-6));
    }
    // strictly increasing
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uk(0.0, 12.0), ug(1.05, 2.95);
    for (int i = 0; i < 300; ++i) {
        const Gamma g(ug(rng));
        double a = 1.0 + std::exp(uk(rng)) * 1e-4;
        double b = 1.0 + std::exp(uk(rng)) * 1e-4;
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        CHECK(f_polar(a, g) < f_polar(b, g));
    }
    CHECK_THROWS_AS(f_polar(1.0, g2), entropy_error);
    CHECK_THROWS_AS(f_polar(0.5, g2), entropy_error);
}

TEST_CASE("shock polar derivative f'(k)") {
    CHECK(f_polar_prime(2.0, Gamma(2.0)) ==
          doctest::Approx(11.0 / (8.0 * std::sqrt(1.5))).epsilon(1e-14));
    // finite-difference oracle
    {
        const Gamma g(1.4);
        const double fd = fd_derivative(3.0, g, 1e-6);
        CHECK(std::abs(f_polar_prime(3.0, g) - fd) < 1e-6);
    }
    // k -> 1+ limit: the closed form tends to sqrt(gamma). A short expansion
    // of f(1+e) = sqrt(gamma) e (1 + (gamma-3)/4 e + ...) gives the same.
    for (double gv : {1.4, 2.0, 2.5}) {
        const Gamma g(gv);
        CHECK(f_polar_prime(1.0 + 1e-8, g) / std::sqrt(gv) ==
              doctest::Approx(1.0).epsilon(1e-6));
        const double e = 1e-5;
        const double series = std::sqrt(gv) * (1.0 + 0.5 * (gv - 3.0) * e);
        CHECK(f_polar_prime(1.0 + e, g) == doctest::Approx(series).epsilon(1e-7));
    }
    CHECK_THROWS_AS(f_polar_prime(1.0, Gamma(2.0)), entropy_error);
}

TEST_CASE("h(tau)") {
    const Gamma g2(2.0);
    CHECK(h_of_tau(2.0, g2) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(h_of_tau(1.0 + 1e-12, g2) < 1e-11);
    CHECK(h_of_tau(1e8, Gamma(1.4)) / std::pow(1e8, 1.4) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(h_of_tau(1.0, g2), std::domain_error);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ut(0.0, 18.0), ug(1.05, 2.95);
    for (int i = 0; i < 300; ++i) {
        const Gamma g(ug(rng));
        double a = 1.0 + std::exp(ut(rng)) * 1e-6;
        double b = 1.0 + std::exp(ut(rng)) * 1e-6;
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        CHECK(h_of_tau(a, g) < h_of_tau(b, g));
    }
}

TEST_CASE("steady constant-piston solution: worked example") {
    const SteadySolution sol = solve_steady_piston(1.0, 2.0 / 3.0, Gamma(2.0));
    CHECK(sol.tau == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(sol.rho0 == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
    CHECK(sol.s0 == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(sol.u0 == 1.0);
    const auto [r1, r2] = rh_residuals(sol, 2.0 / 3.0, Gamma(2.0));
    CHECK(r1 < 1e-12);
    CHECK(r2 < 1e-12);
}

TEST_CASE("steady solution tracks the vanishing-density scaling") {
    // rho0 ~ w0^{2/gamma} rho_inf^{1/gamma}
    const SteadySolution sol = solve_steady_piston(1.0, 1e-8, Gamma(2.0));
    CHECK(sol.rho0 / 1e-4 > 0.99);
    CHECK(sol.rho0 / 1e-4 < 1.01);
}

TEST_CASE("tau depends only on w0^2 rho_inf^{1-gamma}") {
    const Gamma g(1.4);
    const SteadySolution a = solve_steady_piston(1.0, 1e-6, g);
    // Pick (w0', rho') with the same combination w0^2 rho^{1-gamma}.
    const double w0b = 2.0;
    const double rhob = 1e-6 * std::pow(1.0 / (w0b * w0b), 1.0 / (1.0 - 1.4));
    const SteadySolution b = solve_steady_piston(w0b, rhob, g);
    // Two independent root solves at tol 1e-12 each.
    CHECK(a.tau == doctest::Approx(b.tau).epsilon(5e-11));
}

TEST_CASE("jump-condition residuals over random parameters") {
    const double gammas[] = {1.2, 1.4, 5.0 / 3.0, 2.0, 2.5};
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ulr(-10.0, -1.0), uw(0.5, 5.0);
    std::uniform_int_distribution<int> ig(0, 4);
    for (int i = 0; i < 500; ++i) {
        const Gamma g(gammas[ig(rng)]);
        const double rho_inf = std::pow(10.0, ulr(rng));
        const double w0 = uw(rng);
        const SteadySolution sol = solve_steady_piston(w0, rho_inf, g);
        const auto [r1, r2] = rh_residuals(sol, rho_inf, g);
        CHECK(r1 < 1e-12);
        CHECK(r2 < 1e-12);
        // Lax structure: lambda+(post) > s0 > lambda-(post).
        const auto [lm, lp] = eigenvalues({sol.rho0, sol.u0}, g);
        CHECK(lp > sol.s0);
        CHECK(sol.s0 > lm);
        CHECK(sol.s0 > sol.u0);
        CHECK(sol.u0 > 0.0);
        CHECK(sol.tau > 1.0);
    }
}

TEST_CASE("steady solver rejects bad inputs") {
    CHECK_THROWS_AS(solve_steady_piston(0.0, 1e-6, Gamma(1.4)), std::domain_error);
    CHECK_THROWS_AS(solve_steady_piston(1.0, -1.0, Gamma(1.4)), std::domain_error);
    CHECK_THROWS_AS(solve_steady_piston(1.0, 1e-250, Gamma(1.4)), std::domain_error);
}

TEST_CASE("leading-order steady surrogate") {
    {
        const Gamma g(1.4);
        const SteadySolution approx = steady_leading_order(1.0, 1e-12, g);
        const SteadySolution exact = solve_steady_piston(1.0, 1e-12, g);
        CHECK(std::abs(approx.rho0 / exact.rho0 - 1.0) < 1e-3);
        CHECK(approx.u0 == 1.0);
    }
    {
        // gamma = 2: s0 - w0 = w0^0 * rho_inf^{1/2}
        const SteadySolution approx = steady_leading_order(2.0, 1e-10, Gamma(2.0));
        CHECK(approx.s0 - 2.0 == doctest::Approx(1e-5).epsilon(1e-12));
    }
}

TEST_CASE("post-shock state from k: worked example") {
    const ShockSample sh = shock_state_from_k(2.0, 2.0 / 3.0, Gamma(2.0));
    CHECK(sh.state.u == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sh.s_prime == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sh.state.rho == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(shock_state_from_k(1.0, 1.0, Gamma(2.0)), entropy_error);
}

TEST_CASE("shock sample identities over random parameters") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ulk(-6.0, 9.0), ulr(-10.0, -1.0), ug(1.05, 2.95);
    for (int i = 0; i < 1000; ++i) {
        const Gamma g(ug(rng));
        const double k = 1.0 + std::pow(10.0, ulk(rng));
        const double rho_inf = std::pow(10.0, ulr(rng));
        const ShockSample sh = shock_state_from_k(k, rho_inf, g);

        // u_S = s'(1 - 1/k); the (k-1)/k form avoids the cancellation in
        // 1 - 1/k for weak shocks, the literal form is held to 1e-10.
        CHECK(std::abs(sh.state.u - sh.s_prime * ((k - 1.0) / k)) <=
              1e-14 * std::abs(sh.state.u));
        CHECK(std::abs(sh.state.u - sh.s_prime * (1.0 - 1.0 / k)) <=
              1e-10 * std::abs(sh.state.u));
        // a + b = 1
        CHECK(std::abs(sh.a + sh.b - 1.0) <= 1e-14);
        // a lambda+ + b lambda- = s'
        const auto [lm, lp] = eigenvalues(sh.state, g);
        CHECK(std::abs(sh.a * lp + sh.b * lm - sh.s_prime) <= 1e-10 * std::abs(sh.s_prime));
        // Lax: lambda+ > s' > lambda-
        CHECK(lp > sh.s_prime);
        CHECK(sh.s_prime > lm);
    }
}

TEST_CASE("shock closure from the incoming invariant") {
    const Gamma g2(2.0);
    const double r_plus = 1.0 + 2.0 * std::sqrt(8.0 / 3.0);  // steady worked example
    const double k = solve_k_from_r_plus(r_plus, 2.0 / 3.0, g2);
    CHECK(k == doctest::Approx(2.0).epsilon(1e-10));

    SUBCASE("monotone response on a grid") {
        double prev = 0.0;
        for (int i = 0; i <= 40; ++i) {
            const double rp = 4.0 + 0.5 * i;
            const double ki = solve_k_from_r_plus(rp, 2.0 / 3.0, g2);
            if (i > 0) CHECK(ki > prev);
            prev = ki;
        }
    }
    SUBCASE("round trip against the sample state") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> ulk(-3.0, 6.0), ulr(-8.0, -1.0), ug(1.05, 2.95);
        for (int i = 0; i < 200; ++i) {
            const Gamma g(ug(rng));
            const double k0 = 1.0 + std::pow(10.0, ulk(rng));
            const double rho_inf = std::pow(10.0, ulr(rng));
            const ShockSample sh = shock_state_from_k(k0, rho_inf, g);
            const auto [rm, rp] = riemann_invariants(sh.state, g);
            (void)rm;
            const double kr = solve_k_from_r_plus(rp, rho_inf, g);
            CHECK(kr == doctest::Approx(k0).epsilon(1e-9));
        }
    }
    SUBCASE("vanishing shock is rejected") {
        const double limit = 2.0 * std::sqrt(2.0) * std::pow(2.0 / 3.0, 0.5);
        CHECK_THROWS_AS(solve_k_from_r_plus(limit * 0.999, 2.0 / 3.0, g2), entropy_error);
        CHECK_THROWS_AS(solve_k_from_r_plus(limit, 2.0 / 3.0, g2), entropy_error);
    }
}

TEST_CASE("reflection coefficient") {
    // Frozen from exact evaluation of the reflection relation derived from
    // the jump closure (see shock_polar.hpp): factors 0.2404082... and
    // (m-1)/(m+1) with m = f'(2) for gamma = 2.
    CHECK(reflection_coefficient(2.0, Gamma(2.0)) ==
          doctest::Approx(0.013894658000680094).epsilon(1e-12));

    SUBCASE("vanishing-density expansion") {
        // 1 - k_g ~ (6/sqrt(gamma)) k^{-1/2}
        const double v = reflection_coefficient(1e6, Gamma(1.4));
        const double lead = 6.0 / std::sqrt(1.4);
        CHECK((1.0 - v) * 1e3 / lead > 0.98);
        CHECK((1.0 - v) * 1e3 / lead < 1.02);
    }
    SUBCASE("dissipation on a wide grid") {
        for (double gv : {1.05, 1.4, 2.0, 2.5, 2.95}) {
            const Gamma g(gv);
            for (double lk = -8.0; lk <= 12.0; lk += 0.25) {
                const double k = 1.0 + std::pow(10.0, lk);
                const double kg = reflection_coefficient(k, g);
                CHECK(std::abs(kg) < 1.0);
            }
        }
    }
    SUBCASE("approaches 1 from below at large k") {
        const double kg = reflection_coefficient(1e10, Gamma(2.0));
        CHECK(kg > 0.9999);
        CHECK(kg < 1.0);
    }
    CHECK_THROWS_AS(reflection_coefficient(0.9, Gamma(2.0)), entropy_error);
}

TEST_CASE("shock tangent coefficients") {
    const auto [a, b] = shock_tangent_coeffs(2.0, Gamma(2.0));
    CHECK(a == doctest::Approx(0.8061862178478973).epsilon(1e-14));
    CHECK(b == doctest::Approx(0.1938137821521027).epsilon(1e-13));

    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> ulk(-6.0, 9.0), ug(1.05, 2.95);
    for (int i = 0; i < 1000; ++i) {
        const Gamma g(ug(rng));
        const double k = 1.0 + std::pow(10.0, ulk(rng));
        const auto [ai, bi] = shock_tangent_coeffs(k, g);
        CHECK(std::abs(ai + bi - 1.0) <= 1e-14);
        CHECK(ai > 0.0);
    }
    // b stays positive; scan k >= 4 (and well below) per gamma.
    for (double gv : {1.1, 1.4, 2.0, 2.9}) {
        const Gamma g(gv);
        for (double k = 4.0; k < 1e6; k *= 1.7) {
            const auto [ai, bi] = shock_tangent_coeffs(k, g);
            (void)ai;
            CHECK(bi > 0.0);
        }
    }
    CHECK_THROWS_AS(shock_tangent_coeffs(1.0, Gamma(2.0)), entropy_error);
}

TEST_CASE("leading-order reflection coefficient") {
    CHECK(kg_leading_order(1e6, Gamma::unchecked(4.0)) ==
          doctest::Approx(0.997).epsilon(1e-15));
    // ratio against the exact coefficient at large k
    for (double gv : {1.4, 2.0, 2.5}) {
        const Gamma g(gv);
        const double exact = 1.0 - reflection_coefficient(1e6, g);
        const double lead = 1.0 - kg_leading_order(1e6, g);
        CHECK(exact / lead == doctest::Approx(1.0).epsilon(0.02));
    }
    // closed form crosses zero at k = 36/gamma
    const double gv = 2.0;
    CHECK(kg_leading_order(36.0 / gv, Gamma(gv)) == doctest::Approx(0.0).epsilon(1e-14));
}
