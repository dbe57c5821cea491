#include "piston/shock_polar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "piston/root_find.hpp"

namespace piston {

namespace {

// k^gamma - 1 without cancellation near k = 1.
double pow_m1(double k, double g) { return std::expm1(g * std::log1p(k - 1.0)); }

void require_entropy(double k, const char* who) {
    if (!(k > 1.0)) throw entropy_error(std::string(who) + ": requires k > 1");
}

double min_rho_inf(double g) { return std::pow(10.0, -300.0 / g); }

void require_rho_inf(double rho_inf, double g, const char* who) {
    if (!(rho_inf > 0.0)) throw std::domain_error(std::string(who) + ": rho_inf must be positive");
    if (rho_inf < min_rho_inf(g))
        throw std::domain_error(std::string(who) + ": rho_inf below representable range");
}

}  // namespace

double f_polar(double k, Gamma gamma) {
    require_entropy(k, "f_polar");
    const double km1 = k - 1.0;
    return std::sqrt(km1 / k * pow_m1(k, gamma.value()));
}

double f_polar_prime(double k, Gamma gamma) {
    require_entropy(k, "f_polar_prime");
    const double g = gamma.value();
    const double km1 = k - 1.0;
    // gamma k^(gamma+1) + (1-gamma) k^gamma - 1 = gamma k^gamma (k-1) + (k^gamma - 1)
    const double num = g * std::pow(k, g) * km1 + pow_m1(k, g);
    return num / (2.0 * k * k * f_polar(k, gamma));
}

double h_of_tau(double tau, Gamma gamma) {
    if (!(tau > 1.0)) throw std::domain_error("h_of_tau: requires tau > 1");
    return (tau - 1.0) * pow_m1(tau, gamma.value()) / tau;
}

namespace {

double h_prime(double tau, double g) {
    const double tgm1 = pow_m1(tau, g);
    const double dnum = tgm1 + (tau - 1.0) * g * std::pow(tau, g - 1.0);
    return dnum / tau - (tau - 1.0) * tgm1 / (tau * tau);
}

}  // namespace

SteadySolution solve_steady_piston(double w0, double rho_inf, Gamma gamma, double tol) {
    const double g = gamma.value();
    if (!(w0 > 0.0)) throw std::domain_error("solve_steady_piston: w0 must be positive");
    require_rho_inf(rho_inf, g, "solve_steady_piston");
    if (!(tol > 0.0)) throw std::domain_error("solve_steady_piston: tol must be positive");

    const double target = w0 * w0 * std::pow(rho_inf, 1.0 - g);
    auto h = [&](double tau) { return h_of_tau(tau, gamma) - target; };
    auto hp = [&](double tau) { return h_prime(tau, g); };

    double lo = 1.0 + 1e-13;
    double flo = h(lo);
    if (flo >= 0.0)
        throw convergence_error("solve_steady_piston: degenerate bracket (target below h(1+))");

    // Grow the upper end geometrically from the leading-order guess.
    double hi = std::max(1.0 + 1e-6, std::pow(target, 1.0 / g));
    double fhi = h(hi);
    int grow = 0;
    while (fhi < 0.0) {
        if (++grow > 600) throw convergence_error("solve_steady_piston: bracket growth failed");
        hi *= 4.0;
        fhi = h(hi);
    }

    RootOptions opt;
    opt.rel_tol = tol;
    const double tau = solve_bracketed(h, hp, lo, hi, flo, fhi, target, opt);

    SteadySolution sol;
    sol.tau = tau;
    sol.rho0 = tau * rho_inf;
    sol.u0 = w0;
    sol.s0 = tau / (tau - 1.0) * w0;
    return sol;
}

SteadySolution steady_leading_order(double w0, double rho_inf, Gamma gamma) {
    const double g = gamma.value();
    if (!(w0 > 0.0)) throw std::domain_error("steady_leading_order: w0 must be positive");
    if (!(rho_inf > 0.0)) throw std::domain_error("steady_leading_order: rho_inf must be positive");
    SteadySolution sol;
    sol.tau = std::pow(w0, 2.0 / g) * std::pow(rho_inf, (1.0 - g) / g);
    sol.rho0 = std::pow(w0, 2.0 / g) * std::pow(rho_inf, 1.0 / g);
    sol.u0 = w0;
    sol.s0 = w0 + std::pow(w0, (g - 2.0) / g) * std::pow(rho_inf, (g - 1.0) / g);
    return sol;
}

std::pair<double, double> rh_residuals(const SteadySolution& sol, double rho_inf, Gamma gamma) {
    const double g = gamma.value();
    const double mass_lhs = (sol.rho0 - rho_inf) * sol.s0;
    const double mass_rhs = sol.rho0 * sol.u0;
    const double mom_lhs = sol.rho0 * sol.u0 * sol.s0;
    const double mom_rhs =
        sol.rho0 * sol.u0 * sol.u0 + std::pow(sol.rho0, g) - std::pow(rho_inf, g);
    const double tiny = 1e-300;
    return {std::abs(mass_lhs - mass_rhs) / std::max(std::abs(mass_rhs), tiny),
            std::abs(mom_lhs - mom_rhs) / std::max(std::abs(mom_lhs), tiny)};
}

ShockSample shock_state_from_k(double k, double rho_inf, Gamma gamma) {
    const double g = gamma.value();
    require_entropy(k, "shock_state_from_k");
    require_rho_inf(rho_inf, g, "shock_state_from_k");

    const double p = std::pow(rho_inf, 0.5 * (g - 1.0));
    const double f = f_polar(k, gamma);

    ShockSample sh;
    sh.t = std::numeric_limits<double>::quiet_NaN();
    sh.s = std::numeric_limits<double>::quiet_NaN();
    sh.k = k;
    sh.state.rho = k * rho_inf;
    sh.state.u = p * f;
    sh.s_prime = p * k * f / (k - 1.0);
    sh.k_g = reflection_coefficient(k, gamma);
    const auto [a, b] = shock_tangent_coeffs(k, gamma);
    sh.a = a;
    sh.b = b;
    return sh;
}

double solve_k_from_r_plus(double r_plus, double rho_inf, Gamma gamma, double tol) {
    const double g = gamma.value();
    require_rho_inf(rho_inf, g, "solve_k_from_r_plus");
    if (!(tol > 0.0)) throw std::domain_error("solve_k_from_r_plus: tol must be positive");

    const double p = std::pow(rho_inf, 0.5 * (g - 1.0));
    const double beta = 2.0 * std::sqrt(g) / (g - 1.0);
    const double target = r_plus / p;  // f(k) + beta k^((gamma-1)/2) = target
    if (!(target > beta))
        throw entropy_error("solve_k_from_r_plus: shock vanishes (r_plus at or below k->1+ limit)");

    auto fun = [&](double k) {
        return f_polar(k, gamma) + beta * std::pow(k, 0.5 * (g - 1.0)) - target;
    };
    auto dfun = [&](double k) {
        return f_polar_prime(k, gamma) +
               beta * 0.5 * (g - 1.0) * std::pow(k, 0.5 * (g - 3.0));
    };

    double lo = 1.0 + 1e-13;
    double flo = fun(lo);
    if (flo >= 0.0)
        throw entropy_error("solve_k_from_r_plus: shock vanishes (degenerate bracket)");

    double hi = std::max(2.0, std::pow(target, 2.0 / g));
    double fhi = fun(hi);
    int grow = 0;
    while (fhi < 0.0) {
        if (++grow > 600) throw convergence_error("solve_k_from_r_plus: bracket growth failed");
        hi *= 4.0;
        fhi = fun(hi);
    }

    RootOptions opt;
    opt.rel_tol = tol;
    return solve_bracketed(fun, dfun, lo, hi, flo, fhi, target, opt);
}

std::pair<double, double> shock_tangent_coeffs(double k, Gamma gamma) {
    const double g = gamma.value();
    require_entropy(k, "shock_tangent_coeffs");
    const double big_a = std::sqrt(g) * (k - 1.0) * std::pow(k, 0.5 * (g - 1.0));
    const double f = f_polar(k, gamma);
    return {(f + big_a) / (2.0 * big_a), (big_a - f) / (2.0 * big_a)};
}

double reflection_coefficient(double k, Gamma gamma) {
    const double g = gamma.value();
    require_entropy(k, "reflection_coefficient");
    const double big_a = std::sqrt(g) * (k - 1.0) * std::pow(k, 0.5 * (g - 1.0));
    const double f = f_polar(k, gamma);
    const double m = f_polar_prime(k, gamma) * std::pow(k, 0.5 * (3.0 - g)) / std::sqrt(g);
    return (big_a - f) / (big_a + f) * (m - 1.0) / (m + 1.0);
}

double kg_leading_order(double k, Gamma gamma) {
    return 1.0 - 6.0 / std::sqrt(gamma.value()) / std::sqrt(k);
}

}  // namespace piston
