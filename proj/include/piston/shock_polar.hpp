#pragma once

// Shock-front algebra for the leading shock moving into quiescent gas
// (rho_inf, 0): the shock polar f(k), the steady constant-piston solution,
// the unsteady jump closure, the reflection coefficient k_g, and the shock
// tangent coefficients a, b.

#include <utility>

#include "piston/gas.hpp"

namespace piston {

// f(k) = sqrt((1 - 1/k)(k^gamma - 1)), k > 1. Strictly increasing.
double f_polar(double k, Gamma gamma);

// f'(k) = (gamma k^(gamma+1) + (1-gamma) k^gamma - 1) / (2 k^2 f(k)).
double f_polar_prime(double k, Gamma gamma);

// h(tau) = (tau - 1)(tau^gamma - 1)/tau, tau > 1. Strictly increasing with
// limits 0 (tau -> 1+) and +inf.
double h_of_tau(double tau, Gamma gamma);

// Piecewise-constant solution for a piston advancing at constant speed w0:
// post-shock state (rho0, u0) and straight shock speed s0.
struct SteadySolution {
    double rho0 = 0.0;
    double u0 = 0.0;
    double s0 = 0.0;
    double tau = 0.0;  // rho0 / rho_inf, > 1
};

// Solves h(tau) = w0^2 rho_inf^(1-gamma), then s0 = tau/(tau-1) * w0.
SteadySolution solve_steady_piston(double w0, double rho_inf, Gamma gamma,
                                   double tol = 1e-12);

// Closed-form leading-order surrogate (no root solve):
// rho0 = w0^(2/gamma) rho_inf^(1/gamma), u0 = w0,
// s0 = w0 + w0^((gamma-2)/gamma) rho_inf^((gamma-1)/gamma).
SteadySolution steady_leading_order(double w0, double rho_inf, Gamma gamma);

// Relative residuals of the two jump conditions
//   (rho0 - rho_inf) s0 = rho0 u0
//   rho0 u0 s0 = rho0 u0^2 + rho0^gamma - rho_inf^gamma.
std::pair<double, double> rh_residuals(const SteadySolution& sol, double rho_inf,
                                       Gamma gamma);

// Instantaneous shock data. k = rho(s(t),t)/rho_inf > 1; a, b express the
// derivative along the shock as a*D+ + b*D- with a + b = 1.
struct ShockSample {
    double t = 0.0;
    double s = 0.0;
    double k = 0.0;
    double s_prime = 0.0;
    GasState state;       // post-shock (rho, u)
    double k_g = 0.0;     // reflection coefficient, |k_g| < 1
    double a = 0.0;
    double b = 0.0;
};

// Post-shock state and shock speed for strength k (t, s left unset):
//   u_S  = rho_inf^((gamma-1)/2) f(k)
//   s'   = rho_inf^((gamma-1)/2) k f(k) / (k - 1).
ShockSample shock_state_from_k(double k, double rho_inf, Gamma gamma);

// Shock-fitting closure: the unique k > 1 with
//   u_S(k) + 2 c_S(k)/(gamma-1) = r_plus,
// where c_S = sqrt(gamma) (k rho_inf)^((gamma-1)/2). The left side is
// strictly increasing in k; its k -> 1+ limit is 2 sqrt(gamma)
// rho_inf^((gamma-1)/2)/(gamma-1), below which the shock vanishes.
double solve_k_from_r_plus(double r_plus, double rho_inf, Gamma gamma,
                           double tol = 1e-12);

// Reflection coefficient of characteristic derivatives at the shock,
// D+c + k_g D-c = 0:
//   k_g = (A - f)/(A + f) * (m - 1)/(m + 1),
// with A = sqrt(gamma)(k-1) k^((gamma-1)/2) and
// m = f'(k) k^((3-gamma)/2) / sqrt(gamma). Satisfies |k_g| < 1 and
// 1 - k_g ~ (6/sqrt(gamma)) k^(-1/2) as k -> infinity.
double reflection_coefficient(double k, Gamma gamma);

// (a, b) with a = (f + A)/(2A), b = (A - f)/(2A); a + b = 1, both positive.
std::pair<double, double> shock_tangent_coeffs(double k, Gamma gamma);

// Leading-order reflection coefficient 1 - (6/sqrt(gamma)) k^(-1/2).
double kg_leading_order(double k, Gamma gamma);

}  // namespace piston
