#include "piston/gas.hpp"

#include <cmath>

namespace piston {

Gamma::Gamma(double value) : v_(value) {
    if (!(value > 1.0 && value < 3.0))
        throw std::domain_error("gamma must satisfy 1 < gamma < 3");
}

Gamma Gamma::unchecked(double value) {
    Gamma g;
    g.v_ = value;
    return g;
}

double sound_speed(double rho, Gamma gamma) {
    if (rho < 0.0) throw std::domain_error("sound_speed: negative density");
    const double g = gamma.value();
    return std::sqrt(g) * std::pow(rho, 0.5 * (g - 1.0));
}

std::pair<double, double> eigenvalues(const GasState& state, Gamma gamma) {
    const double c = sound_speed(state.rho, gamma);
    return {state.u - c, state.u + c};
}

std::pair<double, double> riemann_invariants(const GasState& state, Gamma gamma) {
    const double c = sound_speed(state.rho, gamma);
    const double w = 2.0 * c / (gamma.value() - 1.0);
    return {state.u - w, state.u + w};
}

GasState state_from_invariants(double r_minus, double r_plus, Gamma gamma) {
    if (r_plus < r_minus)
        throw std::domain_error("state_from_invariants: r_plus < r_minus (negative sound speed)");
    const double g = gamma.value();
    const double u = 0.5 * (r_plus + r_minus);
    const double c = 0.25 * (g - 1.0) * (r_plus - r_minus);
    const double rho = std::pow(c * c / g, 1.0 / (g - 1.0));
    return {rho, u};
}

ScaledPoint rescale(const GasState& state, double rho_inf, double t, double x,
                    RescaleMode mode, Gamma gamma) {
    if (rho_inf <= 0.0) throw std::domain_error("rescale: rho_inf must be positive");
    const double g = gamma.value();
    ScaledPoint out;
    out.state.rho = state.rho / rho_inf;
    out.x = x;
    if (mode == RescaleMode::vanishing_pressure) {
        out.state.u = state.u;
        out.t = t;
    } else {
        out.state.u = state.u * std::pow(rho_inf, 0.5 * (1.0 - g));
        out.t = t * std::pow(rho_inf, 0.5 * (g - 1.0));
    }
    return out;
}

ScaledPoint unrescale(const GasState& state, double rho_inf, double t, double x,
                      RescaleMode mode, Gamma gamma) {
    if (rho_inf <= 0.0) throw std::domain_error("unrescale: rho_inf must be positive");
    const double g = gamma.value();
    ScaledPoint out;
    out.state.rho = state.rho * rho_inf;
    out.x = x;
    if (mode == RescaleMode::vanishing_pressure) {
        out.state.u = state.u;
        out.t = t;
    } else {
        out.state.u = state.u * std::pow(rho_inf, 0.5 * (g - 1.0));
        out.t = t * std::pow(rho_inf, 0.5 * (1.0 - g));
    }
    return out;
}

}  // namespace piston
