#pragma once

// Equation of state and characteristic algebra for 1-D isentropic gas with
// pressure law p = rho^gamma.

#include <utility>

#include "piston/errors.hpp"

namespace piston {

// Adiabatic exponent, restricted to the model range (1, 3).
class Gamma {
  public:
    explicit Gamma(double value);

    // Escape hatch for arithmetic checks outside the model range; never used
    // by solver code.
    static Gamma unchecked(double value);

    double value() const { return v_; }

  private:
    Gamma() = default;
    double v_ = 0.0;
};

struct GasState {
    double rho = 0.0;  // density (>= 0; solvers require > 0)
    double u = 0.0;    // velocity
};

// c = sqrt(gamma) * rho^((gamma-1)/2); zero at vacuum.
double sound_speed(double rho, Gamma gamma);

// (lambda-, lambda+) = (u - c, u + c).
std::pair<double, double> eigenvalues(const GasState& state, Gamma gamma);

// (R-, R+) = (u - 2c/(gamma-1), u + 2c/(gamma-1)).
std::pair<double, double> riemann_invariants(const GasState& state, Gamma gamma);

// Inverse of riemann_invariants. Requires r_plus >= r_minus.
GasState state_from_invariants(double r_minus, double r_plus, Gamma gamma);

enum class RescaleMode {
    vanishing_pressure,  // rho/rho_inf, u, t, x unchanged
    high_speed,          // rho/rho_inf, u*rho_inf^((1-gamma)/2), t*rho_inf^((gamma-1)/2), x
};

struct ScaledPoint {
    GasState state;
    double t = 0.0;
    double x = 0.0;
};

ScaledPoint rescale(const GasState& state, double rho_inf, double t, double x,
                    RescaleMode mode, Gamma gamma);
ScaledPoint unrescale(const GasState& state, double rho_inf, double t, double x,
                      RescaleMode mode, Gamma gamma);

}  // namespace piston
