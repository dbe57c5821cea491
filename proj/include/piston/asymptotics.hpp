#pragma once

// Parameter sweeps over rho_inf (and shock strength k) with log-log power-law
// fitting of the vanishing-density scalings.

#include <string>
#include <vector>

#include "piston/gas.hpp"
#include "piston/piston_path.hpp"

namespace piston {

struct PowerLawFit {
    double exponent = 0.0;       // OLS slope of log y on log x
    double log_prefactor = 0.0;  // OLS intercept
    double r_squared = 0.0;
    double residual_max = 0.0;   // max |log y - fit|
};

// Ordinary least squares on (log x, log y); needs >= 3 strictly positive points.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

// Prefactor with the exponent imposed: geometric mean of y / x^exponent.
// Free-intercept extrapolation to x = 1 amplifies next-order corrections;
// this estimate does not.
double prefactor_given_exponent(const std::vector<std::pair<double, double>>& points,
                                double exponent);

// Geometric grid anchored at `anchor`, multiplied by `ratio` (< 1 for a grid
// decreasing toward 0), `count` >= 4 points.
struct GridSpec {
    double anchor = 1e-6;
    double ratio = 0.1;
    int count = 9;

    std::vector<double> values() const;
};

struct SweepConfig {
    std::vector<double> gammas{1.4, 2.0, 2.5};
    GridSpec rho_grid;
    PistonSpec piston = PistonSpec::constant(1.0);
    std::vector<std::string> quantities;  // empty = all known
    double exponent_tol = 0.01;
    double prefactor_tol = 0.01;
};

struct QuantityFit {
    double gamma = 0.0;
    std::string quantity;
    PowerLawFit fit;
    double prefactor = 0.0;        // fixed-exponent estimate
    double paper_exponent = 0.0;
    double paper_prefactor = 0.0;
    bool pass = false;             // exponent and prefactor within tolerance
};

struct SweepRow {
    double gamma, rho_inf;
    std::string quantity;
    double value;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<QuantityFit> fits;
};

// Constant-piston sweep: rho0, tau, s0 - w0, c0, lambda+ - s0, s0 - lambda-
// against their closed-form scalings in rho_inf.
SweepResult sweep_steady(const SweepConfig& cfg);

// Fit of 1 - k_g against k: exponent -1/2, prefactor 6/sqrt(gamma).
SweepResult sweep_kg(const std::vector<double>& gammas, const GridSpec& k_grid,
                     double exponent_tol = 0.005, double prefactor_tol = 0.02);

struct UnsteadySweepConfig {
    double gamma = 1.4;
    GridSpec rho_grid{1e-6, 0.1, 4};
    double w_a = 1.0;            // base decaying-piston speed
    double amp_factor = 0.9;     // w_b = amp_factor * kappa * rho^{(g-1)/g + varrho}
    double kappa = 1.0;
    double varrho = 0.1;
    double t0 = 1.0;
    double t_end = 20.0;
    int n_nodes = 60;
    double theta = 0.8;
    double delta1 = 0.1;
    double delta2 = 0.1;
};

struct UnsteadyPoint {
    double rho_inf = 0.0;
    double w_b = 0.0;
    bool assumptions_ok = false;
    bool hypothesis_pass = false;   // all three bounds on every output level
    double max_tdc = 0.0;           // max over trace of max(|t D+c|, |t D-c|)
    double bound3 = 0.0;
    double rho_dev = 0.0;           // sup_x |rho - w'(t*)^{2/g} rho^{1/g}| at the last level
    double rho_ratio = 0.0;         // interior rho / (w'(t*)^{2/g} rho^{1/g})
};

struct UnsteadyResult {
    std::vector<UnsteadyPoint> points;
    PowerLawFit tdc_fit;      // observational: max |t D c| vs rho_inf
    PowerLawFit rho_dev_fit;  // observational: interior density deviation vs rho_inf
    double bound_exponent = 0.0;  // (gamma-1)/(2 gamma)
};

// Decaying-piston sweep with the acceleration amplitude scaled down with
// rho_inf; measures bound satisfaction per grid point (the fits are
// observational, the bounds are the claims).
UnsteadyResult sweep_unsteady(const UnsteadySweepConfig& cfg);

}  // namespace piston
