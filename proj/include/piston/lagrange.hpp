#pragma once

// Shock-capturing reference solver in mass coordinates. The gas occupies
// m in [0, M] with the piston fixed at m = 0; the state per cell is the
// specific volume v = 1/rho and velocity u, evolved by a first-order
// Godunov-type scheme with an acoustic two-wave interface solver.

#include <vector>

#include "piston/gas.hpp"
#include "piston/piston_path.hpp"

namespace piston {

struct LagGrid {
    double t = 0.0;
    std::vector<double> m_edges;  // uniform, size n+1
    std::vector<double> v;        // specific volume per cell, > 0
    std::vector<double> u;        // velocity per cell

    std::size_t cells() const { return v.size(); }
    double dm() const { return m_edges[1] - m_edges[0]; }
};

// Uniform quiescent gas: v = 1/rho_inf, u = 0.
LagGrid init(double rho_inf, double total_mass, int n_cells);

struct StepInfo {
    double dt = 0.0;
    double p_left = 0.0;   // boundary pressure at the piston face
    double p_right = 0.0;  // boundary pressure at the far-field face
};

// One conservative update. The piston face carries the prescribed velocity
// w'(t); the right face sees the quiescent far-field state. cfl in (0, 1).
LagGrid step_fv(const LagGrid& grid, double w_prime_at_t, double rho_inf, Gamma gamma,
                double cfl, StepInfo* info = nullptr);

struct EulerianCell {
    double x;  // cell center
    double rho;
    double u;
};

// x(m) = piston_x + cumulative v dm; strictly increasing cell centers.
std::vector<EulerianCell> to_eulerian(const LagGrid& grid, double piston_x = 0.0);

struct ShockEstimate {
    bool found = false;
    std::size_t interface = 0;   // index of the steepest density interface
    double m_s = 0.0;            // mass coordinate of that interface
    double x_rel = 0.0;          // Eulerian position relative to the piston
    double plateau_rho = 0.0;    // windowed average behind the front
    double plateau_u = 0.0;
};

// Steepest-gradient detector; a shock is declared when max rho / rho_inf
// exceeds 1.5. plateau_window counts the averaged cells behind the front.
ShockEstimate locate_shock(const LagGrid& grid, double rho_inf, int plateau_window = 16);

struct OracleSnapshot {
    double t = 0.0;
    double piston_x = 0.0;
    LagGrid grid;
    ShockEstimate shock;
};

struct OracleTrace {
    double gamma = 0.0;
    double rho_inf = 0.0;
    double t_end = 0.0;
    long steps = 0;
    bool tainted = false;  // shock entered the last 10% of the mass domain
    std::vector<OracleSnapshot> snapshots;
    // Momentum bookkeeping: sum u dm changes by the time-integrated boundary
    // pressure difference.
    double momentum_initial = 0.0;
    double momentum_final = 0.0;
    double boundary_impulse = 0.0;
};

// Runs from t = 0 and snapshots at the requested times (the first grid state
// at or after each time). total_mass <= 0 requests an automatic size with a
// safety margin over the mass swept by the shock.
OracleTrace run_oracle(const PistonSpec& spec, double rho_inf, Gamma gamma, double t_end,
                       int n_cells, double cfl, const std::vector<double>& snapshot_times,
                       double total_mass = 0.0);

}  // namespace piston
