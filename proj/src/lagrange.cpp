#include "piston/lagrange.hpp"

#include <algorithm>
#include <cmath>

#include "piston/shock_polar.hpp"

namespace piston {

namespace {

// Lagrangian signal speed rho*c = sqrt(gamma) v^{-(gamma+1)/2}.
double impedance(double v, double g) { return std::sqrt(g) * std::pow(v, -0.5 * (g + 1.0)); }

double pressure(double v, double g) { return std::pow(v, -g); }

}  // namespace

LagGrid init(double rho_inf, double total_mass, int n_cells) {
    if (!(rho_inf > 0.0)) throw std::domain_error("lagrange::init: rho_inf must be positive");
    if (!(total_mass > 0.0)) throw std::domain_error("lagrange::init: total_mass must be positive");
    if (n_cells < 10) throw std::domain_error("lagrange::init: need at least 10 cells");
    LagGrid grid;
    grid.t = 0.0;
    grid.m_edges.resize(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i)
        grid.m_edges[i] = total_mass * static_cast<double>(i) / n_cells;
    grid.v.assign(n_cells, 1.0 / rho_inf);
    grid.u.assign(n_cells, 0.0);
    return grid;
}

LagGrid step_fv(const LagGrid& grid, double w_prime_at_t, double rho_inf, Gamma gamma,
                double cfl, StepInfo* info) {
    if (!(cfl > 0.0 && cfl < 1.0)) throw std::domain_error("step_fv: cfl must lie in (0, 1)");
    const double g = gamma.value();
    const std::size_t n = grid.cells();
    const double dm = grid.dm();

    std::vector<double> p(n), z(n);
    double zmax = impedance(1.0 / rho_inf, g);  // far-field ghost
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = pressure(grid.v[i], g);
        z[i] = impedance(grid.v[i], g);
        zmax = std::max(zmax, z[i]);
    }
    const double dt = cfl * dm / zmax;

    // Acoustic two-wave star values at interior interfaces.
    std::vector<double> us(n + 1), ps(n + 1);
    for (std::size_t i = 1; i < n; ++i) {
        const double s = std::max(z[i - 1], z[i]);
        us[i] = 0.5 * (grid.u[i - 1] + grid.u[i]) - (p[i] - p[i - 1]) / (2.0 * s);
        ps[i] = 0.5 * (p[i - 1] + p[i]) - 0.5 * s * (grid.u[i] - grid.u[i - 1]);
    }
    // Piston face: velocity prescribed; pressure from the left-running wave.
    us[0] = w_prime_at_t;
    ps[0] = p[0] + z[0] * (w_prime_at_t - grid.u[0]);
    // Far-field face: quiescent ghost state.
    {
        const double v_inf = 1.0 / rho_inf;
        const double p_inf = pressure(v_inf, g);
        const double s = std::max(z[n - 1], impedance(v_inf, g));
        us[n] = 0.5 * (grid.u[n - 1] + 0.0) - (p_inf - p[n - 1]) / (2.0 * s);
        ps[n] = 0.5 * (p[n - 1] + p_inf) - 0.5 * s * (0.0 - grid.u[n - 1]);
    }

    LagGrid out = grid;
    out.t = grid.t + dt;
    const double r = dt / dm;
    for (std::size_t i = 0; i < n; ++i) {
        out.v[i] = grid.v[i] + r * (us[i + 1] - us[i]);
        out.u[i] = grid.u[i] - r * (ps[i + 1] - ps[i]);
        if (!(out.v[i] > 0.0)) throw vacuum_error("step_fv: specific volume went non-positive");
    }
    if (info) *info = StepInfo{dt, ps[0], ps[n]};
    return out;
}

std::vector<EulerianCell> to_eulerian(const LagGrid& grid, double piston_x) {
    const std::size_t n = grid.cells();
    const double dm = grid.dm();
    std::vector<EulerianCell> out(n);
    double x = piston_x;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = grid.v[i] * dm;
        out[i] = {x + 0.5 * w, 1.0 / grid.v[i], grid.u[i]};
        x += w;
    }
    return out;
}

ShockEstimate locate_shock(const LagGrid& grid, double rho_inf, int plateau_window) {
    const std::size_t n = grid.cells();
    ShockEstimate est;

    double rho_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) rho_max = std::max(rho_max, 1.0 / grid.v[i]);
    if (rho_max / rho_inf <= 1.5) return est;  // no shock

    double best = -1.0;
    std::size_t iface = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double jump = std::abs(1.0 / grid.v[i + 1] - 1.0 / grid.v[i]);
        if (jump > best) {
            best = jump;
            iface = i + 1;  // edge index between cells i and i+1
        }
    }
    const int gap = 4;
    if (iface < static_cast<std::size_t>(gap) + 2) return est;  // no resolved plateau yet

    est.found = true;
    est.interface = iface;
    est.m_s = grid.m_edges[iface];
    double x = 0.0;
    for (std::size_t i = 0; i < iface; ++i) x += grid.v[i] * grid.dm();
    est.x_rel = x;

    const std::size_t hi = iface - gap;  // exclusive
    const std::size_t lo = hi > static_cast<std::size_t>(plateau_window)
                               ? hi - static_cast<std::size_t>(plateau_window)
                               : 0;
    double sr = 0.0, su = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        sr += 1.0 / grid.v[i];
        su += grid.u[i];
    }
    const double cnt = static_cast<double>(hi - lo);
    est.plateau_rho = sr / cnt;
    est.plateau_u = su / cnt;
    return est;
}

OracleTrace run_oracle(const PistonSpec& spec, double rho_inf, Gamma gamma, double t_end,
                       int n_cells, double cfl, const std::vector<double>& snapshot_times,
                       double total_mass) {
    if (!(t_end > 0.0)) throw std::domain_error("run_oracle: t_end must be positive");
    const double g = gamma.value();

    double mass = total_mass;
    if (mass <= 0.0) {
        // Swept mass ~ rho_inf * s(t_end); pad the steady estimate.
        const double w_sup = spec.is_tabulated() ? spec.evaluate(t_end).w_prime
                                                 : spec.analytic_sup_speed();
        const SteadySolution lead = steady_leading_order(w_sup, rho_inf, gamma);
        mass = 1.4 * rho_inf * (spec.evaluate(t_end).w + (lead.s0 - lead.u0) * t_end +
                                lead.s0 * 0.05 * t_end);
    }

    OracleTrace trace;
    trace.gamma = g;
    trace.rho_inf = rho_inf;
    trace.t_end = t_end;

    LagGrid grid = init(rho_inf, mass, n_cells);
    const double dm = grid.dm();
    for (double ui : grid.u) trace.momentum_initial += ui * dm;

    // Kahan-compensated boundary impulse.
    double impulse = 0.0, comp = 0.0;
    auto add_impulse = [&](double val) {
        const double y = val - comp;
        const double t = impulse + y;
        comp = (t - impulse) - y;
        impulse = t;
    };

    std::size_t next_snap = 0;
    const long max_steps = 50000000;
    long steps = 0;
    while (grid.t < t_end && steps < max_steps) {
        const double wp = spec.evaluate(grid.t).w_prime;
        StepInfo info;
        grid = step_fv(grid, wp, rho_inf, gamma, cfl, &info);
        add_impulse(info.dt * (info.p_left - info.p_right));
        ++steps;
        while (next_snap < snapshot_times.size() && grid.t >= snapshot_times[next_snap]) {
            OracleSnapshot snap;
            snap.t = grid.t;
            snap.piston_x = spec.evaluate(grid.t).w;
            snap.grid = grid;
            snap.shock = locate_shock(grid, rho_inf);
            trace.snapshots.push_back(std::move(snap));
            ++next_snap;
        }
    }
    trace.steps = steps;
    for (double ui : grid.u) trace.momentum_final += ui * dm;
    trace.boundary_impulse = impulse;

    const ShockEstimate last = locate_shock(grid, rho_inf);
    if (last.found && last.m_s > 0.9 * mass) trace.tainted = true;

    // Always keep the terminal state.
    OracleSnapshot fin;
    fin.t = grid.t;
    fin.piston_x = spec.evaluate(grid.t).w;
    fin.grid = std::move(grid);
    fin.shock = last;
    trace.snapshots.push_back(std::move(fin));
    return trace;
}

}  // namespace piston
