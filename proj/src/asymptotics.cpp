#include "piston/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "piston/moc.hpp"
#include "piston/shock_polar.hpp"

namespace piston {

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::domain_error("fit_power_law: need >= 3 points");
    const std::size_t n = points.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(points[i].first > 0.0 && points[i].second > 0.0))
            throw std::domain_error("fit_power_law: data must be strictly positive");
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::domain_error("fit_power_law: degenerate abscissae");

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
        ss_res += r * r;
        fit.residual_max = std::max(fit.residual_max, std::abs(r));
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    return fit;
}

double prefactor_given_exponent(const std::vector<std::pair<double, double>>& points,
                                double exponent) {
    if (points.empty()) throw std::domain_error("prefactor_given_exponent: no points");
    double acc = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0 && y > 0.0))
            throw std::domain_error("prefactor_given_exponent: data must be strictly positive");
        acc += std::log(y) - exponent * std::log(x);
    }
    return std::exp(acc / static_cast<double>(points.size()));
}

std::vector<double> GridSpec::values() const {
    if (count < 4) throw std::domain_error("GridSpec: need count >= 4");
    if (!(anchor > 0.0 && ratio > 0.0 && ratio != 1.0))
        throw std::domain_error("GridSpec: anchor and ratio must be positive, ratio != 1");
    std::vector<double> v(count);
    double x = anchor;
    for (int i = 0; i < count; ++i) {
        v[i] = x;
        x *= ratio;
    }
    return v;
}

namespace {

struct QuantityDef {
    const char* name;
    // value from the solved steady state
    double (*value)(const SteadySolution&, double w0, Gamma);
    // paper exponent and prefactor in rho_inf
    double (*exponent)(double g);
    double (*prefactor)(double w0, double g);
};

const QuantityDef kSteadyQuantities[] = {
    {"rho0",
     [](const SteadySolution& s, double, Gamma) { return s.rho0; },
     [](double g) { return 1.0 / g; },
     [](double w0, double g) { return std::pow(w0, 2.0 / g); }},
    {"tau",
     [](const SteadySolution& s, double, Gamma) { return s.tau; },
     [](double g) { return (1.0 - g) / g; },
     [](double w0, double g) { return std::pow(w0, 2.0 / g); }},
    {"s0_minus_w0",
     [](const SteadySolution& s, double w0, Gamma) { return s.s0 - w0; },
     [](double g) { return (g - 1.0) / g; },
     [](double w0, double g) { return std::pow(w0, (g - 2.0) / g); }},
    {"c0",
     [](const SteadySolution& s, double, Gamma gamma) { return sound_speed(s.rho0, gamma); },
     [](double g) { return (g - 1.0) / (2.0 * g); },
     [](double w0, double g) { return std::sqrt(g) * std::pow(w0, (g - 1.0) / g); }},
    {"lam_plus_minus_s0",
     [](const SteadySolution& s, double, Gamma gamma) {
         return s.u0 + sound_speed(s.rho0, gamma) - s.s0;
     },
     [](double g) { return (g - 1.0) / (2.0 * g); },
     [](double w0, double g) { return std::sqrt(g) * std::pow(w0, (g - 1.0) / g); }},
    {"s0_minus_lam_minus",
     [](const SteadySolution& s, double, Gamma gamma) {
         return s.s0 - (s.u0 - sound_speed(s.rho0, gamma));
     },
     [](double g) { return (g - 1.0) / (2.0 * g); },
     [](double w0, double g) { return std::sqrt(g) * std::pow(w0, (g - 1.0) / g); }},
};

}  // namespace

SweepResult sweep_steady(const SweepConfig& cfg) {
    if (!cfg.piston.is_constant())
        throw std::domain_error("sweep_steady: needs a constant piston");
    const double w0 = cfg.piston.evaluate(0.0).w_prime;
    const std::vector<double> grid = cfg.rho_grid.values();

    SweepResult out;
    for (double gv : cfg.gammas) {
        const Gamma gamma(gv);
        std::vector<SteadySolution> sols;
        sols.reserve(grid.size());
        for (double rho : grid) sols.push_back(solve_steady_piston(w0, rho, gamma));

        for (const QuantityDef& q : kSteadyQuantities) {
            if (!cfg.quantities.empty() &&
                std::find(cfg.quantities.begin(), cfg.quantities.end(), q.name) ==
                    cfg.quantities.end())
                continue;
            std::vector<std::pair<double, double>> pts;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double val = q.value(sols[i], w0, gamma);
                out.rows.push_back({gv, grid[i], q.name, val});
                pts.emplace_back(grid[i], val);
            }
            QuantityFit qf;
            qf.gamma = gv;
            qf.quantity = q.name;
            qf.fit = fit_power_law(pts);
            qf.paper_exponent = q.exponent(gv);
            qf.paper_prefactor = q.prefactor(w0, gv);
            qf.prefactor = prefactor_given_exponent(pts, qf.paper_exponent);
            qf.pass = std::abs(qf.fit.exponent - qf.paper_exponent) <= cfg.exponent_tol &&
                      std::abs(qf.prefactor / qf.paper_prefactor - 1.0) <= cfg.prefactor_tol;
            out.fits.push_back(std::move(qf));
        }
    }
    return out;
}

SweepResult sweep_kg(const std::vector<double>& gammas, const GridSpec& k_grid,
                     double exponent_tol, double prefactor_tol) {
    const std::vector<double> ks = k_grid.values();
    SweepResult out;
    for (double gv : gammas) {
        const Gamma gamma(gv);
        std::vector<std::pair<double, double>> pts;
        for (double k : ks) {
            const double val = 1.0 - reflection_coefficient(k, gamma);
            out.rows.push_back({gv, k, "one_minus_kg", val});
            pts.emplace_back(k, val);
        }
        QuantityFit qf;
        qf.gamma = gv;
        qf.quantity = "one_minus_kg";
        qf.fit = fit_power_law(pts);
        qf.paper_exponent = -0.5;
        qf.paper_prefactor = 6.0 / std::sqrt(gv);
        qf.prefactor = prefactor_given_exponent(pts, qf.paper_exponent);
        qf.pass = std::abs(qf.fit.exponent - qf.paper_exponent) <= exponent_tol &&
                  std::abs(qf.prefactor / qf.paper_prefactor - 1.0) <= prefactor_tol;
        out.fits.push_back(std::move(qf));
    }
    return out;
}

UnsteadyResult sweep_unsteady(const UnsteadySweepConfig& cfg) {
    const Gamma gamma(cfg.gamma);
    const double g = cfg.gamma;
    UnsteadyResult out;
    out.bound_exponent = (g - 1.0) / (2.0 * g);

    std::vector<std::pair<double, double>> tdc_pts, dev_pts;
    for (double rho : cfg.rho_grid.values()) {
        UnsteadyPoint pt;
        pt.rho_inf = rho;
        pt.w_b = cfg.amp_factor * cfg.kappa * std::pow(rho, (g - 1.0) / g + cfg.varrho);
        const PistonSpec spec = PistonSpec::decaying(cfg.w_a, pt.w_b);
        pt.assumptions_ok = validate(spec, rho, gamma, cfg.kappa, cfg.varrho).all_ok();

        RunOptions opts;
        opts.step.theta = cfg.theta;
        opts.snapshot_every = 25;
        const SolutionTrace trace =
            run(spec, rho, gamma, cfg.t0, cfg.t_end, cfg.n_nodes, opts);
        if (trace.failure) throw convergence_error("sweep_unsteady: " + trace.failure->message);

        const HypothesisReport rep = hypothesis_monitor(trace, cfg.delta1, cfg.delta2, gamma, rho);
        pt.hypothesis_pass = rep.all_pass;
        pt.bound3 = cfg.delta2 * std::pow(rho, (g - 1.0) / (2.0 * g));
        for (const HypothesisRow& row : rep.rows) pt.max_tdc = std::max(pt.max_tdc, row.h3);

        // Interior density against the quasi-steady profile at the last level.
        const TimeLevel& last = trace.snapshots.back().curr;
        const double wp = last.nodes[0].state.u;
        const double ref = std::pow(wp, 2.0 / g) * std::pow(rho, 1.0 / g);
        double dev = 0.0, mid_rho = 0.0;
        for (const Node& nd : last.nodes) dev = std::max(dev, std::abs(nd.state.rho - ref));
        mid_rho = last.nodes[last.nodes.size() / 2].state.rho;
        pt.rho_dev = dev;
        pt.rho_ratio = mid_rho / ref;

        if (pt.max_tdc > 0.0) tdc_pts.emplace_back(rho, pt.max_tdc);
        if (dev > 0.0) dev_pts.emplace_back(rho, dev);
        out.points.push_back(pt);
    }
    if (tdc_pts.size() >= 3) out.tdc_fit = fit_power_law(tdc_pts);
    if (dev_pts.size() >= 3) out.rho_dev_fit = fit_power_law(dev_pts);
    return out;
}

}  // namespace piston
