#include "piston/moc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "piston/pchip.hpp"

namespace piston {

namespace {

constexpr double kEps = 1e-300;

// Invariant fields of one level with interpolation in x. Characteristic feet
// may overshoot the span by rounding; anything further out is a step error.
class LevelView {
  public:
    LevelView(const TimeLevel& lev, Gamma gamma) : g_(gamma.value()) {
        const std::size_t n = lev.nodes.size();
        std::vector<double> x(n), rp(n), rm(n);
        for (std::size_t j = 0; j < n; ++j) {
            x[j] = lev.nodes[j].x;
            const auto [lo, hi] = riemann_invariants(lev.nodes[j].state, gamma);
            rm[j] = lo;
            rp[j] = hi;
        }
        x0_ = x.front();
        x1_ = x.back();
        fuzz_ = 1e-9 * (x1_ - x0_);
        irp_ = Pchip(x, rp);
        irm_ = Pchip(x, rm);
    }

    double clamp_or_throw(double x) const {
        if (x < x0_) {
            if (x0_ - x > fuzz_) throw step_error("characteristic foot left the level span");
            return x0_;
        }
        if (x > x1_) {
            if (x - x1_ > fuzz_) throw step_error("characteristic foot left the level span");
            return x1_;
        }
        return x;
    }

    double rp(double x) const { return irp_(clamp_or_throw(x)); }
    double rm(double x) const { return irm_(clamp_or_throw(x)); }
    double u(double x) const { return 0.5 * (rp(x) + rm(x)); }
    double c(double x) const { return 0.25 * (g_ - 1.0) * (rp(x) - rm(x)); }
    double lam_plus(double x) const {
        const double p = rp(x), m = rm(x);
        return 0.5 * (p + m) + 0.25 * (g_ - 1.0) * (p - m);
    }
    double lam_minus(double x) const {
        const double p = rp(x), m = rm(x);
        return 0.5 * (p + m) - 0.25 * (g_ - 1.0) * (p - m);
    }
    double clamp(double x) const { return std::min(std::max(x, x0_), x1_); }
    double x_lo() const { return x0_; }
    double x_hi() const { return x1_; }

  private:
    double g_;
    double x0_ = 0.0, x1_ = 0.0, fuzz_ = 0.0;
    Pchip irp_, irm_;
};

double sound_speed_of(const GasState& st, Gamma gamma) { return sound_speed(st.rho, gamma); }

void check_level(const TimeLevel& lev) {
    const std::size_t n = lev.nodes.size();
    for (std::size_t j = 0; j + 1 < n; ++j)
        if (!(lev.nodes[j].x < lev.nodes[j + 1].x))
            throw step_error("node ordering lost");
    for (const auto& nd : lev.nodes)
        if (!(nd.state.rho > 0.0)) throw vacuum_error("non-positive density on level");
}

}  // namespace

double wedge_mass(const TimeLevel& level) {
    double m = 0.0;
    for (std::size_t j = 0; j + 1 < level.nodes.size(); ++j) {
        const auto& a = level.nodes[j];
        const auto& b = level.nodes[j + 1];
        m += 0.5 * (a.state.rho + b.state.rho) * (b.x - a.x);
    }
    return m;
}

TimeLevel init_from_steady(const PistonSpec& spec, double rho_inf, Gamma gamma, double t0,
                           int n_nodes, double tol) {
    if (!(t0 > 0.0)) throw std::domain_error("init_from_steady: t0 must be positive");
    if (n_nodes < 3) throw std::domain_error("init_from_steady: need n_nodes >= 3");

    const PistonEval pe = spec.evaluate(t0);
    const double w0 = pe.w_prime;
    const SteadySolution sol = solve_steady_piston(w0, rho_inf, gamma, tol);

    TimeLevel lev;
    lev.t = t0;
    lev.piston_x = pe.w;
    const double width = (sol.s0 - w0) * t0;

    lev.shock = shock_state_from_k(sol.tau, rho_inf, gamma);
    lev.shock.t = t0;
    lev.shock.s = pe.w + width;
    // Pin the sample to the steady solution exactly; the closure values agree
    // to rounding.
    lev.shock.state = GasState{sol.rho0, sol.u0};
    lev.shock.s_prime = sol.s0;

    lev.nodes.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double xi = static_cast<double>(i) / (n_nodes - 1);
        lev.nodes[i].x = pe.w + xi * width;
        lev.nodes[i].state = GasState{sol.rho0, sol.u0};
    }
    lev.nodes.back().x = lev.shock.s;
    check_level(lev);
    return lev;
}

TimeLevel step(const TimeLevel& level, const PistonSpec& spec, double rho_inf, Gamma gamma,
               const StepConfig& cfg) {
    if (!(cfg.theta > 0.0 && cfg.theta <= 1.0))
        throw std::domain_error("step: theta must lie in (0, 1]");
    const std::size_t n = level.nodes.size();
    if (n < 3) throw std::domain_error("step: need >= 3 nodes");

    double min_dx = std::numeric_limits<double>::infinity();
    double max_lp = -std::numeric_limits<double>::infinity();
    double min_lm = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        if (j + 1 < n) min_dx = std::min(min_dx, level.nodes[j + 1].x - level.nodes[j].x);
        const auto [lm, lp] = eigenvalues(level.nodes[j].state, gamma);
        max_lp = std::max(max_lp, lp);
        min_lm = std::min(min_lm, lm);
    }
    const double spread = max_lp - min_lm;
    if (!(spread > 0.0)) throw vacuum_error("step: characteristic speeds collapsed");
    const double dt = cfg.theta * min_dx / spread;
    const double t_new = level.t + dt;

    const LevelView old(level, gamma);
    const PistonEval pe = spec.evaluate(t_new);
    const double w_new = pe.w;
    const double up_new = pe.w_prime;

    // --- shock node: predict with old slopes, correct with averaged ones ---
    const ShockSample& sh0 = level.shock;
    const double lam_sh0 = eigenvalues(sh0.state, gamma).second;
    double s_pred = sh0.s + dt * sh0.s_prime;
    double foot_a = old.clamp(s_pred - dt * lam_sh0);
    const double rp_a = old.rp(foot_a);
    const double k_a = solve_k_from_r_plus(rp_a, rho_inf, gamma, cfg.tol);
    ShockSample sh_a = shock_state_from_k(k_a, rho_inf, gamma);
    double s_corr = sh0.s + 0.5 * dt * (sh0.s_prime + sh_a.s_prime);

    const double slope_b = 0.5 * (old.lam_plus(foot_a) + eigenvalues(sh_a.state, gamma).second);
    const double foot_b = s_corr - dt * slope_b;
    const double rp_b = old.rp(foot_b);
    const double k_new = solve_k_from_r_plus(rp_b, rho_inf, gamma, cfg.tol);
    ShockSample sh_new = shock_state_from_k(k_new, rho_inf, gamma);
    sh_new.t = t_new;
    sh_new.s = sh0.s + 0.5 * dt * (sh0.s_prime + sh_new.s_prime);
    if (!(sh_new.s > w_new)) throw step_error("shock met the piston");

    // --- piston node: u is prescribed, R- arrives along the minus family ---
    const double lam_p0 = eigenvalues(level.nodes[0].state, gamma).first;
    double pfoot_a = w_new - dt * lam_p0;
    const double rm_pa = old.rm(pfoot_a);
    if (!(2.0 * up_new - rm_pa >= rm_pa)) throw vacuum_error("piston closure lost sound speed");
    const GasState pst_a = state_from_invariants(rm_pa, 2.0 * up_new - rm_pa, gamma);
    const double pslope_b = 0.5 * (old.lam_minus(pfoot_a) + eigenvalues(pst_a, gamma).first);
    const double rm_p = old.rm(w_new - dt * pslope_b);
    if (!(2.0 * up_new - rm_p >= rm_p)) throw vacuum_error("piston closure lost sound speed");
    const GasState piston_state = state_from_invariants(rm_p, 2.0 * up_new - rm_p, gamma);

    // --- interior nodes at fixed fractions of the new interval ---
    TimeLevel out;
    out.t = t_new;
    out.piston_x = w_new;
    out.shock = sh_new;
    out.nodes.resize(n);
    out.nodes[0] = Node{w_new, piston_state};
    out.nodes[n - 1] = Node{sh_new.s, sh_new.state};

    const double width_new = sh_new.s - w_new;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double xi = static_cast<double>(i) / (n - 1);
        const double x_new = w_new + xi * width_new;
        const double xc = old.clamp(x_new);

        const double fp_a = x_new - dt * old.lam_plus(xc);
        const double fm_a = x_new - dt * old.lam_minus(xc);
        const double rp_ia = old.rp(fp_a);
        const double rm_ia = old.rm(fm_a);
        if (!(rp_ia >= rm_ia)) throw vacuum_error("interior closure lost sound speed");
        const GasState st_a = state_from_invariants(rm_ia, rp_ia, gamma);
        const auto [lm_h, lp_h] = eigenvalues(st_a, gamma);

        const double fp_b = x_new - dt * 0.5 * (old.lam_plus(fp_a) + lp_h);
        const double fm_b = x_new - dt * 0.5 * (old.lam_minus(fm_a) + lm_h);
        const double rp_i = old.rp(fp_b);
        const double rm_i = old.rm(fm_b);
        if (!(rp_i > rm_i)) throw vacuum_error("interior closure lost sound speed");
        out.nodes[i] = Node{x_new, state_from_invariants(rm_i, rp_i, gamma)};
    }

    check_level(out);
    return out;
}

SolutionTrace run(const PistonSpec& spec, double rho_inf, Gamma gamma, double t0, double t_end,
                  int n_nodes, const RunOptions& opts) {
    if (!(t_end > t0)) throw std::domain_error("run: t_end must exceed t0");

    SolutionTrace trace;
    trace.gamma = gamma.value();
    trace.rho_inf = rho_inf;
    trace.t0 = t0;
    trace.t_end = t_end;
    trace.n_nodes = n_nodes;

    TimeLevel curr = init_from_steady(spec, rho_inf, gamma, t0, n_nodes, opts.step.tol);
    auto record_shock = [&trace](const TimeLevel& lev) {
        const ShockSample& s = lev.shock;
        trace.shock_history.push_back({s.t, s.s, s.s_prime, s.k, s.k_g, s.a, s.b});
    };
    record_shock(curr);
    if (opts.store_all_levels) trace.all_levels.push_back(curr);

    std::deque<TimeLevel> recent{curr};  // rolling window ending at curr
    long pending_snapshot = -1;          // step index whose triple awaits its successor
    long step_index = 0;
    const int every = std::max(1, opts.snapshot_every);

    while (curr.t < t_end && step_index < opts.max_steps) {
        TimeLevel next;
        bool advanced = false;
        StepConfig cfg = opts.step;
        for (int attempt = 0; attempt < 5; ++attempt) {
            try {
                next = step(curr, spec, rho_inf, gamma, cfg);
                advanced = true;
                break;
            } catch (const step_error&) {
                cfg.theta *= 0.5;  // retry the step on a shorter leash
            }
        }
        if (!advanced) {
            try {
                next = step(curr, spec, rho_inf, gamma, cfg);
                advanced = true;
            } catch (const std::exception& e) {
                trace.failure = RunFailure{step_index, curr.t, e.what()};
                break;
            }
        }

        ++step_index;
        record_shock(next);
        if (opts.store_all_levels) trace.all_levels.push_back(next);

        if (pending_snapshot >= 0) {
            trace.snapshots.push_back(Snapshot{recent.front(), recent.back(), next});
            pending_snapshot = -1;
        }
        recent.push_back(next);
        if (recent.size() > 2) recent.pop_front();
        if (step_index % every == 0 && recent.size() == 2) pending_snapshot = step_index;

        curr = next;
    }

    trace.steps = step_index;
    trace.t_reached = curr.t;
    return trace;
}

CharDiagnostics char_derivatives(const TimeLevel& a, const TimeLevel& b, Gamma gamma) {
    if (!(b.t > a.t)) throw std::domain_error("char_derivatives: levels out of order");
    const std::size_t n = b.nodes.size();
    if (a.nodes.size() != n) throw std::domain_error("char_derivatives: node counts differ");
    const double dt = b.t - a.t;

    const LevelView va(a, gamma);
    const LevelView vb(b, gamma);

    CharDiagnostics d;
    d.t = b.t;
    d.dt = dt;
    d.dpc.assign(n, 0.0);
    d.dmc.assign(n, 0.0);

    auto backward = [&](std::size_t j, bool plus) {
        const auto [lm_h, lp_h] = eigenvalues(b.nodes[j].state, gamma);
        const double slope0 = plus ? lp_h : lm_h;
        const double x_h = b.nodes[j].x;
        const double f0 = va.clamp(x_h - dt * slope0);
        const double slope = 0.5 * (slope0 + (plus ? va.lam_plus(f0) : va.lam_minus(f0)));
        const double foot = x_h - dt * slope;
        const double c_h = sound_speed_of(b.nodes[j].state, gamma);
        return (c_h - va.c(foot)) / dt;
    };
    // Forward segment from a's boundary point; value lands at the segment.
    auto forward = [&](std::size_t j, bool plus) {
        const auto [lm0, lp0] = eigenvalues(a.nodes[j].state, gamma);
        const double slope0 = plus ? lp0 : lm0;
        const double x0 = a.nodes[j].x;
        const double h0 = vb.clamp(x0 + dt * slope0);
        const double slope = 0.5 * (slope0 + (plus ? vb.lam_plus(h0) : vb.lam_minus(h0)));
        const double head = x0 + dt * slope;
        const double c0 = sound_speed_of(a.nodes[j].state, gamma);
        return (vb.c(head) - c0) / dt;
    };

    for (std::size_t j = 0; j < n; ++j) {
        d.dpc[j] = (j == 0) ? forward(0, true) : backward(j, true);
        d.dmc[j] = (j == n - 1) ? forward(n - 1, false) : backward(j, false);
    }
    return d;
}

std::vector<DecompositionResidual> decomposition_residual(const SolutionTrace& trace,
                                                          Gamma gamma) {
    if (trace.snapshots.empty())
        throw std::domain_error("decomposition_residual: no snapshots in trace");
    const double g = gamma.value();
    std::vector<DecompositionResidual> out;
    out.reserve(trace.snapshots.size());

    for (const Snapshot& snap : trace.snapshots) {
        const CharDiagnostics d1 = char_derivatives(snap.prev, snap.curr, gamma);
        const CharDiagnostics d2 = char_derivatives(snap.curr, snap.next, gamma);
        const double dt2 = snap.next.t - snap.curr.t;
        const std::size_t n = snap.curr.nodes.size();

        std::vector<double> xc(n);
        for (std::size_t j = 0; j < n; ++j) xc[j] = snap.curr.nodes[j].x;
        const Pchip idpc(xc, d1.dpc);
        const Pchip idmc(xc, d1.dmc);
        const LevelView vc(snap.curr, gamma);

        double r_pm = 0.0, r_mp = 0.0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const auto [lm_h, lp_h] = eigenvalues(snap.next.nodes[j].state, gamma);
            const double x_h = snap.next.nodes[j].x;
            const double c_h = sound_speed_of(snap.next.nodes[j].state, gamma);

            // D+(D-c): difference of D-c along the plus-family segment.
            {
                const double f0 = vc.clamp(x_h - dt2 * lp_h);
                const double foot = vc.clamp(x_h - dt2 * 0.5 * (lp_h + vc.lam_plus(f0)));
                const double dmc_foot = idmc(foot);
                const double dpc_foot = idpc(foot);
                const double lhs = (d2.dmc[j] - dmc_foot) / dt2;
                const double dp = 0.5 * (d2.dpc[j] + dpc_foot);
                const double dm = 0.5 * (d2.dmc[j] + dmc_foot);
                const double cm = 0.5 * (c_h + vc.c(foot));
                const double rhs = (g + 1.0) / (g - 1.0) / (2.0 * cm) * (dp + dm) * dm;
                const double scale = std::max({std::abs(dp), std::abs(dm), kEps});
                r_pm = std::max(r_pm, std::abs(lhs - rhs) * snap.curr.t / scale);
            }
            // D-(D+c): difference of D+c along the minus-family segment.
            {
                const double f0 = vc.clamp(x_h - dt2 * lm_h);
                const double foot = vc.clamp(x_h - dt2 * 0.5 * (lm_h + vc.lam_minus(f0)));
                const double dmc_foot = idmc(foot);
                const double dpc_foot = idpc(foot);
                const double lhs = (d2.dpc[j] - dpc_foot) / dt2;
                const double dp = 0.5 * (d2.dpc[j] + dpc_foot);
                const double dm = 0.5 * (d2.dmc[j] + dmc_foot);
                const double cm = 0.5 * (c_h + vc.c(foot));
                const double rhs = (g + 1.0) / (g - 1.0) / (2.0 * cm) * (dp + dm) * dp;
                const double scale = std::max({std::abs(dp), std::abs(dm), kEps});
                r_mp = std::max(r_mp, std::abs(lhs - rhs) * snap.curr.t / scale);
            }
        }
        out.push_back({snap.curr.t, r_pm, r_mp});
    }
    return out;
}

std::vector<LevelResidual> shock_reflection_residual(const SolutionTrace& trace, Gamma gamma) {
    std::vector<LevelResidual> out;
    out.reserve(trace.snapshots.size());
    for (const Snapshot& snap : trace.snapshots) {
        const CharDiagnostics d1 = char_derivatives(snap.prev, snap.curr, gamma);
        const CharDiagnostics d2 = char_derivatives(snap.curr, snap.next, gamma);
        const std::size_t n = snap.curr.nodes.size();
        const double dpc = d1.dpc[n - 1];   // backward segment into curr's shock
        const double dmc = d2.dmc[n - 1];   // forward segment out of curr's shock
        const double kg = snap.curr.shock.k_g;
        out.push_back({snap.curr.t, std::abs(dpc + kg * dmc) / std::max(std::abs(dmc), kEps)});
    }
    return out;
}

std::vector<LevelResidual> piston_reflection_residual(const SolutionTrace& trace,
                                                      const PistonSpec& spec, Gamma gamma) {
    const double g = gamma.value();
    std::vector<LevelResidual> out;
    out.reserve(trace.snapshots.size());
    for (const Snapshot& snap : trace.snapshots) {
        const CharDiagnostics d1 = char_derivatives(snap.prev, snap.curr, gamma);
        const CharDiagnostics d2 = char_derivatives(snap.curr, snap.next, gamma);
        const double dmc = d1.dmc[0];  // backward into curr's piston node
        const double dpc = d2.dpc[0];  // forward out of curr's piston node
        const double forcing = (1.0 - g) * spec.evaluate(snap.curr.t).w_second;
        const double scale =
            std::max({std::abs(dpc), std::abs(dmc), std::abs(forcing), kEps});
        out.push_back({snap.curr.t, std::abs(dpc - dmc - forcing) / scale});
    }
    return out;
}

HypothesisReport hypothesis_monitor(const SolutionTrace& trace, double delta1, double delta2,
                                    Gamma gamma, double rho_inf, double nu_hat) {
    if (trace.snapshots.empty())
        throw std::domain_error("hypothesis_monitor: no snapshots in trace");
    const double g = gamma.value();
    const double b1 = std::pow(rho_inf, (g + 1.0) / (2.0 * g));
    const double b3 = delta2 * std::pow(rho_inf, (g - 1.0) / (2.0 * g));

    HypothesisReport rep;
    rep.delta1 = delta1;
    rep.delta2 = delta2;

    // First pass: measure, and derive the empirical margin candidate.
    double worst3 = std::numeric_limits<double>::infinity();
    std::vector<HypothesisRow> rows;
    for (const Snapshot& snap : trace.snapshots) {
        const TimeLevel& lev = snap.curr;
        const CharDiagnostics d = char_derivatives(snap.prev, snap.curr, gamma);
        HypothesisRow row;
        row.t = lev.t;
        const double wp = lev.nodes[0].state.u;
        row.bound1 = b1;
        row.bound2 = (std::pow(wp, (g - 2.0) / g) + delta1) * std::pow(rho_inf, (g - 1.0) / g);
        row.bound3 = b3;
        for (std::size_t j = 0; j < lev.nodes.size(); ++j) {
            row.h1 = std::max(row.h1, std::abs(lev.nodes[j].state.rho - lev.shock.state.rho));
            row.h2 = std::max(row.h2, std::abs(lev.shock.s_prime - lev.nodes[j].state.u));
            row.h3 = std::max({row.h3, std::abs(lev.t * d.dpc[j]), std::abs(lev.t * d.dmc[j])});
        }
        worst3 = std::min(worst3, 1.0 - row.h3 / row.bound3);
        rows.push_back(row);
    }
    rep.nu_hat_candidate = 2.0 * worst3 * std::pow(rho_inf, -(g - 1.0) / (2.0 * g));
    rep.nu_hat_used = nu_hat > 0.0 ? nu_hat : rep.nu_hat_candidate;

    const double tilde_factor3 =
        1.0 - 0.5 * rep.nu_hat_used * std::pow(rho_inf, (g - 1.0) / (2.0 * g));
    rep.all_pass = true;
    rep.all_tilde_pass = true;
    rep.worst_margin1 = rep.worst_margin2 = rep.worst_margin3 =
        std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        HypothesisRow& row = rows[i];
        row.ok1 = row.h1 <= row.bound1;
        row.ok2 = row.h2 <= row.bound2;
        row.ok3 = row.h3 <= row.bound3;
        const double wp = trace.snapshots[i].curr.nodes[0].state.u;
        const double tb2 = (std::pow(wp, (g - 2.0) / g) + 2.0 * delta1 / 3.0) *
                           std::pow(rho_inf, (g - 1.0) / g);
        row.tilde_ok1 = row.h1 <= 0.5 * row.bound1;
        row.tilde_ok2 = row.h2 <= tb2;
        row.tilde_ok3 = row.h3 <= tilde_factor3 * row.bound3;
        rep.all_pass = rep.all_pass && row.ok1 && row.ok2 && row.ok3;
        rep.all_tilde_pass =
            rep.all_tilde_pass && row.tilde_ok1 && row.tilde_ok2 && row.tilde_ok3;
        rep.worst_margin1 = std::min(rep.worst_margin1, 1.0 - row.h1 / row.bound1);
        rep.worst_margin2 = std::min(rep.worst_margin2, 1.0 - row.h2 / row.bound2);
        rep.worst_margin3 = std::min(rep.worst_margin3, 1.0 - row.h3 / row.bound3);
    }
    rep.rows = std::move(rows);
    return rep;
}

// ---------------------------------------------------------------------------
// Forward characteristic tracing through stored levels.

namespace {

// Piecewise-linear shock curve from the per-step history.
class ShockCurve {
  public:
    explicit ShockCurve(const std::vector<ShockHistoryRow>& hist) : h_(hist) {
        if (h_.size() < 2) throw std::domain_error("shock curve needs >= 2 history rows");
    }
    double s(double t) const {
        const auto [i, a] = locate(t);
        return (1.0 - a) * h_[i].s + a * h_[i + 1].s;
    }

  private:
    std::pair<std::size_t, double> locate(double t) const {
        auto it = std::lower_bound(h_.begin(), h_.end(), t,
                                   [](const ShockHistoryRow& r, double tv) { return r.t < tv; });
        std::size_t i = (it == h_.begin()) ? 0 : static_cast<std::size_t>(it - h_.begin()) - 1;
        if (i + 1 >= h_.size()) i = h_.size() - 2;
        const double a =
            std::clamp((t - h_[i].t) / (h_[i + 1].t - h_[i].t), 0.0, 1.0);
        return {i, a};
    }
    const std::vector<ShockHistoryRow>& h_;
};

struct LevelSeq {
    std::vector<const TimeLevel*> levels;
};

LevelSeq level_sequence(const SolutionTrace& trace) {
    LevelSeq seq;
    if (!trace.all_levels.empty()) {
        for (const TimeLevel& lev : trace.all_levels) seq.levels.push_back(&lev);
    } else {
        for (const Snapshot& snap : trace.snapshots) seq.levels.push_back(&snap.curr);
    }
    if (seq.levels.size() < 2)
        throw std::domain_error("trace holds fewer than two usable levels");
    return seq;
}

}  // namespace

CharPath trace_characteristic(const SolutionTrace& trace, int family, double x0, double t0,
                              Gamma gamma) {
    if (family != 1 && family != -1)
        throw std::domain_error("trace_characteristic: family must be +1 or -1");
    const LevelSeq seq = level_sequence(trace);
    const ShockCurve curve(trace.shock_history);
    const double g = gamma.value();
    if (t0 < seq.levels.front()->t - 1e-12 || t0 > seq.levels.back()->t + 1e-12)
        throw std::domain_error("trace_characteristic: start time outside trace");

    CharPath path;
    double x = x0;
    double t = t0;

    std::size_t i = 0;
    while (i + 2 < seq.levels.size() && seq.levels[i + 1]->t <= t0) ++i;

    for (; i + 1 < seq.levels.size(); ++i) {
        const TimeLevel* la = seq.levels[i];
        const TimeLevel* lb = seq.levels[i + 1];
        if (lb->t <= t) continue;
        const LevelView va(*la, gamma);
        const LevelView vb(*lb, gamma);

        // Piston position interpolated between the level boundaries.
        auto w_of = [&](double tv) {
            const double al = std::clamp((tv - la->t) / (lb->t - la->t), 0.0, 1.0);
            return (1.0 - al) * la->piston_x + al * lb->piston_x;
        };
        auto invariants_at = [&](double xv, double tv) {
            const double w = w_of(tv);
            const double s = curve.s(tv);
            const double xi = std::clamp((xv - w) / std::max(s - w, kEps), 0.0, 1.0);
            const double xa = la->piston_x + xi * (la->shock.s - la->piston_x);
            const double xb = lb->piston_x + xi * (lb->shock.s - lb->piston_x);
            const double al = std::clamp((tv - la->t) / (lb->t - la->t), 0.0, 1.0);
            const double rp = (1.0 - al) * va.rp(va.clamp(xa)) + al * vb.rp(vb.clamp(xb));
            const double rm = (1.0 - al) * va.rm(va.clamp(xa)) + al * vb.rm(vb.clamp(xb));
            return std::pair<double, double>{rm, rp};
        };
        auto lambda_at = [&](double xv, double tv) {
            const auto [rm, rp] = invariants_at(xv, tv);
            const double u = 0.5 * (rp + rm);
            const double c = 0.25 * (g - 1.0) * (rp - rm);
            return family > 0 ? u + c : u - c;
        };
        auto record = [&](double tv, double xv) {
            const auto [rm, rp] = invariants_at(xv, tv);
            path.points.push_back({tv, xv, rp, rm});
        };

        if (path.points.empty()) {
            // A start on (or beyond) the outgoing boundary exits immediately.
            const double scale = std::max(1.0, std::abs(x));
            if (family > 0 && x >= curve.s(t) - 1e-14 * scale) {
                path.exited = true;
                path.boundary = 'S';
                path.t_exit = t;
                record(t, std::min(x, curve.s(t)));
                return path;
            }
            if (family < 0 && x <= w_of(t) + 1e-14 * scale) {
                path.exited = true;
                path.boundary = 'P';
                path.t_exit = t;
                record(t, std::max(x, w_of(t)));
                return path;
            }
            record(t, x);
        }

        const double t_stop = lb->t;
        const double dt = t_stop - t;

        // Heun step across the remainder of this level pair.
        const double k1 = lambda_at(x, t);
        const double k2 = lambda_at(x + dt * k1, t_stop);
        const double x_new = x + 0.5 * dt * (k1 + k2);

        // Linear-in-step boundary crossing detection.
        const double gap_a = family > 0 ? curve.s(t) - x : x - w_of(t);
        const double gap_b = family > 0 ? curve.s(t_stop) - x_new : x_new - w_of(t_stop);
        if (gap_b <= 0.0) {
            const double frac = gap_a / std::max(gap_a - gap_b, kEps);
            const double t_cross = t + frac * dt;
            const double x_lin = x + frac * (x_new - x);
            path.exited = true;
            path.boundary = family > 0 ? 'S' : 'P';
            path.t_exit = t_cross;
            record(t_cross, std::clamp(x_lin, w_of(t_cross), curve.s(t_cross)));
            return path;
        }

        x = x_new;
        t = t_stop;
        record(t, x);
    }

    path.exited = false;
    path.boundary = 'H';
    path.t_exit = t;
    return path;
}

NarrowReport narrow_check(const SolutionTrace& trace, const PistonSpec& spec, Gamma gamma,
                          double rho_inf, double delta1, double sigma, int sample_points,
                          std::uint64_t seed) {
    const double g = gamma.value();
    double w_star, w_upper;
    if (!spec.is_tabulated()) {
        w_star = spec.analytic_inf_speed();
        w_upper = spec.analytic_sup_speed();
    } else {
        const AssumptionReport rep = validate(spec, rho_inf, gamma, 1.0, 0.1,
                                              std::max(1.0, trace.t_reached), 4096);
        w_star = rep.w_star;
        w_upper = rep.w_upper;
    }
    const double denom = std::sqrt(g) * std::pow(w_star, (g - 1.0) / g) - sigma;
    if (!(sigma > 0.0 && denom > 0.0))
        throw std::domain_error("narrow_check: sigma outside (0, sqrt(g) w_*^{(g-1)/g})");

    NarrowReport rep;
    rep.coeff_width = delta1 + std::pow(w_star, -1.0 / g) * std::pow(w_upper, (g - 1.0) / g);
    rep.coeff_time = rep.coeff_width / denom;

    const double rw = std::pow(rho_inf, (g - 1.0) / g);
    const double rt = std::pow(rho_inf, (g - 1.0) / (2.0 * g));

    rep.all_widths_ok = true;
    for (const ShockHistoryRow& row : trace.shock_history) {
        const double width = row.s - spec.evaluate(row.t).w;
        const double bound = rep.coeff_width * rw * row.t;
        const bool ok = width > 0.0 && width <= bound;
        rep.widths.push_back({row.t, width, bound, ok});
        rep.all_widths_ok = rep.all_widths_ok && ok;
    }

    const ShockCurve curve(trace.shock_history);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    const double t_lo = trace.t0 * 1.02;
    // Leave room for both exits before the stored horizon.
    const double t_hi = trace.t_reached / (1.0 + 3.0 * rep.coeff_time * rt);

    rep.all_samples_ok = true;
    for (int m = 0; m < sample_points; ++m) {
        NarrowSample smp;
        const double f = uni(rng);
        smp.t_p = t_lo * std::pow(std::max(t_hi / t_lo, 1.0), f);
        const double xi = uni(rng);
        const double w = spec.evaluate(smp.t_p).w;
        const double s = curve.s(smp.t_p);
        smp.x_p = w + xi * (s - w);
        smp.bound = rep.coeff_time * rt * smp.t_p;

        const CharPath plus = trace_characteristic(trace, +1, smp.x_p, smp.t_p, gamma);
        const CharPath minus = trace_characteristic(trace, -1, smp.x_p, smp.t_p, gamma);
        if (plus.exited) {
            smp.dt_plus = plus.t_exit - smp.t_p;
            smp.ok_plus = smp.dt_plus <= smp.bound;
        } else {
            smp.inconclusive_plus = true;
            ++rep.inconclusive;
        }
        if (minus.exited) {
            smp.dt_minus = minus.t_exit - smp.t_p;
            smp.ok_minus = smp.dt_minus <= smp.bound;
        } else {
            smp.inconclusive_minus = true;
            ++rep.inconclusive;
        }
        if (plus.exited && !smp.ok_plus) rep.all_samples_ok = false;
        if (minus.exited && !smp.ok_minus) rep.all_samples_ok = false;
        rep.samples.push_back(smp);
    }
    return rep;
}

}  // namespace piston
