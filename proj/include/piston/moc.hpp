#pragma once

// Shock-fitting method-of-characteristics solver on the moving wedge
// w(t) <= x <= s(t), plus characteristic-derivative diagnostics and the
// runtime monitors for the continuation bounds.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "piston/gas.hpp"
#include "piston/piston_path.hpp"
#include "piston/shock_polar.hpp"

namespace piston {

struct Node {
    double x = 0.0;
    GasState state;
};

// One time slice. nodes[0] sits on the piston, nodes[N-1] just behind the
// shock; positions are strictly increasing and densities strictly positive.
struct TimeLevel {
    double t = 0.0;
    double piston_x = 0.0;
    ShockSample shock;
    std::vector<Node> nodes;
};

struct StepConfig {
    double theta = 0.8;   // fraction of the characteristic-locality limit
    double tol = 1e-12;   // root-solve tolerance
    int max_iter = 200;
};

struct RunOptions {
    StepConfig step;
    int snapshot_every = 50;     // store a (prev, curr, next) triple every K steps
    bool store_all_levels = false;
    long max_steps = 5000000;
};

struct ShockHistoryRow {
    double t, s, s_prime, k, k_g, a, b;
};

// Consecutive solver levels around a stored output level; the neighbors give
// the directional differences their natural one-step baselines.
struct Snapshot {
    TimeLevel prev, curr, next;
};

struct RunFailure {
    long step = 0;
    double t = 0.0;
    std::string message;
};

struct SolutionTrace {
    double gamma = 0.0;
    double rho_inf = 0.0;
    double t0 = 0.0;
    double t_end = 0.0;
    int n_nodes = 0;
    long steps = 0;
    double t_reached = 0.0;
    std::vector<Snapshot> snapshots;
    std::vector<ShockHistoryRow> shock_history;
    std::vector<TimeLevel> all_levels;  // populated when store_all_levels
    std::optional<RunFailure> failure;
};

// Uniform state from the constant-speed solution with w0 = w'(t0); the shock
// sits at w(t0) + (s0 - w0) t0.
TimeLevel init_from_steady(const PistonSpec& spec, double rho_inf, Gamma gamma, double t0,
                           int n_nodes, double tol = 1e-12);

// Advances one level by dt = theta * min spacing / (max lambda+ - min lambda-).
// Interior nodes sit at fixed fractions of [w, s]; invariants are carried to
// them along two-pass traced characteristics; the piston node enforces
// u = w'(t), the shock node closes through solve_k_from_r_plus.
TimeLevel step(const TimeLevel& level, const PistonSpec& spec, double rho_inf, Gamma gamma,
               const StepConfig& cfg);

SolutionTrace run(const PistonSpec& spec, double rho_inf, Gamma gamma, double t0,
                  double t_end, int n_nodes, const RunOptions& opts);

// Directional derivatives D+-c at b's nodes from one-step characteristic
// segments between the levels. At the two nodes whose backward segment would
// leave the wedge (D+ at the piston, D- at the shock) the forward segment
// from a's boundary point is used instead.
struct CharDiagnostics {
    double t = 0.0;
    double dt = 0.0;
    std::vector<double> dpc, dmc;
};

CharDiagnostics char_derivatives(const TimeLevel& a, const TimeLevel& b, Gamma gamma);

struct DecompositionResidual {
    double t;
    double plus_minus;  // residual of D+D-c = (g+1)/(g-1) (1/2c)(D+c + D-c) D-c
    double minus_plus;  // residual of the mirrored equation
};

// Scale-normalized residuals (times t / max(|D+c|, |D-c|, eps)) of the
// second-order characteristic relations, one pair per stored snapshot.
std::vector<DecompositionResidual> decomposition_residual(const SolutionTrace& trace,
                                                          Gamma gamma);

struct LevelResidual {
    double t;
    double value;
};

// |D+c + k_g D-c| / max(|D-c|, eps) at the shock node.
std::vector<LevelResidual> shock_reflection_residual(const SolutionTrace& trace, Gamma gamma);

// |D+c - D-c - (1-gamma) w''(t)| at the piston node, scale-normalized.
std::vector<LevelResidual> piston_reflection_residual(const SolutionTrace& trace,
                                                      const PistonSpec& spec, Gamma gamma);

struct HypothesisRow {
    double t = 0.0;
    double h1 = 0.0, bound1 = 0.0;  // max_x |rho - rho_S|
    double h2 = 0.0, bound2 = 0.0;  // max_x |s' - u|
    double h3 = 0.0, bound3 = 0.0;  // max(|t D+c|, |t D-c|)
    bool ok1 = false, ok2 = false, ok3 = false;
    bool tilde_ok1 = false, tilde_ok2 = false, tilde_ok3 = false;
};

struct HypothesisReport {
    std::vector<HypothesisRow> rows;
    double delta1 = 0.0, delta2 = 0.0;
    double nu_hat_used = 0.0;       // margin parameter used for the sharper bounds
    double nu_hat_candidate = 0.0;  // empirical margin estimated from the trace
    bool all_pass = false;          // all three plain bounds on every row
    bool all_tilde_pass = false;
    double worst_margin1 = 0.0, worst_margin2 = 0.0, worst_margin3 = 0.0;  // min(1 - h/bound)
};

// Evaluates the continuation bounds on every stored snapshot. w'(t) is read
// off the piston node. nu_hat <= 0 requests the empirical candidate
// 2 (1 - h3/bound3) rho_inf^{-(gamma-1)/(2gamma)} (reported, not asserted).
HypothesisReport hypothesis_monitor(const SolutionTrace& trace, double delta1, double delta2,
                                    Gamma gamma, double rho_inf, double nu_hat = 0.0);

// Forward characteristic path integrated through the stored levels.
struct CharPathPoint {
    double t, x, r_plus, r_minus;
};

struct CharPath {
    std::vector<CharPathPoint> points;
    bool exited = false;
    char boundary = 'H';  // 'S' shock, 'P' piston, 'H' horizon of the trace
    double t_exit = 0.0;
};

// family = +1 traces dx/dt = lambda+, family = -1 traces lambda-.
CharPath trace_characteristic(const SolutionTrace& trace, int family, double x0, double t0,
                              Gamma gamma);

struct NarrowSample {
    double t_p = 0.0, x_p = 0.0;
    double dt_plus = -1.0, dt_minus = -1.0;  // exit-time offsets; -1 when inconclusive
    double bound = 0.0;
    bool ok_plus = false, ok_minus = false;
    bool inconclusive_plus = false, inconclusive_minus = false;
};

struct WidthRow {
    double t, width, bound;
    bool ok;
};

struct NarrowReport {
    std::vector<NarrowSample> samples;
    std::vector<WidthRow> widths;
    double coeff_time = 0.0;   // (delta1 + w_*^{-1/g} w*^{(g-1)/g}) / (sqrt(g) w_*^{(g-1)/g} - sigma)
    double coeff_width = 0.0;  // delta1 + w_*^{-1/g} w*^{(g-1)/g}
    bool all_samples_ok = false;   // over conclusive samples
    bool all_widths_ok = false;
    int inconclusive = 0;
};

// Forward-traces both characteristics from random interior points and checks
// the exit-time bound; also checks the domain-width bound on every recorded
// shock-history row.
NarrowReport narrow_check(const SolutionTrace& trace, const PistonSpec& spec, Gamma gamma,
                          double rho_inf, double delta1, double sigma, int sample_points,
                          std::uint64_t seed);

// Trapezoid mass of the wedge at one level.
double wedge_mass(const TimeLevel& level);

}  // namespace piston
