#pragma once

// Piston trajectory families w(t) with w(0) = 0 and w'(t) > 0, plus
// validation of the solvability assumptions (positive bounded speed, speed
// ratio below 3, decaying acceleration).

#include <string>
#include <variant>
#include <vector>

#include "piston/gas.hpp"
#include "piston/pchip.hpp"

namespace piston {

struct PistonEval {
    double w = 0.0;        // position
    double w_prime = 0.0;  // speed
    double w_second = 0.0; // acceleration
};

class PistonSpec {
  public:
    struct Constant {
        double w0;
    };
    // w'(t) = w_a + w_b cos(omega ln(1+t))
    struct LogPeriodic {
        double w_a, w_b, omega;
    };
    // w'(t) = w_a + w_b/(1+t)
    struct Decaying {
        double w_a, w_b;
    };
    // w'(t) from monotone cubic interpolation of (t, w') knots; clamped to
    // the last knot value beyond the table.
    struct Tabulated {
        std::vector<std::pair<double, double>> knots;
    };

    static PistonSpec constant(double w0);
    static PistonSpec log_periodic(double w_a, double w_b, double omega);
    static PistonSpec decaying(double w_a, double w_b);
    static PistonSpec tabulated(std::vector<std::pair<double, double>> knots);

    PistonEval evaluate(double t) const;  // t >= 0

    bool is_constant() const { return std::holds_alternative<Constant>(variant_); }
    bool is_tabulated() const { return std::holds_alternative<Tabulated>(variant_); }
    std::string describe() const;

    // Closed-form bounds over all t >= 0 for the analytic variants; sampled
    // bounds for Tabulated (via validate).
    double analytic_inf_speed() const;
    double analytic_sup_speed() const;
    double analytic_a3_sup() const;  // sup |(1+t) w''|

  private:
    using Variant = std::variant<Constant, LogPeriodic, Decaying, Tabulated>;
    explicit PistonSpec(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
    Pchip table_;          // Tabulated only: interpolant of w'
    double table_w_end_ = 0.0;   // w at last knot
    double table_t_end_ = 0.0;
};

struct AssumptionReport {
    double w_star = 0.0;    // inf of w'
    double w_upper = 0.0;   // sup of w'
    double ratio = 0.0;     // w_upper / w_star
    bool a1_ok = false;     // 0 < w_star
    bool ratio_ok = false;  // ratio < 3
    double a3_sup = 0.0;    // sup |(1+t) w''|
    bool a3_ok = false;     // a3_sup < kappa rho_inf^((gamma-1)/gamma + varrho)
    std::string details;

    bool all_ok() const { return a1_ok && ratio_ok && a3_ok; }
};

// Checks the assumptions against the acceleration budget
// kappa * rho_inf^((gamma-1)/gamma + varrho). Analytic variants use exact
// bounds over all t >= 0; Tabulated is sampled on [0, horizon].
AssumptionReport validate(const PistonSpec& spec, double rho_inf, Gamma gamma,
                          double kappa, double varrho, double horizon = 100.0,
                          int samples = 2048);

}  // namespace piston
