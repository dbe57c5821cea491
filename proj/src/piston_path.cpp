#include "piston/piston_path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace piston {

PistonSpec PistonSpec::constant(double w0) {
    if (!(w0 > 0.0)) throw std::domain_error("piston: constant speed must be positive");
    return PistonSpec(Variant{Constant{w0}});
}

PistonSpec PistonSpec::log_periodic(double w_a, double w_b, double omega) {
    if (!(w_b >= 0.0)) throw std::domain_error("piston: log_periodic amplitude must be >= 0");
    if (!(w_a - w_b > 0.0))
        throw std::domain_error("piston: log_periodic speed not positive (need w_a > w_b)");
    if (!(omega > 0.0)) throw std::domain_error("piston: log_periodic omega must be positive");
    return PistonSpec(Variant{LogPeriodic{w_a, w_b, omega}});
}

PistonSpec PistonSpec::decaying(double w_a, double w_b) {
    if (!(w_a > 0.0 && w_a + w_b > 0.0))
        throw std::domain_error("piston: decaying speed not positive");
    return PistonSpec(Variant{Decaying{w_a, w_b}});
}

PistonSpec PistonSpec::tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw std::domain_error("piston: tabulated needs >= 2 knots");
    if (knots.front().first != 0.0)
        throw std::domain_error("piston: tabulated knots must start at t = 0");
    std::vector<double> t, v;
    for (auto& [tk, vk] : knots) {
        if (!(vk > 0.0)) throw std::domain_error("piston: tabulated speeds must be positive");
        t.push_back(tk);
        v.push_back(vk);
    }
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i] < t[i + 1]))
            throw std::domain_error("piston: tabulated knot times must be increasing");
    PistonSpec spec(Variant{Tabulated{std::move(knots)}});
    spec.table_ = Pchip(t, v);
    spec.table_t_end_ = t.back();
    spec.table_w_end_ = spec.table_.integral(t.back());
    return spec;
}

PistonEval PistonSpec::evaluate(double t) const {
    if (t < 0.0) throw std::domain_error("piston: t must be >= 0");
    PistonEval e;
    if (auto* c = std::get_if<Constant>(&variant_)) {
        e.w = c->w0 * t;
        e.w_prime = c->w0;
        e.w_second = 0.0;
    } else if (auto* lp = std::get_if<LogPeriodic>(&variant_)) {
        const double L = std::log1p(t);
        const double ph = lp->omega * L;
        const double s = std::sin(ph), c = std::cos(ph);
        // Antiderivative of cos(omega ln(1+t)):
        //   ((1+t)(cos + omega sin) - 1) / (1 + omega^2).
        e.w = lp->w_a * t +
              lp->w_b * ((1.0 + t) * (c + lp->omega * s) - 1.0) / (1.0 + lp->omega * lp->omega);
        e.w_prime = lp->w_a + lp->w_b * c;
        e.w_second = -lp->w_b * lp->omega * s / (1.0 + t);
    } else if (auto* d = std::get_if<Decaying>(&variant_)) {
        e.w = d->w_a * t + d->w_b * std::log1p(t);
        e.w_prime = d->w_a + d->w_b / (1.0 + t);
        e.w_second = -d->w_b / ((1.0 + t) * (1.0 + t));
    } else {
        if (t <= table_t_end_) {
            e.w = table_.integral(t);
            e.w_prime = table_(t);
            e.w_second = table_.derivative(t);
        } else {
            const double v = table_(table_t_end_);
            e.w = table_w_end_ + v * (t - table_t_end_);
            e.w_prime = v;
            e.w_second = 0.0;
        }
    }
    return e;
}

double PistonSpec::analytic_inf_speed() const {
    if (auto* c = std::get_if<Constant>(&variant_)) return c->w0;
    if (auto* lp = std::get_if<LogPeriodic>(&variant_)) return lp->w_a - std::abs(lp->w_b);
    if (auto* d = std::get_if<Decaying>(&variant_)) return std::min(d->w_a, d->w_a + d->w_b);
    throw std::logic_error("analytic_inf_speed: tabulated variant has no closed form");
}

double PistonSpec::analytic_sup_speed() const {
    if (auto* c = std::get_if<Constant>(&variant_)) return c->w0;
    if (auto* lp = std::get_if<LogPeriodic>(&variant_)) return lp->w_a + std::abs(lp->w_b);
    if (auto* d = std::get_if<Decaying>(&variant_)) return std::max(d->w_a, d->w_a + d->w_b);
    throw std::logic_error("analytic_sup_speed: tabulated variant has no closed form");
}

double PistonSpec::analytic_a3_sup() const {
    if (std::get_if<Constant>(&variant_)) return 0.0;
    // |(1+t) w''| = w_b omega |sin(omega ln(1+t))| resp. |w_b|/(1+t).
    if (auto* lp = std::get_if<LogPeriodic>(&variant_)) return std::abs(lp->w_b) * lp->omega;
    if (auto* d = std::get_if<Decaying>(&variant_)) return std::abs(d->w_b);
    throw std::logic_error("analytic_a3_sup: tabulated variant has no closed form");
}

std::string PistonSpec::describe() const {
    char buf[160];
    if (auto* c = std::get_if<Constant>(&variant_)) {
        std::snprintf(buf, sizeof buf, "constant(w0=%g)", c->w0);
    } else if (auto* lp = std::get_if<LogPeriodic>(&variant_)) {
        std::snprintf(buf, sizeof buf, "log_periodic(w_a=%g, w_b=%g, omega=%g)", lp->w_a,
                      lp->w_b, lp->omega);
    } else if (auto* d = std::get_if<Decaying>(&variant_)) {
        std::snprintf(buf, sizeof buf, "decaying(w_a=%g, w_b=%g)", d->w_a, d->w_b);
    } else {
        auto& kn = std::get<Tabulated>(variant_).knots;
        std::snprintf(buf, sizeof buf, "tabulated(%zu knots, t_end=%g)", kn.size(),
                      kn.back().first);
    }
    return buf;
}

AssumptionReport validate(const PistonSpec& spec, double rho_inf, Gamma gamma, double kappa,
                          double varrho, double horizon, int samples) {
    if (!(horizon > 0.0)) throw std::domain_error("validate: horizon must be positive");
    if (samples < 2) throw std::domain_error("validate: need samples >= 2");

    AssumptionReport rep;
    char buf[200];
    if (!spec.is_tabulated()) {
        rep.w_star = spec.analytic_inf_speed();
        rep.w_upper = spec.analytic_sup_speed();
        rep.a3_sup = spec.analytic_a3_sup();
        std::snprintf(buf, sizeof buf, "analytic bounds over t in [0, inf); %s",
                      spec.describe().c_str());
        rep.details = buf;
    } else {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double a3 = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double t = horizon * static_cast<double>(i) / (samples - 1);
            const PistonEval e = spec.evaluate(t);
            lo = std::min(lo, e.w_prime);
            hi = std::max(hi, e.w_prime);
            a3 = std::max(a3, std::abs((1.0 + t) * e.w_second));
        }
        rep.w_star = lo;
        rep.w_upper = hi;
        rep.a3_sup = a3;
        std::snprintf(buf, sizeof buf, "sampled bounds: %d points on [0, %g]; %s", samples,
                      horizon, spec.describe().c_str());
        rep.details = buf;
    }

    rep.a1_ok = rep.w_star > 0.0;
    rep.ratio = rep.w_upper / rep.w_star;
    rep.ratio_ok = rep.ratio < 3.0;
    const double budget =
        kappa * std::pow(rho_inf, (gamma.value() - 1.0) / gamma.value() + varrho);
    rep.a3_ok = rep.a3_sup < budget;
    return rep;
}

}  // namespace piston
