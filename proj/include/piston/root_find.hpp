#pragma once

// Bracketed scalar root solving: geometric bracket growth, bisection down to
// a coarse width, then Newton polish safeguarded by the bracket.

#include <cmath>
#include <functional>

#include "piston/errors.hpp"

namespace piston {

struct RootOptions {
    double rel_tol = 1e-12;       // relative tolerance on the residual
    int max_iter = 200;
    double bisect_width = 1e-3;   // relative bracket width handed to Newton
};

// Finds x in [lo, hi] with f(x) = 0, given f(lo) and f(hi) of opposite sign.
// fscale > 0 is the magnitude against which the residual is judged.
inline double solve_bracketed(const std::function<double(double)>& f,
                              const std::function<double(double)>& fprime,
                              double lo, double hi, double flo, double fhi,
                              double fscale, const RootOptions& opt = {}) {
    if (!(flo <= 0.0 && fhi >= 0.0) && !(flo >= 0.0 && fhi <= 0.0))
        throw convergence_error("solve_bracketed: endpoints do not bracket a root");
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    const bool increasing = flo < 0.0;
    int iter = 0;

    // Bisect until the bracket is relatively narrow.
    while (hi - lo > opt.bisect_width * std::abs(hi) && iter < opt.max_iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        ++iter;
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == increasing)
            lo = mid;
        else
            hi = mid;
    }

    // Newton from the bracket midpoint; fall back to bisection when a step
    // leaves the bracket.
    double x = 0.5 * (lo + hi);
    double fx = f(x);
    while (iter < opt.max_iter) {
        if (std::abs(fx) <= opt.rel_tol * fscale) return x;
        const double d = fprime(x);
        double xn = (d != 0.0) ? x - fx / d : lo - 1.0;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        const double fn = f(xn);
        ++iter;
        if ((fn < 0.0) == increasing)
            lo = xn;
        else
            hi = xn;
        x = xn;
        fx = fn;
        if (hi - lo <= 4.0 * std::abs(x) * 1e-16 && std::abs(fx) <= 1e-9 * fscale)
            return x;  // bracket exhausted at rounding level
    }
    if (std::abs(fx) <= 1e-9 * fscale) return x;
    throw convergence_error("solve_bracketed: no convergence within iteration cap");
}

}  // namespace piston
