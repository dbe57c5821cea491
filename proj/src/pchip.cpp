#include "piston/pchip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace piston {

Pchip::Pchip(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::domain_error("Pchip: need >= 2 matching nodes");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i] < x_[i + 1])) throw std::domain_error("Pchip: x not strictly increasing");

    m_.assign(n, 0.0);
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    if (n == 2) {
        m_[0] = m_[1] = d[0];
    } else {
        // Interior: weighted harmonic mean where secants agree in sign.
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] == 0.0 || d[i] == 0.0 || (d[i - 1] > 0.0) != (d[i] > 0.0)) {
                m_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // One-sided three-point ends with the standard shape limiter.
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (m * d0 <= 0.0) return 0.0;
            if ((d0 > 0.0) != (d1 > 0.0) && std::abs(m) > 3.0 * std::abs(d0))
                return 3.0 * d0;
            return m;
        };
        m_[0] = end_slope(h[0], h[1], d[0], d[1]);
        m_[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    }

    cum_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        cum_[i + 1] = cum_[i] + 0.5 * h[i] * (y_[i] + y_[i + 1]) +
                      h[i] * h[i] * (m_[i] - m_[i + 1]) / 12.0;
}

std::size_t Pchip::interval(double x) const {
    // Tolerate boundary fuzz at rounding level.
    const double span = x_.back() - x_.front();
    const double slack = 1e-12 * span;
    if (x < x_.front() - slack || x > x_.back() + slack)
        throw std::domain_error("Pchip: evaluation outside data range");
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double Pchip::operator()(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return y_[i] * (2 * t3 - 3 * t2 + 1) + h * m_[i] * (t3 - 2 * t2 + t) +
           y_[i + 1] * (-2 * t3 + 3 * t2) + h * m_[i + 1] * (t3 - t2);
}

double Pchip::derivative(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return (y_[i] * (6 * t2 - 6 * t) + h * m_[i] * (3 * t2 - 4 * t + 1) +
            y_[i + 1] * (-6 * t2 + 6 * t) + h * m_[i + 1] * (3 * t2 - 2 * t)) / h;
}

double Pchip::integral(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
    const double part =
        y_[i] * (0.5 * t4 - t3 + t) + h * m_[i] * (0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2) +
        y_[i + 1] * (-0.5 * t4 + t3) + h * m_[i + 1] * (0.25 * t4 - t3 / 3.0);
    return cum_[i] + h * part;
}

}  // namespace piston
