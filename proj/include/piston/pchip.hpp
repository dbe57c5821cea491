#pragma once

// Monotone cubic Hermite interpolation (Fritsch-Carlson slopes). Shape
// preserving: no overshoot beyond local data ranges, C^1 interpolant.

#include <cstddef>
#include <span>
#include <vector>

namespace piston {

class Pchip {
  public:
    Pchip() = default;
    // x strictly increasing, same length as y, length >= 2.
    Pchip(std::span<const double> x, std::span<const double> y);

    double operator()(double x) const;   // throws std::domain_error outside [x0, xN]
    double derivative(double x) const;
    // Integral of the interpolant from x.front() to x.
    double integral(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    std::size_t interval(double x) const;
    std::vector<double> x_, y_, m_;      // nodes, values, node slopes
    std::vector<double> cum_;            // cumulative integral at nodes
};

}  // namespace piston
