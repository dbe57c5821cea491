#pragma once

#include <stdexcept>
#include <string>

namespace piston {

// Entropy-inadmissible shock data (k <= 1, tau <= 1).
struct entropy_error : std::domain_error {
    explicit entropy_error(const std::string& msg) : std::domain_error(msg) {}
};

// Root solve failed to converge within the iteration cap.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Recoverable time-step failure (characteristic foot left the previous
// level); callers may retry with a smaller theta.
struct step_error : std::runtime_error {
    explicit step_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-recoverable state failure: vanishing or negative sound speed/volume.
struct vacuum_error : std::runtime_error {
    explicit vacuum_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace piston
