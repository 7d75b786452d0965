#pragma once

// Exception types shared by all szego modules.

#include <stdexcept>
#include <string>

namespace szego {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative scheme failed to reach its tolerance; carries the last residual.
struct convergence_error : error {
    convergence_error(const std::string& what, double residual_, int iterations_)
        : error(what + " (residual " + std::to_string(residual_) + " after "
                + std::to_string(iterations_) + " iterations)"),
          residual(residual_), iterations(iterations_) {}
    double residual;
    int iterations;
};

// Input outside the mathematical domain of the operation.
struct domain_error : error {
    using error::error;
};

// Evaluation at a pole, logarithmic branch point, or other singular configuration.
struct singularity_error : error {
    using error::error;
};

// Evaluation on a branch cut; the message names the cut.
struct cut_error : error {
    using error::error;
};

// Root bracketing or series summation failed.
struct numeric_error : error {
    using error::error;
};

// Coupled solver produced coincident points.
struct collision_error : error {
    using error::error;
};

// Trajectory ran into a critical point of the quadratic differential.
struct critical_trajectory_error : error {
    using error::error;
};

} // namespace szego
