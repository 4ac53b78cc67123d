#pragma once

#include <functional>

#include "qwr/trial_bounds.hpp"

namespace qwr {

/// Parameterized family of trial protocols against a fixed true protocol.
/// Every theta inside the box bounds must yield a valid protocol of the same
/// dimension and duration.
struct TrialFamily {
    DrivingProtocol true_protocol;
    std::function<DrivingProtocol(const std::vector<double>&)> make_trial;
    std::vector<std::pair<double, double>> bounds;  // per-parameter [lo, hi]

    std::size_t parameter_count() const { return bounds.size(); }
};

/// Certified upper bound on the true free-energy difference:
/// dF'(theta) - <V(T)> + <V(0)>. Never below the exact dF.
double upper_bound_objective(const TrialFamily& family,
                             const std::vector<double>& theta, double beta);

struct OptimizationOptions {
    std::size_t max_evals = 2000;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    int restarts = 3;
};

struct OptimizationTrace {
    std::vector<std::pair<std::vector<double>, double>> iterates;
    std::vector<double> best_theta;
    double best_value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex (Nelder-Mead) descent with deterministic seeded
/// restarts and box clamping. best_value is monotone non-increasing along
/// the trace; exhausting max_evals returns converged = false.
OptimizationTrace minimize(const TrialFamily& family, double beta,
                           const OptimizationOptions& options);

/// Default 3k-style family: theta scales a Theta-even direction, a Theta-odd
/// direction, and an endpoint scalar shift added to the true protocol;
/// theta = 0 reproduces the true protocol.
TrialFamily default_family(const DrivingProtocol& true_protocol, std::uint64_t seed,
                           double box_half_width = 2.0);

}  // namespace qwr
