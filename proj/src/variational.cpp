#include "qwr/variational.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qwr/rng.hpp"

namespace qwr {

namespace {

void require_in_bounds(const TrialFamily& family, const std::vector<double>& theta) {
    if (theta.size() != family.parameter_count())
        throw std::domain_error("theta has wrong number of parameters");
    for (std::size_t i = 0; i < theta.size(); ++i)
        if (theta[i] < family.bounds[i].first || theta[i] > family.bounds[i].second)
            throw std::domain_error("theta outside box bounds");
}

std::vector<double> clamp_to_box(const TrialFamily& family, std::vector<double> theta) {
    for (std::size_t i = 0; i < theta.size(); ++i)
        theta[i] = std::clamp(theta[i], family.bounds[i].first, family.bounds[i].second);
    return theta;
}

}  // namespace

double upper_bound_objective(const TrialFamily& family,
                             const std::vector<double>& theta, double beta) {
    require_in_bounds(family, theta);
    TrialPair pair(family.true_protocol, family.make_trial(theta));
    VAverages v = v_averages(pair, beta);
    return trial_delta_f(pair, beta) - v.vT + v.v0;
}

OptimizationTrace minimize(const TrialFamily& family, double beta,
                           const OptimizationOptions& options) {
    const std::size_t n = family.parameter_count();
    if (n == 0) throw std::invalid_argument("family has no parameters");

    OptimizationTrace trace;
    trace.best_value = std::numeric_limits<double>::infinity();

    auto evaluate = [&](const std::vector<double>& theta) {
        double value = upper_bound_objective(family, theta, beta);
        ++trace.evaluations;
        trace.iterates.emplace_back(theta, value);
        if (value < trace.best_value) {
            trace.best_value = value;
            trace.best_theta = theta;
        }
        return value;
    };

    std::mt19937_64 rng(derive_seed(options.seed, 3, /*purpose=*/0x6f7074));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    struct Vertex {
        std::vector<double> theta;
        double value;
    };

    for (int restart = 0; restart < options.restarts; ++restart) {
        // a restart needs n + 1 evaluations just to seed the simplex
        if (trace.evaluations + n + 1 > options.max_evals) break;

        // initial simplex: box-random base point plus per-axis offsets
        std::vector<Vertex> simplex;
        std::vector<double> base(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto [lo, hi] = family.bounds[i];
            base[i] = lo + (hi - lo) * unit(rng);
        }
        simplex.push_back({base, evaluate(base)});
        for (std::size_t i = 0; i < n; ++i) {
            auto [lo, hi] = family.bounds[i];
            std::vector<double> v = base;
            v[i] = std::clamp(v[i] + 0.1 * (hi - lo), lo, hi);
            if (v[i] == base[i]) v[i] = std::clamp(base[i] - 0.1 * (hi - lo), lo, hi);
            simplex.push_back({v, evaluate(v)});
        }

        while (trace.evaluations < options.max_evals) {
            std::sort(simplex.begin(), simplex.end(),
                      [](const Vertex& a, const Vertex& b) { return a.value < b.value; });

            double diameter = 0.0;
            for (std::size_t k = 1; k < simplex.size(); ++k)
                for (std::size_t i = 0; i < n; ++i)
                    diameter = std::max(diameter, std::abs(simplex[k].theta[i] -
                                                           simplex[0].theta[i]));
            double value_spread = simplex.back().value - simplex.front().value;
            if (diameter < options.tolerance &&
                std::abs(value_spread) < options.tolerance) {
                trace.converged = true;
                break;
            }

            std::vector<double> centroid(n, 0.0);
            for (std::size_t k = 0; k + 1 < simplex.size(); ++k)
                for (std::size_t i = 0; i < n; ++i)
                    centroid[i] += simplex[k].theta[i] / static_cast<double>(n);
            const Vertex& worst = simplex.back();

            auto along = [&](double coeff) {
                std::vector<double> theta(n);
                for (std::size_t i = 0; i < n; ++i)
                    theta[i] = centroid[i] + coeff * (centroid[i] - worst.theta[i]);
                return clamp_to_box(family, std::move(theta));
            };

            std::vector<double> reflected = along(1.0);
            double fr = evaluate(reflected);
            if (trace.evaluations >= options.max_evals) break;
            if (fr < simplex.front().value) {
                std::vector<double> expanded = along(2.0);
                double fe = evaluate(expanded);
                simplex.back() = (fe < fr) ? Vertex{expanded, fe} : Vertex{reflected, fr};
            } else if (fr < simplex[simplex.size() - 2].value) {
                simplex.back() = {reflected, fr};
            } else {
                std::vector<double> contracted = along(-0.5);
                double fc = evaluate(contracted);
                if (fc < worst.value) {
                    simplex.back() = {contracted, fc};
                } else {
                    // shrink toward the best vertex
                    for (std::size_t k = 1; k < simplex.size(); ++k) {
                        if (trace.evaluations >= options.max_evals) break;
                        for (std::size_t i = 0; i < n; ++i)
                            simplex[k].theta[i] = simplex[0].theta[i] +
                                                  0.5 * (simplex[k].theta[i] -
                                                         simplex[0].theta[i]);
                        simplex[k].value = evaluate(simplex[k].theta);
                        if (trace.evaluations >= options.max_evals) break;
                    }
                }
            }
        }
    }
    return trace;
}

TrialFamily default_family(const DrivingProtocol& true_protocol, std::uint64_t seed,
                           double box_half_width) {
    DrivingProtocol even_dir = random_protocol(
        true_protocol.dim(), derive_seed(seed, 4, 0x657664),
        ProtocolConfig{static_cast<int>(true_protocol.node_count()), 1.0, 0.0,
                       true_protocol.duration()});
    DrivingProtocol odd_dir = random_protocol(
        true_protocol.dim(), derive_seed(seed, 5, 0x6f6464),
        ProtocolConfig{static_cast<int>(true_protocol.node_count()), 0.0, 1.0,
                       true_protocol.duration()});

    TrialFamily family{
        true_protocol,
        [true_protocol, even_dir, odd_dir](const std::vector<double>& theta) {
            std::vector<ComplexMatrix> even = true_protocol.even_nodes();
            std::vector<ComplexMatrix> odd = true_protocol.odd_nodes();
            const Eigen::Index d = true_protocol.dim();
            for (std::size_t k = 0; k < even.size(); ++k) {
                even[k] += theta[0] * even_dir.even_nodes()[k] +
                           theta[2] * ComplexMatrix::Identity(d, d);
                odd[k] += theta[1] * odd_dir.odd_nodes()[k];
            }
            return DrivingProtocol(true_protocol.node_times(), std::move(even),
                                   std::move(odd));
        },
        {{-box_half_width, box_half_width},
         {-box_half_width, box_half_width},
         {-box_half_width, box_half_width}}};
    return family;
}

}  // namespace qwr
