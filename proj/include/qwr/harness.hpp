#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwr/trial_bounds.hpp"
#include "qwr/variational.hpp"

namespace qwr {

/// Which checker groups a verification run executes.
enum class Suite { identities, bounds, norms };

struct ExperimentConfig {
    int dim = 4;
    std::vector<double> betas = {1.0};
    double duration = 1.0;
    int slices = 16;
    std::uint64_t master_seed = 1;
    int trials = 10;
    int protocol_nodes = 4;  // smoothness of the piecewise-linear path
    double even_scale = 1.0;
    double odd_scale = 0.5;
    std::vector<double> epsilons = {0.5};
    TrialMode trial_mode = TrialMode::perturbation;
    std::vector<Suite> suites = {Suite::identities, Suite::bounds, Suite::norms};
    int workers = 1;

    ProtocolConfig protocol_config() const {
        return ProtocolConfig{protocol_nodes, even_scale, odd_scale, duration};
    }

    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
    void validate() const;
};

struct CheckAggregate {
    long count = 0;
    long passed = 0;
    double max_residual = 0.0;  // worst |residual| seen (identity checks)
    double min_slack = std::numeric_limits<double>::infinity();
};

struct SuiteReport {
    nlohmann::json config_echo;
    std::map<std::string, CheckAggregate> checks;
    std::vector<nlohmann::json> failures;
    double wall_seconds = 0.0;

    bool all_passed() const;
    /// Deterministic modulo the timing field, which include_timing can drop.
    nlohmann::json to_json(bool include_timing = true) const;
};

/// Runs every selected checker over the seeded trial ensemble. Deterministic
/// for a fixed config; trial seeds are derived per index, so removing one
/// trial leaves the others unchanged.
SuiteReport run_suite(const ExperimentConfig& config);

struct SweepAxis {
    std::string name;  // "epsilon" | "beta" | "slices"
    std::vector<double> grid;
};

/// One CSV row per (trial, axis value, bound). Header:
/// trial_id,seed,d,beta,epsilon,bound_name,lhs,rhs,slack,satisfied
std::string sweep_csv(const ExperimentConfig& config, const SweepAxis& axis);

/// Per-trial protocol used throughout the harness.
DrivingProtocol trial_protocol(const ExperimentConfig& config, int trial_index);
std::uint64_t trial_seed(const ExperimentConfig& config, int trial_index);

std::string work_distribution_csv(const WorkDistribution& dist);

std::string optimization_trace_csv(const OptimizationTrace& trace);
nlohmann::json optimization_summary(const OptimizationTrace& trace);

}  // namespace qwr
