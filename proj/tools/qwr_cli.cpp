// Batch CLI for the quantum work relation verification harness.
//
// Subcommands: verify, sweep, sample-work, variational.
// Exit codes: 0 all checks passed, 1 violations found, 2 config or I/O error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qwr/harness.hpp"
#include "qwr/rng.hpp"

namespace {

qwr::ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return qwr::ExperimentConfig::from_json(j);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

std::vector<double> linspace(double from, double to, int steps) {
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    std::vector<double> grid;
    for (int i = 0; i < steps; ++i)
        grid.push_back(steps == 1 ? from : from + (to - from) * i / (steps - 1));
    return grid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum work relation verification harness"};
    app.require_subcommand(1);

    std::string config_path, out_path, axis_name = "epsilon";
    int trials_override = -1;
    long long seed_override = -1;
    std::string suite_override;
    double axis_from = 0.0, axis_to = 1.0;
    int axis_steps = 21;
    std::size_t samples = 0;
    std::size_t max_evals = 2000;

    auto* verify = app.add_subcommand("verify", "run identity/inequality suites");
    verify->add_option("--config", config_path, "config JSON")->required();
    verify->add_option("--trials", trials_override, "override trial count");
    verify->add_option("--seed", seed_override, "override master seed");
    verify->add_option("--suite", suite_override, "all|identities|bounds|norms");
    verify->add_option("--out", out_path, "report JSON path")->required();

    auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    sweep->add_option("--config", config_path, "config JSON")->required();
    sweep->add_option("--axis", axis_name, "epsilon|beta|slices");
    sweep->add_option("--from", axis_from, "axis start");
    sweep->add_option("--to", axis_to, "axis end");
    sweep->add_option("--steps", axis_steps, "grid size");
    sweep->add_option("--csv", out_path, "output CSV path")->required();

    auto* sample = app.add_subcommand("sample-work", "two-point-measurement sampling");
    sample->add_option("--config", config_path, "config JSON")->required();
    sample->add_option("--samples", samples,
                       "Monte Carlo draws (0 = enumerated distribution)");
    sample->add_option("--out", out_path, "output CSV path")->required();

    auto* variational = app.add_subcommand("variational", "minimize the dF upper bound");
    variational->add_option("--config", config_path, "config JSON")->required();
    variational->add_option("--max-evals", max_evals, "objective evaluation budget");
    variational->add_option("--out", out_path, "trace CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        qwr::ExperimentConfig config = load_config(config_path);
        if (trials_override > 0) config.trials = trials_override;
        if (seed_override >= 0)
            config.master_seed = static_cast<std::uint64_t>(seed_override);
        if (!suite_override.empty()) {
            nlohmann::json patch = config.to_json();
            patch["suites"] = {suite_override};
            config = qwr::ExperimentConfig::from_json(patch);
        }
        config.validate();

        if (*verify) {
            qwr::SuiteReport report = qwr::run_suite(config);
            write_file(out_path, report.to_json().dump(2) + "\n");
            for (const auto& [name, agg] : report.checks)
                std::cout << name << ": " << agg.passed << "/" << agg.count
                          << " passed\n";
            return report.all_passed() ? 0 : 1;
        }
        if (*sweep) {
            qwr::SweepAxis axis{axis_name, linspace(axis_from, axis_to, axis_steps)};
            write_file(out_path, qwr::sweep_csv(config, axis));
            return 0;
        }
        if (*sample) {
            qwr::DrivingProtocol p = qwr::trial_protocol(config, 0);
            double beta = config.betas.front();
            qwr::WorkDistribution dist =
                samples == 0
                    ? qwr::tpm_work_distribution(p, beta, config.slices)
                    : qwr::tpm_work_distribution_sampled(
                          p, beta, config.slices, samples,
                          qwr::derive_seed(config.master_seed, 0, 0x736d70));
            write_file(out_path, qwr::work_distribution_csv(dist));
            std::cout << "exponential work average: "
                      << dist.exponential_work_average() << "\n";
            return 0;
        }
        if (*variational) {
            qwr::DrivingProtocol p = qwr::trial_protocol(config, 0);
            qwr::TrialFamily family = qwr::default_family(p, config.master_seed);
            qwr::OptimizationOptions options;
            options.max_evals = max_evals;
            options.seed = config.master_seed;
            qwr::OptimizationTrace trace =
                qwr::minimize(family, config.betas.front(), options);
            write_file(out_path, qwr::optimization_trace_csv(trace));
            std::cout << qwr::optimization_summary(trace).dump(2) << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
