#include "qwr/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "qwr/rng.hpp"

namespace qwr {

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kJarzynskiTol = 1e-10;

std::string suite_name(Suite s) {
    switch (s) {
        case Suite::identities: return "identities";
        case Suite::bounds: return "bounds";
        case Suite::norms: return "norms";
    }
    throw std::logic_error("unknown suite");
}

Suite suite_from_name(const std::string& name) {
    if (name == "identities") return Suite::identities;
    if (name == "bounds") return Suite::bounds;
    if (name == "norms") return Suite::norms;
    throw std::invalid_argument("suites: unknown suite '" + name + "'");
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// One checker outcome; residual-style checks track |residual|, bound-style
// checks track slack.
struct CheckEntry {
    std::string name;
    bool passed;
    bool is_residual;
    double value;
    nlohmann::json context;
};

struct TrialResult {
    std::vector<CheckEntry> entries;
};

void add_residual(TrialResult& out, const std::string& name, double residual,
                  double tol, nlohmann::json context, bool informational = false) {
    context["residual"] = residual;
    context["tol"] = tol;
    out.entries.push_back({name, informational || residual <= tol, true, residual,
                           std::move(context)});
}

void add_report(TrialResult& out, const BoundReport& r, nlohmann::json context) {
    nlohmann::json j = r.to_json();
    j["trial_context"] = std::move(context);
    out.entries.push_back({r.name, r.satisfied, false, r.slack, std::move(j)});
}

double sinusoidal_lambda(double t, double duration) {
    return 0.3 * std::sin(M_PI * t / duration);
}

FunctionalSpec sinusoidal_spec(const DrivingProtocol& p, int parity,
                               std::uint64_t seed) {
    double duration = p.duration();
    return FunctionalSpec{
        [duration](double t) { return sinusoidal_lambda(t, duration); },
        random_observable(p.dim(), parity, seed)};
}

TrialResult run_trial(const ExperimentConfig& cfg, int trial_index) {
    TrialResult out;
    std::uint64_t seed = trial_seed(cfg, trial_index);
    DrivingProtocol p = trial_protocol(cfg, trial_index);
    nlohmann::json base{{"trial", trial_index}, {"seed", seed}, {"dim", cfg.dim}};

    auto has = [&](Suite s) {
        return std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end();
    };

    for (double beta : cfg.betas) {
        nlohmann::json ctx = base;
        ctx["beta"] = beta;

        if (has(Suite::identities)) {
            add_residual(out, "microreversibility",
                         microreversibility_residual(p, cfg.slices), kIdentityTol, ctx);
            add_residual(out, "microreversibility_printed_variant",
                         microreversibility_residual_printed_variant(p, cfg.slices),
                         0.0, ctx, /*informational=*/true);
            for (int parity : {+1, -1}) {
                Observable a = random_observable(cfg.dim, parity,
                                                 derive_seed(seed, 6, parity + 2));
                std::string tag = parity == 1 ? "even" : "odd";
                add_residual(out, "parity_" + tag, parity_residual(p, a, cfg.slices),
                             kIdentityTol, ctx);
                FunctionalSpec spec{[&p](double t) {
                                        return sinusoidal_lambda(t, p.duration());
                                    },
                                    a};
                add_residual(out, "universal_relation_" + tag,
                             universal_relation_residual(p, spec, beta, cfg.slices),
                             kIdentityTol, ctx);
            }
            JarzynskiResult jz = jarzynski_exact(p, beta, cfg.slices);
            add_residual(out, "jarzynski_identity",
                         std::abs(jz.work_average - jz.free_energy_side) /
                             jz.free_energy_side,
                         kJarzynskiTol, ctx);
            WorkDistribution tpm = tpm_work_distribution(p, beta, cfg.slices);
            add_residual(out, "tpm_enumerated",
                         std::abs(tpm.exponential_work_average() - jz.work_average) /
                             std::max(1.0, std::abs(jz.work_average)),
                         kJarzynskiTol, ctx);
        }

        if (!has(Suite::bounds) && !has(Suite::norms)) continue;

        for (double epsilon : cfg.epsilons) {
            TrialPair pair = make_trial_pair(p, epsilon, seed, cfg.trial_mode);
            nlohmann::json ectx = ctx;
            ectx["epsilon"] = epsilon;
            const double T = p.duration();

            if (has(Suite::bounds)) {
                HermitianOperator h0 = hamiltonian_at(pair.true_protocol, 0.0, +1);
                HermitianOperator h0t = hamiltonian_at(pair.trial_protocol, 0.0, +1);
                HermitianOperator hT = hamiltonian_at(pair.true_protocol, T, -1);
                HermitianOperator hTt = hamiltonian_at(pair.trial_protocol, T, -1);
                add_report(out, gbf_lower_bound(h0, h0t, beta), ectx);
                add_report(out, gbf_upper_bound(hT, hTt, beta), ectx);
                add_report(out, ratio_bound(h0, h0t, hT, hTt, beta), ectx);

                add_report(out,
                           universal_inequality_report(
                               pair, sinusoidal_spec(p, +1, derive_seed(seed, 6, 3)),
                               beta, cfg.slices),
                           ectx);
                add_report(out, jarzynski_inequality_report(pair, beta), ectx);
                BoundReport bog = bogoliubov_report(pair, beta);
                add_report(out, bog, ectx);
                double matched = std::max(std::abs(bog.context.at("matched_v0")),
                                          std::abs(bog.context.at("matched_vT")));
                add_residual(out, "bogoliubov_matched_averages", matched, 1e-10, ectx);
            }
            if (has(Suite::norms)) {
                NormBoundReports nb = norm_bound_report(pair, beta);
                add_report(out, nb.zT, ectx);
                add_report(out, nb.z0, ectx);
                add_report(out, nb.ratio, ectx);
            }
        }
    }
    return out;
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json suites_j = nlohmann::json::array();
    for (Suite s : suites) suites_j.push_back(suite_name(s));
    return {{"dim", dim},
            {"betas", betas},
            {"duration", duration},
            {"slices", slices},
            {"master_seed", master_seed},
            {"trials", trials},
            {"protocol",
             {{"nodes", protocol_nodes},
              {"even_scale", even_scale},
              {"odd_scale", odd_scale}}},
            {"epsilons", epsilons},
            {"trial_mode",
             trial_mode == TrialMode::perturbation ? "perturbation" : "independent_odd"},
            {"suites", suites_j}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        if (j.contains("dim")) c.dim = j.at("dim").get<int>();
        if (j.contains("beta")) c.betas = {j.at("beta").get<double>()};
        if (j.contains("betas")) c.betas = j.at("betas").get<std::vector<double>>();
        if (j.contains("duration")) c.duration = j.at("duration").get<double>();
        if (j.contains("slices")) c.slices = j.at("slices").get<int>();
        if (j.contains("master_seed"))
            c.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("trials")) c.trials = j.at("trials").get<int>();
        if (j.contains("protocol")) {
            const auto& pj = j.at("protocol");
            if (pj.contains("nodes")) c.protocol_nodes = pj.at("nodes").get<int>();
            if (pj.contains("even_scale"))
                c.even_scale = pj.at("even_scale").get<double>();
            if (pj.contains("odd_scale"))
                c.odd_scale = pj.at("odd_scale").get<double>();
        }
        if (j.contains("epsilon")) c.epsilons = {j.at("epsilon").get<double>()};
        if (j.contains("epsilons"))
            c.epsilons = j.at("epsilons").get<std::vector<double>>();
        if (j.contains("trial_mode")) {
            std::string m = j.at("trial_mode").get<std::string>();
            if (m == "perturbation")
                c.trial_mode = TrialMode::perturbation;
            else if (m == "independent_odd")
                c.trial_mode = TrialMode::independent_odd;
            else
                throw std::invalid_argument("trial_mode: unknown mode '" + m + "'");
        }
        if (j.contains("suites")) {
            c.suites.clear();
            for (const auto& s : j.at("suites")) {
                std::string name = s.get<std::string>();
                if (name == "all") {
                    c.suites = {Suite::identities, Suite::bounds, Suite::norms};
                    break;
                }
                c.suites.push_back(suite_from_name(name));
            }
        }
        if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    if (dim < 2) throw std::invalid_argument("dim: must be >= 2");
    if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
    if (slices < 1) throw std::invalid_argument("slices: must be >= 1");
    if (duration <= 0.0) throw std::invalid_argument("duration: must be > 0");
    if (protocol_nodes < 2) throw std::invalid_argument("protocol.nodes: must be >= 2");
    if (betas.empty()) throw std::invalid_argument("betas: must be nonempty");
    for (double b : betas)
        if (!(b > 0.0)) throw std::invalid_argument("betas: entries must be > 0");
    for (double e : epsilons)
        if (e < 0.0) throw std::invalid_argument("epsilons: entries must be >= 0");
    if (suites.empty()) throw std::invalid_argument("suites: must select at least one");
    if (workers < 1) throw std::invalid_argument("workers: must be >= 1");
}

bool SuiteReport::all_passed() const {
    for (const auto& [name, agg] : checks)
        if (agg.passed < agg.count) return false;
    return true;
}

nlohmann::json SuiteReport::to_json(bool include_timing) const {
    nlohmann::json checks_j;
    for (const auto& [name, agg] : checks)
        checks_j[name] = {{"count", agg.count},
                          {"passed", agg.passed},
                          {"max_residual", agg.max_residual},
                          {"min_slack", agg.min_slack}};
    nlohmann::json j{{"config", config_echo},
                     {"checks", checks_j},
                     {"failures", failures},
                     {"all_passed", all_passed()}};
    if (include_timing) j["wall_seconds"] = wall_seconds;
    return j;
}

std::uint64_t trial_seed(const ExperimentConfig& config, int trial_index) {
    return derive_seed(config.master_seed, static_cast<std::uint64_t>(trial_index),
                       /*purpose=*/0x717772);
}

DrivingProtocol trial_protocol(const ExperimentConfig& config, int trial_index) {
    return random_protocol(config.dim, trial_seed(config, trial_index),
                           config.protocol_config());
}

SuiteReport run_suite(const ExperimentConfig& config) {
    config.validate();
    auto start = std::chrono::steady_clock::now();

    std::vector<TrialResult> results(static_cast<std::size_t>(config.trials));
    int workers = std::min<int>(config.workers, config.trials);
    if (workers <= 1) {
        for (int t = 0; t < config.trials; ++t)
            results[static_cast<std::size_t>(t)] = run_trial(config, t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int t = next.fetch_add(1); t < config.trials;
                     t = next.fetch_add(1))
                    results[static_cast<std::size_t>(t)] = run_trial(config, t);
            });
        for (auto& th : pool) th.join();
    }

    SuiteReport report;
    report.config_echo = config.to_json();
    for (const auto& result : results) {
        for (const auto& entry : result.entries) {
            CheckAggregate& agg = report.checks[entry.name];
            ++agg.count;
            if (entry.passed) ++agg.passed;
            if (entry.is_residual)
                agg.max_residual = std::max(agg.max_residual, entry.value);
            else
                agg.min_slack = std::min(agg.min_slack, entry.value);
            if (!entry.passed) report.failures.push_back(entry.context);
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string sweep_csv(const ExperimentConfig& config, const SweepAxis& axis) {
    config.validate();
    if (axis.grid.empty()) throw std::invalid_argument("sweep axis grid is empty");
    if (axis.name != "epsilon" && axis.name != "beta" && axis.name != "slices")
        throw std::invalid_argument("sweep axis must be epsilon, beta, or slices");

    std::ostringstream csv;
    csv << "trial_id,seed,d,beta,epsilon,bound_name,lhs,rhs,slack,satisfied\n";
    auto row = [&](int trial, std::uint64_t seed, double beta, double epsilon,
                   const std::string& name, double lhs, double rhs, double slack,
                   bool ok) {
        csv << trial << ',' << seed << ',' << config.dim << ',' << fmt(beta) << ','
            << fmt(epsilon) << ',' << name << ',' << fmt(lhs) << ',' << fmt(rhs) << ','
            << fmt(slack) << ',' << (ok ? 1 : 0) << '\n';
    };

    for (int t = 0; t < config.trials; ++t) {
        std::uint64_t seed = trial_seed(config, t);
        DrivingProtocol p = trial_protocol(config, t);
        for (double value : axis.grid) {
            double beta = (axis.name == "beta") ? value : config.betas.front();
            double epsilon = (axis.name == "epsilon") ? value : config.epsilons.front();
            int slices = (axis.name == "slices") ? static_cast<int>(value)
                                                 : config.slices;

            if (axis.name == "slices") {
                JarzynskiResult jz = jarzynski_exact(p, beta, slices);
                double resid = std::abs(jz.work_average - jz.free_energy_side) /
                               jz.free_energy_side;
                row(t, seed, beta, epsilon, "jarzynski_identity", jz.work_average,
                    jz.free_energy_side, resid, resid <= kJarzynskiTol);
                continue;
            }

            TrialPair pair = make_trial_pair(p, epsilon, seed, config.trial_mode);
            BoundReport eq11 = universal_inequality_report(
                pair, sinusoidal_spec(p, +1, derive_seed(seed, 6, 3)), beta,
                config.slices);
            BoundReport eq26 = jarzynski_inequality_report(pair, beta);
            BoundReport eq28 = bogoliubov_report(pair, beta);
            BoundReport eq35 = norm_bound_report(pair, beta).ratio;
            for (const BoundReport* r : {&eq11, &eq26, &eq28, &eq35})
                row(t, seed, beta, epsilon, r->name, r->lhs, r->rhs, r->slack,
                    r->satisfied);
        }
    }
    return csv.str();
}

std::string work_distribution_csv(const WorkDistribution& dist) {
    std::ostringstream out;
    if (dist.mode == WorkDistribution::Mode::enumerated) {
        out << "W,probability\n";
        for (const auto& [w, prob] : dist.support)
            out << fmt(w) << ',' << fmt(prob) << '\n';
    } else {
        for (double w : dist.samples) out << fmt(w) << '\n';
    }
    return out.str();
}

std::string optimization_trace_csv(const OptimizationTrace& trace) {
    std::ostringstream out;
    std::size_t n = trace.best_theta.size();
    out << "iteration";
    for (std::size_t i = 0; i < n; ++i) out << ",theta_" << i;
    out << ",objective\n";
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
        out << k;
        for (double th : trace.iterates[k].first) out << ',' << fmt(th);
        out << ',' << fmt(trace.iterates[k].second) << '\n';
    }
    return out.str();
}

nlohmann::json optimization_summary(const OptimizationTrace& trace) {
    return {{"best_theta", trace.best_theta},
            {"best_value", trace.best_value},
            {"evaluations", trace.evaluations},
            {"converged", trace.converged}};
}

}  // namespace qwr
