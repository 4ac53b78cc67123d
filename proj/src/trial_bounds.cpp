#include "qwr/trial_bounds.hpp"

#include <cmath>
#include <random>

#include "qwr/rng.hpp"

namespace qwr {

namespace {

constexpr double kRelTol = 1e-9;

double log_z(const DrivingProtocol& p, double t, int sign, double beta) {
    return beta * -gibbs(hamiltonian_at(p, t, sign), beta).free_energy();
}

}  // namespace

TrialPair::TrialPair(DrivingProtocol true_p, DrivingProtocol trial_p)
    : true_protocol(std::move(true_p)), trial_protocol(std::move(trial_p)) {
    if (true_protocol.dim() != trial_protocol.dim() ||
        true_protocol.duration() != trial_protocol.duration())
        throw std::invalid_argument("true/trial protocols must match in dim and duration");
}

HermitianOperator difference_operator(const TrialPair& pair, double t, int sign_true,
                                      int sign_trial) {
    ComplexMatrix v = hamiltonian_at(pair.trial_protocol, t, sign_trial).matrix() -
                      hamiltonian_at(pair.true_protocol, t, sign_true).matrix();
    return HermitianOperator(std::move(v));
}

VAverages v_averages(const TrialPair& pair, double beta) {
    const double T = pair.true_protocol.duration();
    GibbsState rho0 = gibbs(hamiltonian_at(pair.true_protocol, 0.0, +1), beta);
    GibbsState rhoT_trial = gibbs(hamiltonian_at(pair.trial_protocol, T, -1), beta);
    VAverages v;
    v.v0 = (rho0.rho() * difference_operator(pair, 0.0, +1, +1).matrix()).trace().real();
    v.vT = (rhoT_trial.rho() * difference_operator(pair, T, -1, -1).matrix())
               .trace().real();
    return v;
}

double true_delta_f(const TrialPair& pair, double beta) {
    const double T = pair.true_protocol.duration();
    return (log_z(pair.true_protocol, 0.0, +1, beta) -
            log_z(pair.true_protocol, T, -1, beta)) / beta;
}

double trial_delta_f(const TrialPair& pair, double beta) {
    const double T = pair.trial_protocol.duration();
    return (log_z(pair.trial_protocol, 0.0, +1, beta) -
            log_z(pair.trial_protocol, T, -1, beta)) / beta;
}

BoundReport universal_inequality_report(const TrialPair& pair, const FunctionalSpec& spec,
                                        double beta, int slices) {
    VAverages v = v_averages(pair, beta);
    double df = true_delta_f(pair, beta);
    double lhs = forward_functional_average(pair.trial_protocol, spec, beta, slices);
    double rev = reverse_functional_average(pair.trial_protocol, spec, beta, slices);
    double rhs = std::exp(-beta * df + beta * (v.v0 - v.vT)) * rev;

    double scale = std::max(std::abs(lhs), std::abs(rhs));
    BoundReport r = make_leq_report("universal_inequality", lhs, rhs, kRelTol, scale);
    r.context["beta"] = beta;
    r.context["v0"] = v.v0;
    r.context["vT"] = v.vT;
    r.context["delta_f"] = df;
    r.context["reverse_average"] = rev;
    return r;
}

BoundReport jarzynski_inequality_report(const TrialPair& pair, double beta) {
    VAverages v = v_averages(pair, beta);
    double df = true_delta_f(pair, beta);
    double df_trial = trial_delta_f(pair, beta);
    double log_lhs = -beta * df_trial;
    double log_rhs = -beta * df + beta * (v.v0 - v.vT);

    BoundReport r;
    r.name = "jarzynski_trial";
    r.lhs = std::exp(log_lhs);
    r.rhs = std::exp(log_rhs);
    r.slack = log_rhs - log_lhs;  // log-space relative slack
    r.satisfied = r.slack >= -kRelTol;
    r.context = {{"tol", kRelTol}, {"beta", beta},       {"v0", v.v0},
                 {"vT", v.vT},     {"delta_f", df},      {"delta_f_trial", df_trial},
                 {"log_lhs", log_lhs}, {"log_rhs", log_rhs}};
    return r;
}

BoundReport bogoliubov_report(const TrialPair& pair, double beta) {
    VAverages v = v_averages(pair, beta);
    TrialPair matched(pair.true_protocol,
                      pair.trial_protocol.with_linear_shift(-v.v0, -v.vT));
    VAverages residual = v_averages(matched, beta);
    double df = true_delta_f(matched, beta);
    double df_trial = trial_delta_f(matched, beta);

    double scale = std::max(1.0, std::abs(df_trial));
    BoundReport r = make_leq_report("generalized_bogoliubov", df, df_trial, kRelTol, scale);
    r.context["beta"] = beta;
    r.context["matched_v0"] = residual.v0;
    r.context["matched_vT"] = residual.vT;
    return r;
}

NormBoundReports norm_bound_report(const TrialPair& pair, double beta) {
    const double T = pair.true_protocol.duration();
    double norm_v0 = operator_norm(difference_operator(pair, 0.0, +1, +1).matrix());
    double norm_vT = operator_norm(difference_operator(pair, T, -1, -1).matrix());

    double log_z0 = log_z(pair.true_protocol, 0.0, +1, beta);
    double log_zT = log_z(pair.true_protocol, T, -1, beta);
    double log_z0_trial = log_z(pair.trial_protocol, 0.0, +1, beta);
    double log_zT_trial = log_z(pair.trial_protocol, T, -1, beta);

    auto log_space_report = [beta](std::string name, double log_lhs, double log_rhs,
                                   double n0, double nT) {
        BoundReport r;
        r.name = std::move(name);
        r.lhs = std::exp(log_lhs);
        r.rhs = std::exp(log_rhs);
        r.slack = log_rhs - log_lhs;
        r.satisfied = r.slack >= -kRelTol;
        r.context = {{"tol", kRelTol},   {"beta", beta},     {"norm_v0", n0},
                     {"norm_vT", nT},    {"log_lhs", log_lhs}, {"log_rhs", log_rhs}};
        return r;
    };

    NormBoundReports reports{
        log_space_report("norm_bound_zT", log_zT_trial, log_zT + beta * norm_vT,
                         norm_v0, norm_vT),
        log_space_report("norm_bound_z0", log_z0, log_z0_trial + beta * norm_v0,
                         norm_v0, norm_vT),
        log_space_report("norm_bound_ratio", log_zT_trial - log_z0_trial,
                         log_zT - log_z0 + beta * (norm_v0 + norm_vT), norm_v0,
                         norm_vT)};
    return reports;
}

TrialPair make_trial_pair(const DrivingProtocol& true_protocol, double epsilon,
                          std::uint64_t seed, TrialMode mode) {
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
    const auto& times = true_protocol.node_times();
    std::vector<ComplexMatrix> even = true_protocol.even_nodes();
    std::vector<ComplexMatrix> odd = true_protocol.odd_nodes();
    if (mode == TrialMode::perturbation) {
        DrivingProtocol direction = random_protocol(
            true_protocol.dim(), derive_seed(seed, 2, /*purpose=*/0x74726c),
            ProtocolConfig{static_cast<int>(times.size()), 1.0, 1.0,
                           true_protocol.duration()});
        for (std::size_t k = 0; k < times.size(); ++k) {
            even[k] += epsilon * direction.even_nodes()[k];
            odd[k] += epsilon * direction.odd_nodes()[k];
        }
    } else {
        // different external-parameter magnitude: rescale the Theta-odd part
        for (auto& m : odd) m *= (1.0 + epsilon);
    }
    return TrialPair(true_protocol,
                     DrivingProtocol(times, std::move(even), std::move(odd)));
}

}  // namespace qwr
