#pragma once

#include "qwr/work_relations.hpp"

namespace qwr {

/// True and trial driving protocols of matching dimension and duration.
struct TrialPair {
    TrialPair(DrivingProtocol true_p, DrivingProtocol trial_p);
    DrivingProtocol true_protocol;
    DrivingProtocol trial_protocol;
};

/// V(t) = H'(t, sign_trial) - H(t, sign_true). Forward-endpoint averages use
/// (+,+), reverse-endpoint averages (-,-).
HermitianOperator difference_operator(const TrialPair& pair, double t, int sign_true,
                                      int sign_trial);

struct VAverages {
    double v0;  // Tr[rho(0) V(0)], rho(0) the true initial Gibbs state
    double vT;  // Tr[rho'(T) V(T)], rho'(T) the trial reverse-start Gibbs state
};

VAverages v_averages(const TrialPair& pair, double beta);

/// Free-energy differences across the process, F(T) - F(0), for the true and
/// trial protocols (reverse-endpoint Hamiltonians use the - sign).
double true_delta_f(const TrialPair& pair, double beta);
double trial_delta_f(const TrialPair& pair, double beta);

/// Main inequality: the trial forward functional average is bounded by
/// e^{-beta dF} e^{beta (v0 - vT)} times the trial reverse functional average.
BoundReport universal_inequality_report(const TrialPair& pair, const FunctionalSpec& spec,
                                        double beta, int slices);

/// e^{-beta dF'} <= e^{-beta dF} e^{beta (v0 - vT)}.
BoundReport jarzynski_inequality_report(const TrialPair& pair, double beta);

/// Generalized Bogoliubov inequality: after ramping a scalar shift onto the
/// trial protocol so that both endpoint averages of V vanish, dF <= dF'.
BoundReport bogoliubov_report(const TrialPair& pair, double beta);

struct NormBoundReports {
    BoundReport zT;     // Z'(T) <= Z(T) e^{beta ||V(T)||}
    BoundReport z0;     // Z(0)  <= Z'(0) e^{beta ||V(0)||}
    BoundReport ratio;  // e^{-beta dF'} <= e^{-beta dF} e^{beta (||V(0)|| + ||V(T)||)}
};

NormBoundReports norm_bound_report(const TrialPair& pair, double beta);

enum class TrialMode { perturbation, independent_odd };

/// Trial ensemble: H'(t) = H(t) + epsilon * P(t) with P from the same
/// Theta-structured ensemble, or a variant rescaling the odd (parameter)
/// part independently.
TrialPair make_trial_pair(const DrivingProtocol& true_protocol, double epsilon,
                          std::uint64_t seed, TrialMode mode = TrialMode::perturbation);

}  // namespace qwr
