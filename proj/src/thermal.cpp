#include "qwr/thermal.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace qwr {

namespace {

constexpr double kRelTol = 1e-9;

double log_partition_of(const HermitianOperator& h, double beta) {
    // log sum exp with a max-eigenvalue shift of -beta * lambda
    const RealVector& ev = h.eigenvalues();
    double peak = -beta * ev.minCoeff();
    double sum = 0.0;
    for (Eigen::Index n = 0; n < ev.size(); ++n)
        sum += std::exp(-beta * ev(n) - peak);
    return peak + std::log(sum);
}

double trace_real(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a * b).trace().real();
}

}  // namespace

GibbsState::GibbsState(HermitianOperator hamiltonian, double beta)
    : hamiltonian_(std::move(hamiltonian)), beta_(beta) {
    if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
    log_z_ = log_partition_of(hamiltonian_, beta_);
    const Spectrum& s = hamiltonian_.spectrum();
    Eigen::VectorXd weights(s.values.size());
    for (Eigen::Index n = 0; n < s.values.size(); ++n)
        weights(n) = std::exp(-beta_ * s.values(n) - log_z_);
    rho_ = s.vectors * weights.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

GibbsState gibbs(HermitianOperator h, double beta) {
    return GibbsState(std::move(h), beta);
}

DiagonalDistribution diagonal_distribution(const GibbsState& state,
                                           const UnitaryOperator& basis,
                                           std::string basis_label) {
    if (basis.dim() != state.hamiltonian().dim())
        throw std::domain_error("basis dimension mismatch");
    DiagonalDistribution dist;
    dist.basis_label = std::move(basis_label);
    const ComplexMatrix& q = basis.matrix();
    for (Eigen::Index n = 0; n < q.cols(); ++n) {
        double p = (q.col(n).adjoint() * state.rho() * q.col(n))(0, 0).real();
        dist.probabilities.push_back(std::max(p, 0.0));
    }
    return dist;
}

double relative_entropy(const DiagonalDistribution& p, const DiagonalDistribution& q) {
    if (p.probabilities.size() != q.probabilities.size())
        throw std::domain_error("distribution length mismatch");
    double sum = 0.0;
    for (std::size_t n = 0; n < p.probabilities.size(); ++n) {
        double pn = p.probabilities[n], qn = q.probabilities[n];
        if (pn <= 0.0) continue;
        if (qn <= 0.0) return std::numeric_limits<double>::infinity();
        sum += pn * std::log(pn / qn);
    }
    return sum;
}

BoundReport gbf_lower_bound(const HermitianOperator& h_true,
                            const HermitianOperator& h_trial, double beta) {
    if (h_true.dim() != h_trial.dim())
        throw std::domain_error("Hamiltonian dimension mismatch");
    GibbsState state = gibbs(h_true, beta);
    double v_avg = trace_real(state.rho(), h_trial.matrix() - h_true.matrix());
    double log_lhs = log_partition_of(h_trial, beta);
    double log_rhs = state.log_partition() - beta * v_avg;

    BoundReport r;
    r.name = "gbf_lower";
    r.lhs = std::exp(log_lhs);
    r.rhs = std::exp(log_rhs);
    r.slack = log_lhs - log_rhs;  // log-space relative slack, >= 0 expected
    r.satisfied = r.slack >= -kRelTol;
    r.context = {{"tol", kRelTol}, {"beta", beta}, {"v_avg", v_avg},
                 {"log_lhs", log_lhs}, {"log_rhs", log_rhs}};
    return r;
}

BoundReport gbf_upper_bound(const HermitianOperator& h_true,
                            const HermitianOperator& h_trial, double beta) {
    if (h_true.dim() != h_trial.dim())
        throw std::domain_error("Hamiltonian dimension mismatch");
    GibbsState trial_state = gibbs(h_trial, beta);
    double v_avg = trace_real(trial_state.rho(), h_trial.matrix() - h_true.matrix());
    double log_lhs = trial_state.log_partition();
    double log_rhs = log_partition_of(h_true, beta) - beta * v_avg;

    BoundReport r;
    r.name = "gbf_upper";
    r.lhs = std::exp(log_lhs);
    r.rhs = std::exp(log_rhs);
    r.slack = log_rhs - log_lhs;
    r.satisfied = r.slack >= -kRelTol;
    r.context = {{"tol", kRelTol}, {"beta", beta}, {"v_avg", v_avg},
                 {"log_lhs", log_lhs}, {"log_rhs", log_rhs}};
    return r;
}

BoundReport ratio_bound(const HermitianOperator& h0_true,
                        const HermitianOperator& h0_trial,
                        const HermitianOperator& hT_true,
                        const HermitianOperator& hT_trial, double beta) {
    GibbsState rho0 = gibbs(h0_true, beta);
    GibbsState rhoT_trial = gibbs(hT_trial, beta);
    double v0 = trace_real(rho0.rho(), h0_trial.matrix() - h0_true.matrix());
    double vT = trace_real(rhoT_trial.rho(), hT_trial.matrix() - hT_true.matrix());

    double log_lhs = log_partition_of(hT_trial, beta) - log_partition_of(h0_trial, beta);
    double log_rhs = log_partition_of(hT_true, beta) - log_partition_of(h0_true, beta) +
                     beta * (v0 - vT);

    BoundReport r;
    r.name = "gbf_ratio";
    r.lhs = std::exp(log_lhs);
    r.rhs = std::exp(log_rhs);
    r.slack = log_rhs - log_lhs;
    r.satisfied = r.slack >= -kRelTol;
    r.context = {{"tol", kRelTol}, {"beta", beta}, {"v0", v0}, {"vT", vT},
                 {"log_lhs", log_lhs}, {"log_rhs", log_rhs}};
    return r;
}

}  // namespace qwr
