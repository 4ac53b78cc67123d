#pragma once

#include <vector>

#include "qwr/operator_core.hpp"
#include "qwr/report.hpp"

namespace qwr {

/// Canonical state rho = e^{-beta H} / Z. Z and F are computed in log space
/// with a spectral shift so large beta * spread(H) stays in floating range.
class GibbsState {
public:
    GibbsState(HermitianOperator hamiltonian, double beta);

    const HermitianOperator& hamiltonian() const { return hamiltonian_; }
    double beta() const { return beta_; }
    const ComplexMatrix& rho() const { return rho_; }
    double log_partition() const { return log_z_; }
    double partition() const { return std::exp(log_z_); }
    double free_energy() const { return -log_z_ / beta_; }

private:
    HermitianOperator hamiltonian_;
    double beta_;
    ComplexMatrix rho_;
    double log_z_;
};

GibbsState gibbs(HermitianOperator h, double beta);

/// Diagonal of a density matrix in a given orthonormal basis.
struct DiagonalDistribution {
    std::vector<double> probabilities;
    std::string basis_label;
};

DiagonalDistribution diagonal_distribution(const GibbsState& state,
                                           const UnitaryOperator& basis,
                                           std::string basis_label = "");

/// Kullback-Leibler divergence sum p ln(p/q), with 0 ln 0 := 0. A support
/// violation (p_n > 0 where q_n = 0) yields +infinity rather than throwing.
double relative_entropy(const DiagonalDistribution& p, const DiagonalDistribution& q);

/// Z' >= Z exp(-beta Tr[rho (H' - H)]) with rho the Gibbs state of H_true.
BoundReport gbf_lower_bound(const HermitianOperator& h_true,
                            const HermitianOperator& h_trial, double beta);

/// Z' <= Z exp(-beta Tr[rho' (H' - H)]) with rho' the Gibbs state of H_trial.
BoundReport gbf_upper_bound(const HermitianOperator& h_true,
                            const HermitianOperator& h_trial, double beta);

/// Z'(T)/Z'(0) <= Z(T)/Z(0) exp(beta [<V(0)>_rho(0) - <V(T)>_rho'(T)]),
/// the composition of the lower and upper partition-function bounds.
BoundReport ratio_bound(const HermitianOperator& h0_true,
                        const HermitianOperator& h0_trial,
                        const HermitianOperator& hT_true,
                        const HermitianOperator& hT_trial, double beta);

}  // namespace qwr
