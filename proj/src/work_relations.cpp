#include "qwr/work_relations.hpp"

#include <cmath>

#include "qwr/rng.hpp"

namespace qwr {

namespace {

ComplexMatrix shifted_boltzmann(const HermitianOperator& h, double beta, double shift) {
    // exp(-beta (H - shift I)) via the spectrum
    const Spectrum& s = h.spectrum();
    Eigen::VectorXd w(s.values.size());
    for (Eigen::Index n = 0; n < s.values.size(); ++n)
        w(n) = std::exp(-beta * (s.values(n) - shift));
    return s.vectors * w.cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

Complex forward_average_c(const DrivingProtocol& p, const FunctionalSpec& spec,
                          double beta, int slices) {
    PropagatorTable fwd = build_propagators(p, +1, Direction::forward, slices);
    HermitianOperator h0 = hamiltonian_at(p, 0.0, +1);
    HermitianOperator hT = hamiltonian_at(p, p.duration(), +1);
    GibbsState rho0 = gibbs(h0, beta);

    const ComplexMatrix& u = fwd.unitaries.back();
    HermitianOperator hfT(u.adjoint() * hT.matrix() * u);
    HermitianOperator lam = integrated_observable(spec, fwd);

    // rho(0) commutes with exp(+beta H(0)) and the product is I/Z, so the
    // average collapses to Tr[e^Lambda e^{-beta H_F(T)}] / Z(0).  Evaluating it
    // this way keeps every factor bounded at large beta; the naive triple
    // product e^Lambda e^{-beta H_F(T)} e^{+beta H(0)} cancels catastrophically.
    double a = hfT.eigenvalues().minCoeff();
    ComplexMatrix m = matrix_exponential(lam.matrix()) * shifted_boltzmann(hfT, beta, a);
    return m.trace() * std::exp(-beta * a - rho0.log_partition());
}

Complex reverse_average_c(const DrivingProtocol& p, const FunctionalSpec& spec,
                          double beta, int slices) {
    PropagatorTable rev = build_propagators(p, -1, Direction::reverse, slices);
    GibbsState rhoT = gibbs(hamiltonian_at(p, p.duration(), -1), beta);
    HermitianOperator lam = integrated_observable(spec, rev);
    ComplexMatrix e = matrix_exponential(double(spec.observable.parity) * lam.matrix());
    return (rhoT.rho() * e).trace();
}

}  // namespace

HermitianOperator integrated_observable(const FunctionalSpec& spec,
                                        const PropagatorTable& table) {
    if (table.mid_unitaries.empty())
        throw std::domain_error("propagator table has no slices");
    const Eigen::Index d = spec.observable.matrix.dim();
    if (table.mid_unitaries.front().rows() != d)
        throw std::domain_error("observable dimension does not match table");
    const double dt = table.dt();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < table.slices; ++k) {
        double t_mid = table.mid_time(k);
        double weight = (table.direction == Direction::forward)
                            ? spec.lambda(t_mid)
                            : spec.lambda(table.duration - t_mid);
        const ComplexMatrix& um = table.mid_unitaries[static_cast<std::size_t>(k)];
        sum += weight * dt * (um.adjoint() * spec.observable.matrix.matrix() * um);
    }
    return HermitianOperator(std::move(sum));
}

double forward_functional_average(const DrivingProtocol& p, const FunctionalSpec& spec,
                                  double beta, int slices) {
    return forward_average_c(p, spec, beta, slices).real();
}

double reverse_functional_average(const DrivingProtocol& p, const FunctionalSpec& spec,
                                  double beta, int slices) {
    return reverse_average_c(p, spec, beta, slices).real();
}

double functional_average_imag_residual(const DrivingProtocol& p,
                                        const FunctionalSpec& spec, double beta,
                                        int slices) {
    Complex f = forward_average_c(p, spec, beta, slices);
    Complex r = reverse_average_c(p, spec, beta, slices);
    return std::max(std::abs(f.imag()), std::abs(r.imag()));
}

double universal_relation_residual(const DrivingProtocol& p, const FunctionalSpec& spec,
                                   double beta, int slices,
                                   std::optional<int> slices_reverse) {
    double fwd = forward_functional_average(p, spec, beta, slices);
    double rev = reverse_functional_average(p, spec, beta,
                                            slices_reverse.value_or(slices));
    GibbsState g0 = gibbs(hamiltonian_at(p, 0.0, +1), beta);
    GibbsState gT = gibbs(hamiltonian_at(p, p.duration(), -1), beta);
    double exp_mbdf = std::exp(gT.log_partition() - g0.log_partition());
    return std::abs(fwd - exp_mbdf * rev) / std::max(1.0, std::abs(fwd));
}

JarzynskiResult jarzynski_exact(const DrivingProtocol& p, double beta, int slices) {
    FunctionalSpec zero{[](double) { return 0.0; },
                        Observable(HermitianOperator(ComplexMatrix::Identity(
                                       p.dim(), p.dim())),
                                   +1)};
    JarzynskiResult r;
    r.work_average = forward_functional_average(p, zero, beta, slices);
    GibbsState g0 = gibbs(hamiltonian_at(p, 0.0, +1), beta);
    GibbsState gT = gibbs(hamiltonian_at(p, p.duration(), -1), beta);
    r.free_energy_side = std::exp(gT.log_partition() - g0.log_partition());
    return r;
}

double WorkDistribution::exponential_work_average() const {
    if (mode == Mode::enumerated) {
        double sum = 0.0;
        for (const auto& [w, prob] : support) sum += prob * std::exp(-beta * w);
        return sum;
    }
    double sum = 0.0;
    for (double w : samples) sum += std::exp(-beta * w);
    return sum / static_cast<double>(samples.size());
}

namespace {

struct TpmLaw {
    Eigen::VectorXd initial_probs;     // Boltzmann weights of H(0,+R)
    Eigen::MatrixXd transition_probs;  // |<psi_m(T)| U |psi_n(0)>|^2
    RealVector e0;
    RealVector eT;
};

TpmLaw tpm_law(const DrivingProtocol& p, double beta, int slices) {
    PropagatorTable fwd = build_propagators(p, +1, Direction::forward, slices);
    HermitianOperator h0 = hamiltonian_at(p, 0.0, +1);
    HermitianOperator hT = hamiltonian_at(p, p.duration(), +1);
    GibbsState g0 = gibbs(h0, beta);

    TpmLaw law;
    law.e0 = h0.eigenvalues();
    law.eT = hT.eigenvalues();
    const Eigen::Index d = p.dim();
    law.initial_probs.resize(d);
    for (Eigen::Index n = 0; n < d; ++n)
        law.initial_probs(n) = std::exp(-beta * law.e0(n) - g0.log_partition());
    ComplexMatrix amp =
        hT.eigenvectors().adjoint() * fwd.unitaries.back() * h0.eigenvectors();
    law.transition_probs = amp.cwiseAbs2();
    return law;
}

}  // namespace

WorkDistribution tpm_work_distribution(const DrivingProtocol& p, double beta,
                                       int slices) {
    TpmLaw law = tpm_law(p, beta, slices);
    WorkDistribution dist;
    dist.mode = WorkDistribution::Mode::enumerated;
    dist.beta = beta;
    const Eigen::Index d = p.dim();
    for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index m = 0; m < d; ++m)
            dist.support.emplace_back(law.eT(m) - law.e0(n),
                                      law.initial_probs(n) * law.transition_probs(m, n));
    return dist;
}

WorkDistribution tpm_work_distribution_sampled(const DrivingProtocol& p, double beta,
                                               int slices, std::size_t samples,
                                               std::uint64_t seed) {
    if (samples < 1) throw std::domain_error("need at least one sample");
    TpmLaw law = tpm_law(p, beta, slices);
    const Eigen::Index d = p.dim();

    // cumulative tables for inverse-CDF draws
    Eigen::VectorXd init_cdf(d);
    double acc = 0.0;
    for (Eigen::Index n = 0; n < d; ++n) init_cdf(n) = (acc += law.initial_probs(n));
    Eigen::MatrixXd row_cdf(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        double col_total = law.transition_probs.col(n).sum();
        double c = 0.0;
        for (Eigen::Index m = 0; m < d; ++m)
            row_cdf(m, n) = (c += law.transition_probs(m, n) / col_total);
    }

    CounterStream stream(seed);
    WorkDistribution dist;
    dist.mode = WorkDistribution::Mode::sampled;
    dist.beta = beta;
    dist.samples.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        double u1 = stream.uniform(2 * i);
        double u2 = stream.uniform(2 * i + 1);
        Eigen::Index n = 0;
        while (n + 1 < d && u1 > init_cdf(n)) ++n;
        Eigen::Index m = 0;
        while (m + 1 < d && u2 > row_cdf(m, n)) ++m;
        dist.samples.push_back(law.eT(m) - law.e0(n));
    }
    return dist;
}

}  // namespace qwr
