#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qwr/protocol.hpp"
#include "qwr/report.hpp"
#include "qwr/thermal.hpp"

namespace qwr {

/// Weight function and observable for the exponentiated functional
/// exp(int_0^T lambda(t) A(t) dt); the quadrature is the midpoint rule on
/// the propagator slice grid.
struct FunctionalSpec {
    std::function<double(double)> lambda;
    Observable observable;
};

/// Midpoint-rule quadrature of lambda(t) A(t) dt over the table's slices,
/// with Heisenberg observables taken at slice midpoints via the half-step
/// unitaries. For a reverse table the weight is lambda(T - t).
HermitianOperator integrated_observable(const FunctionalSpec& spec,
                                        const PropagatorTable& table);

/// Tr[rho(0) e^{Lambda_F} e^{-beta H_F(T)} e^{beta H(0)}], operator ordering
/// as written, with spectral shifts keeping the exponentials in range.
double forward_functional_average(const DrivingProtocol& p, const FunctionalSpec& spec,
                                  double beta, int slices);

/// Tr[rho(T) e^{parity * Lambda_R}] on the mirrored reverse grid.
double reverse_functional_average(const DrivingProtocol& p, const FunctionalSpec& spec,
                                  double beta, int slices);

/// Largest imaginary residue of the two functional averages; both traces are
/// real up to roundoff.
double functional_average_imag_residual(const DrivingProtocol& p,
                                        const FunctionalSpec& spec, double beta,
                                        int slices);

/// |forward - e^{-beta dF} reverse| / max(1, |forward|). An exact identity
/// for the discretized dynamics on mirrored grids; slices_reverse lets the
/// grids be desynchronized as a negative control.
double universal_relation_residual(const DrivingProtocol& p, const FunctionalSpec& spec,
                                   double beta, int slices,
                                   std::optional<int> slices_reverse = std::nullopt);

struct JarzynskiResult {
    double work_average;      // Tr[rho(0) e^{-beta H_F(T)} e^{beta H(0)}]
    double free_energy_side;  // e^{-beta dF} = Z(T)/Z(0)
};

/// Both sides of the Jarzynski identity; they agree for any unitary U_F(T),
/// independent of the slice count.
JarzynskiResult jarzynski_exact(const DrivingProtocol& p, double beta, int slices);

struct WorkDistribution {
    enum class Mode { enumerated, sampled };
    Mode mode;
    double beta;
    // enumerated: (work value, probability) pairs; sampled: one entry per
    // draw with probability left at 1/samples
    std::vector<std::pair<double, double>> support;
    std::vector<double> samples;

    double exponential_work_average() const;
};

/// Two-point-measurement work statistics: projective energy measurement at
/// t = 0 and t = T of the forward process.
WorkDistribution tpm_work_distribution(const DrivingProtocol& p, double beta, int slices);
WorkDistribution tpm_work_distribution_sampled(const DrivingProtocol& p, double beta,
                                               int slices, std::size_t samples,
                                               std::uint64_t seed);

}  // namespace qwr
