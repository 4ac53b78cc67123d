#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "qwr/operator_core.hpp"

namespace qwr {

/// Time-dependent Hamiltonian path H(t, sign) = even(t) + sign * odd(t),
/// stored as piecewise-linear node matrices on [0, T]. The even part is real
/// symmetric, the odd part purely imaginary Hermitian, so that
/// Theta H(t, +1) Theta = H(t, -1) holds by construction.
class DrivingProtocol {
public:
    DrivingProtocol(std::vector<double> node_times,
                    std::vector<ComplexMatrix> even_nodes,
                    std::vector<ComplexMatrix> odd_nodes);

    Eigen::Index dim() const { return even_nodes_.front().rows(); }
    double duration() const { return node_times_.back(); }
    std::size_t node_count() const { return node_times_.size(); }
    const std::vector<double>& node_times() const { return node_times_; }
    const std::vector<ComplexMatrix>& even_nodes() const { return even_nodes_; }
    const std::vector<ComplexMatrix>& odd_nodes() const { return odd_nodes_; }

    ComplexMatrix even_at(double t) const;
    ComplexMatrix odd_at(double t) const;

    /// Returns this protocol with a scalar shift c(t) * I added to the even
    /// part, c linear in t between c0 and cT.
    DrivingProtocol with_linear_shift(double c0, double cT) const;

    nlohmann::json to_json() const;
    static DrivingProtocol from_json(const nlohmann::json& j);

private:
    ComplexMatrix interpolate(const std::vector<ComplexMatrix>& nodes, double t) const;

    std::vector<double> node_times_;
    std::vector<ComplexMatrix> even_nodes_;
    std::vector<ComplexMatrix> odd_nodes_;
};

/// Hermitian observable with definite parity under Theta: conj(A) = parity * A.
struct Observable {
    Observable(HermitianOperator m, int p);
    HermitianOperator matrix;
    int parity;  // +1 or -1
};

enum class Direction { forward, reverse };

/// Unitary evolution family on a uniform grid, built from midpoint-rule
/// exponential slices. Also carries half-step (slice-midpoint) unitaries,
/// using the same midpoint generator as the full step so that composition
/// stays consistent: U(t_{j+1}) = exp(-i H_mid dt/2) U_mid(j).
struct PropagatorTable {
    double duration = 0.0;
    int slices = 0;
    Direction direction = Direction::forward;
    int sign = +1;
    std::vector<ComplexMatrix> unitaries;      // size N+1, unitaries[0] = I
    std::vector<ComplexMatrix> mid_unitaries;  // size N, at t_j + dt/2

    double dt() const { return duration / slices; }
    double grid_time(int j) const { return duration * j / slices; }
    double mid_time(int j) const { return duration * (j + 0.5) / slices; }
};

HermitianOperator hamiltonian_at(const DrivingProtocol& p, double t, int sign);

PropagatorTable build_propagators(const DrivingProtocol& p, int sign,
                                  Direction direction, int slices);

/// Heisenberg-picture observable U(t_j)^dagger A U(t_j) at grid index j.
HermitianOperator heisenberg(const Observable& a, const PropagatorTable& table, int j);

/// max_j || conj(U_F(T - t_j) U_F(T)^dagger) - U_R(t_j, -sign) || over the
/// reverse grid. Exact (machine precision) when the grids mirror each other;
/// for mismatched slice counts the comparison uses nearest forward grid times.
double microreversibility_residual(const DrivingProtocol& p, int slices_forward,
                                   int slices_reverse);
inline double microreversibility_residual(const DrivingProtocol& p, int slices) {
    return microreversibility_residual(p, slices, slices);
}

/// Residual of the relation as printed with U_F(t)^dagger in place of
/// U_F(T)^dagger; does not vanish for generic driving.
double microreversibility_residual_printed_variant(const DrivingProtocol& p, int slices);

/// max_j || A_F(t_j) - parity * U_F(T)^dagger conj(A_R(T - t_j)) U_F(T) ||,
/// with A_R taken from the (-sign) reverse table.
double parity_residual(const DrivingProtocol& p, const Observable& a, int slices);

struct ProtocolConfig {
    int nodes = 4;        // piecewise-linear node count (>= 2)
    double even_scale = 1.0;
    double odd_scale = 0.5;
    double duration = 1.0;
};

/// Seeded Gaussian protocol ensemble; deterministic for a fixed seed.
DrivingProtocol random_protocol(Eigen::Index dim, std::uint64_t seed,
                                const ProtocolConfig& config = {});

/// Seeded parity-definite random observable (even: real symmetric,
/// odd: i * antisymmetric), unit scale.
Observable random_observable(Eigen::Index dim, int parity, std::uint64_t seed);

}  // namespace qwr
