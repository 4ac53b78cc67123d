#include "qwr/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qwr/rng.hpp"

namespace qwr {

namespace {

constexpr double kStructureTol = 1e-12;

double rel_max_defect(const ComplexMatrix& defect, const ComplexMatrix& ref) {
    double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
    return defect.cwiseAbs().maxCoeff() / scale;
}

void require_even(const ComplexMatrix& m) {
    if (rel_max_defect(m.imag().cast<Complex>(), m) > kStructureTol ||
        rel_max_defect(m - m.transpose().eval(), m) > kStructureTol)
        throw std::domain_error("even node must be real symmetric");
}

void require_odd(const ComplexMatrix& m) {
    if (rel_max_defect(m.real().cast<Complex>(), m) > kStructureTol ||
        rel_max_defect(m - m.adjoint().eval(), m) > kStructureTol)
        throw std::domain_error("odd node must be purely imaginary Hermitian");
}

ComplexMatrix step_unitary(const HermitianOperator& h, double dt) {
    return matrix_exponential(Complex(0, -1) * dt * h.matrix());
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            rows.push_back({m(i, j).real(), m(i, j).imag()});
    return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index d) {
    if (static_cast<Eigen::Index>(j.size()) != d * d)
        throw std::invalid_argument("matrix entry count does not match dim");
    ComplexMatrix m(d, d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index c = 0; c < d; ++c, ++k)
            m(i, c) = Complex(j[k][0].get<double>(), j[k][1].get<double>());
    return m;
}

}  // namespace

DrivingProtocol::DrivingProtocol(std::vector<double> node_times,
                                 std::vector<ComplexMatrix> even_nodes,
                                 std::vector<ComplexMatrix> odd_nodes)
    : node_times_(std::move(node_times)),
      even_nodes_(std::move(even_nodes)),
      odd_nodes_(std::move(odd_nodes)) {
    if (node_times_.size() < 2 || even_nodes_.size() != node_times_.size() ||
        odd_nodes_.size() != node_times_.size())
        throw std::invalid_argument("protocol needs >= 2 nodes with matching matrices");
    if (node_times_.front() != 0.0 || node_times_.back() <= 0.0 ||
        !std::is_sorted(node_times_.begin(), node_times_.end()))
        throw std::invalid_argument("node times must ascend from 0 to T > 0");
    const Eigen::Index d = even_nodes_.front().rows();
    for (std::size_t k = 0; k < node_times_.size(); ++k) {
        if (even_nodes_[k].rows() != d || even_nodes_[k].cols() != d ||
            odd_nodes_[k].rows() != d || odd_nodes_[k].cols() != d)
            throw std::invalid_argument("node matrix dimensions inconsistent");
        require_even(even_nodes_[k]);
        require_odd(odd_nodes_[k]);
    }
}

ComplexMatrix DrivingProtocol::interpolate(const std::vector<ComplexMatrix>& nodes,
                                           double t) const {
    if (t < 0.0 || t > duration())
        throw std::domain_error("time outside [0, T]");
    auto hi = std::upper_bound(node_times_.begin(), node_times_.end(), t);
    if (hi == node_times_.end()) return nodes.back();
    std::size_t k = static_cast<std::size_t>(hi - node_times_.begin());
    if (k == 0) return nodes.front();
    double t0 = node_times_[k - 1], t1 = node_times_[k];
    double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * nodes[k - 1] + w * nodes[k];
}

ComplexMatrix DrivingProtocol::even_at(double t) const { return interpolate(even_nodes_, t); }
ComplexMatrix DrivingProtocol::odd_at(double t) const { return interpolate(odd_nodes_, t); }

DrivingProtocol DrivingProtocol::with_linear_shift(double c0, double cT) const {
    std::vector<ComplexMatrix> shifted = even_nodes_;
    const Eigen::Index d = dim();
    for (std::size_t k = 0; k < node_times_.size(); ++k) {
        double w = node_times_[k] / duration();
        shifted[k] += (c0 * (1.0 - w) + cT * w) * ComplexMatrix::Identity(d, d);
    }
    return DrivingProtocol(node_times_, std::move(shifted), odd_nodes_);
}

nlohmann::json DrivingProtocol::to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t k = 0; k < node_times_.size(); ++k)
        nodes.push_back({{"t", node_times_[k]},
                         {"even", matrix_to_json(even_nodes_[k])},
                         {"odd", matrix_to_json(odd_nodes_[k])}});
    return {{"dim", dim()}, {"duration", duration()}, {"nodes", nodes}};
}

DrivingProtocol DrivingProtocol::from_json(const nlohmann::json& j) {
    Eigen::Index d = j.at("dim").get<Eigen::Index>();
    std::vector<double> times;
    std::vector<ComplexMatrix> even, odd;
    for (const auto& node : j.at("nodes")) {
        times.push_back(node.at("t").get<double>());
        even.push_back(matrix_from_json(node.at("even"), d));
        odd.push_back(matrix_from_json(node.at("odd"), d));
    }
    DrivingProtocol p(std::move(times), std::move(even), std::move(odd));
    if (j.contains("duration") &&
        std::abs(p.duration() - j.at("duration").get<double>()) > 1e-12)
        throw std::invalid_argument("duration does not match final node time");
    return p;
}

Observable::Observable(HermitianOperator m, int p) : matrix(std::move(m)), parity(p) {
    if (p != 1 && p != -1) throw std::invalid_argument("parity must be +1 or -1");
    const ComplexMatrix& a = matrix.matrix();
    if (rel_max_defect(a.conjugate() - double(p) * a, a) > kStructureTol)
        throw std::domain_error("observable does not have the stated Theta parity");
}

HermitianOperator hamiltonian_at(const DrivingProtocol& p, double t, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    return HermitianOperator(p.even_at(t) + double(sign) * p.odd_at(t));
}

PropagatorTable build_propagators(const DrivingProtocol& p, int sign,
                                  Direction direction, int slices) {
    if (slices < 1) throw std::domain_error("slice count must be >= 1");
    PropagatorTable table;
    table.duration = p.duration();
    table.slices = slices;
    table.direction = direction;
    table.sign = sign;
    const Eigen::Index d = p.dim();
    const double T = p.duration();
    const double dt = T / slices;
    table.unitaries.reserve(slices + 1);
    table.mid_unitaries.reserve(slices);
    table.unitaries.push_back(ComplexMatrix::Identity(d, d));
    for (int j = 0; j < slices; ++j) {
        double mid = (direction == Direction::forward) ? (j + 0.5) * dt
                                                       : T - (j + 0.5) * dt;
        HermitianOperator h = hamiltonian_at(p, mid, sign);
        table.mid_unitaries.push_back(step_unitary(h, 0.5 * dt) * table.unitaries.back());
        table.unitaries.push_back(step_unitary(h, dt) * table.unitaries.back());
    }
    return table;
}

HermitianOperator heisenberg(const Observable& a, const PropagatorTable& table, int j) {
    if (j < 0 || j > table.slices) throw std::domain_error("grid index out of range");
    const ComplexMatrix& u = table.unitaries[static_cast<std::size_t>(j)];
    return HermitianOperator(u.adjoint() * a.matrix.matrix() * u);
}

double microreversibility_residual(const DrivingProtocol& p, int slices_forward,
                                   int slices_reverse) {
    PropagatorTable fwd = build_propagators(p, +1, Direction::forward, slices_forward);
    PropagatorTable rev = build_propagators(p, -1, Direction::reverse, slices_reverse);
    const ComplexMatrix uT_adj = fwd.unitaries.back().adjoint();
    double worst = 0.0;
    for (int j = 0; j <= slices_reverse; ++j) {
        // reverse-process time t_j corresponds to forward time T - t_j
        double tau_frac = 1.0 - static_cast<double>(j) / slices_reverse;
        int k = static_cast<int>(std::lround(tau_frac * slices_forward));
        ComplexMatrix lhs =
            theta_conjugate(fwd.unitaries[static_cast<std::size_t>(k)] * uT_adj);
        worst = std::max(worst,
                         operator_norm(lhs - rev.unitaries[static_cast<std::size_t>(j)]));
    }
    return worst;
}

double microreversibility_residual_printed_variant(const DrivingProtocol& p, int slices) {
    PropagatorTable fwd = build_propagators(p, +1, Direction::forward, slices);
    PropagatorTable rev = build_propagators(p, -1, Direction::reverse, slices);
    double worst = 0.0;
    for (int j = 0; j <= slices; ++j) {
        ComplexMatrix lhs =
            theta_conjugate(fwd.unitaries[static_cast<std::size_t>(slices - j)] *
                            fwd.unitaries[static_cast<std::size_t>(j)].adjoint());
        worst = std::max(worst,
                         operator_norm(lhs - rev.unitaries[static_cast<std::size_t>(j)]));
    }
    return worst;
}

double parity_residual(const DrivingProtocol& p, const Observable& a, int slices) {
    PropagatorTable fwd = build_propagators(p, +1, Direction::forward, slices);
    PropagatorTable rev = build_propagators(p, -1, Direction::reverse, slices);
    const ComplexMatrix& uT = fwd.unitaries.back();
    double worst = 0.0;
    for (int j = 0; j <= slices; ++j) {
        ComplexMatrix af = heisenberg(a, fwd, j).matrix();
        ComplexMatrix ar = heisenberg(a, rev, slices - j).matrix();
        ComplexMatrix rhs =
            double(a.parity) * uT.adjoint() * theta_conjugate(ar) * uT;
        worst = std::max(worst, operator_norm(af - rhs));
    }
    return worst;
}

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = normal(rng);
    return g;
}

ComplexMatrix random_even(Eigen::Index d, double scale, std::mt19937_64& rng) {
    Eigen::MatrixXd g = gaussian_matrix(d, rng);
    return (scale * 0.5 * (g + g.transpose())).cast<Complex>();
}

ComplexMatrix random_odd(Eigen::Index d, double scale, std::mt19937_64& rng) {
    Eigen::MatrixXd g = gaussian_matrix(d, rng);
    return Complex(0, 1) * (scale * 0.5 * (g - g.transpose())).cast<Complex>();
}

}  // namespace

DrivingProtocol random_protocol(Eigen::Index dim, std::uint64_t seed,
                                const ProtocolConfig& config) {
    if (dim < 2) throw std::domain_error("protocol dimension must be >= 2");
    if (config.nodes < 2) throw std::invalid_argument("need at least 2 nodes");
    std::mt19937_64 rng(derive_seed(seed, 0, /*purpose=*/0x70726f74));
    std::vector<double> times;
    std::vector<ComplexMatrix> even, odd;
    for (int k = 0; k < config.nodes; ++k) {
        times.push_back(config.duration * k / (config.nodes - 1));
        even.push_back(random_even(dim, config.even_scale, rng));
        odd.push_back(random_odd(dim, config.odd_scale, rng));
    }
    return DrivingProtocol(std::move(times), std::move(even), std::move(odd));
}

Observable random_observable(Eigen::Index dim, int parity, std::uint64_t seed) {
    std::mt19937_64 rng(derive_seed(seed, 1, /*purpose=*/0x6f627376));
    ComplexMatrix m = (parity == 1) ? random_even(dim, 1.0, rng)
                                    : random_odd(dim, 1.0, rng);
    return Observable(HermitianOperator(std::move(m)), parity);
}

}  // namespace qwr
