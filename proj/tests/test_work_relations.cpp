#include <doctest.h>

#include <cmath>

#include "qwr/work_relations.hpp"

using namespace qwr;

namespace {

DrivingProtocol static_protocol(const ComplexMatrix& h, double duration = 1.0) {
    ComplexMatrix zero = ComplexMatrix::Zero(h.rows(), h.cols());
    return DrivingProtocol({0.0, duration}, {h, h}, {zero, zero});
}

Observable identity_observable(Eigen::Index d) {
    return Observable(HermitianOperator(ComplexMatrix::Identity(d, d)), +1);
}

FunctionalSpec sine_spec(Observable a, double duration) {
    return {[duration](double t) { return 0.3 * std::sin(M_PI * t / duration); },
            std::move(a)};
}

}  // namespace

TEST_CASE("integrated observable: zero weight, identity observable, commuting case") {
    DrivingProtocol p = random_protocol(3, 50);
    PropagatorTable fwd = build_propagators(p, +1, Direction::forward, 16);

    FunctionalSpec zero{[](double) { return 0.0; }, random_observable(3, +1, 51)};
    CHECK(integrated_observable(zero, fwd).matrix().norm() == 0.0);

    FunctionalSpec cid{[](double) { return 0.7; }, identity_observable(3)};
    CHECK((integrated_observable(cid, fwd).matrix() -
           0.7 * p.duration() * ComplexMatrix::Identity(3, 3)).norm() <= 1e-12);

    // static diagonal H commuting with a diagonal A: Lambda = T * A
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = 0.3; h(1, 1) = -0.6;
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 1.0; a(1, 1) = 2.0;
    DrivingProtocol sp = static_protocol(h, 2.0);
    PropagatorTable table = build_propagators(sp, +1, Direction::forward, 8);
    FunctionalSpec unit{[](double) { return 1.0; },
                        Observable(HermitianOperator(a), +1)};
    CHECK((integrated_observable(unit, table).matrix() - 2.0 * a).norm() <= 1e-10);
}

TEST_CASE("functional averages: trivial values and realness") {
    ComplexMatrix h(2, 2);
    h << 0.5, 0.2, 0.2, -0.5;
    DrivingProtocol sp = static_protocol(h);
    FunctionalSpec zero{[](double) { return 0.0; }, identity_observable(2)};
    CHECK(forward_functional_average(sp, zero, 1.3, 8) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reverse_functional_average(sp, zero, 1.3, 8) ==
          doctest::Approx(1.0).epsilon(1e-12));

    FunctionalSpec cid{[](double) { return 0.4; }, identity_observable(2)};
    CHECK(reverse_functional_average(sp, cid, 1.0, 8) ==
          doctest::Approx(std::exp(0.4)).epsilon(1e-12));

    DrivingProtocol p = random_protocol(4, 52);
    FunctionalSpec spec = sine_spec(random_observable(4, +1, 53), p.duration());
    CHECK(functional_average_imag_residual(p, spec, 1.0, 32) <= 1e-10);
}

TEST_CASE("universal relation is exact on mirrored grids") {
    DrivingProtocol p = random_protocol(4, 54);

    FunctionalSpec zero{[](double) { return 0.0; }, identity_observable(4)};
    CHECK(universal_relation_residual(p, zero, 1.0, 16) <= 1e-10);

    FunctionalSpec even = sine_spec(random_observable(4, +1, 55), p.duration());
    FunctionalSpec odd = sine_spec(random_observable(4, -1, 56), p.duration());
    CHECK(universal_relation_residual(p, even, 1.0, 64) <= 1e-9);
    CHECK(universal_relation_residual(p, odd, 1.0, 64) <= 1e-9);
}

TEST_CASE("desynchronized grids break the relation (negative control)") {
    DrivingProtocol p = random_protocol(4, 57);
    double T = p.duration();
    FunctionalSpec even{[T](double t) { return std::sin(M_PI * t / T); },
                        random_observable(4, +1, 58)};
    CHECK(universal_relation_residual(p, even, 1.0, 8, 16) >= 1e-4);
    CHECK(universal_relation_residual(p, even, 1.0, 8) <= 1e-10);
}

TEST_CASE("jarzynski identity: static and diagonal-quench closed forms") {
    ComplexMatrix h(2, 2);
    h << 0.5, 0.1, 0.1, -0.5;
    DrivingProtocol sp = static_protocol(h);
    JarzynskiResult st = jarzynski_exact(sp, 2.0, 4);
    CHECK(st.work_average == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(st.free_energy_side == doctest::Approx(1.0).epsilon(1e-12));

    // quench diag(0,1) -> diag(0,2): both sides (1+e^-2)/(1+e^-1) for any U
    ComplexMatrix h0 = ComplexMatrix::Zero(2, 2), hT = ComplexMatrix::Zero(2, 2);
    h0(1, 1) = 1.0;
    hT(1, 1) = 2.0;
    DrivingProtocol quench({0.0, 1.0}, {h0, hT},
                           {ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)});
    double expected = (1.0 + std::exp(-2.0)) / (1.0 + std::exp(-1.0));
    for (int n : {1, 7, 64}) {
        JarzynskiResult q = jarzynski_exact(quench, 1.0, n);
        CHECK(q.work_average == doctest::Approx(expected).epsilon(1e-12));
        CHECK(q.free_energy_side == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("jarzynski identity is independent of the discretization") {
    for (std::uint64_t seed : {60, 61, 62}) {
        DrivingProtocol p = random_protocol(4, seed);
        for (double beta : {0.1, 1.0, 10.0})
            for (int n : {1, 4, 512}) {
                JarzynskiResult j = jarzynski_exact(p, beta, n);
                CHECK(std::abs(j.work_average - j.free_energy_side) /
                          j.free_energy_side <= 1e-10);
            }
    }
}

TEST_CASE("TPM distribution: static protocol concentrates at W = 0") {
    ComplexMatrix h(2, 2);
    h << 0.5, 0.2, 0.2, -0.3;
    WorkDistribution dist = tpm_work_distribution(static_protocol(h), 1.0, 4);
    double mass_off_zero = 0.0;
    for (const auto& [w, prob] : dist.support)
        if (std::abs(w) > 1e-12) mass_off_zero += prob;
    CHECK(mass_off_zero <= 1e-12);
}

TEST_CASE("TPM enumerated distribution matches the operator identity") {
    DrivingProtocol p = random_protocol(5, 63);
    for (double beta : {0.5, 2.0}) {
        WorkDistribution dist = tpm_work_distribution(p, beta, 16);
        double total = 0.0;
        for (const auto& [w, prob] : dist.support) {
            CHECK(prob >= 0.0);
            total += prob;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

        JarzynskiResult j = jarzynski_exact(p, beta, 16);
        CHECK(dist.exponential_work_average() ==
              doctest::Approx(j.work_average).epsilon(1e-10));
        CHECK(dist.exponential_work_average() ==
              doctest::Approx(j.free_energy_side).epsilon(1e-10));
    }
}

TEST_CASE("sampled TPM estimator agrees within Monte Carlo error") {
    DrivingProtocol p = random_protocol(4, 64);
    double beta = 1.0;
    WorkDistribution exact = tpm_work_distribution(p, beta, 8);
    double truth = exact.exponential_work_average();

    std::size_t n = 100000;
    WorkDistribution sampled = tpm_work_distribution_sampled(p, beta, 8, n, 777);
    double mean = sampled.exponential_work_average();
    double var = 0.0;
    for (double w : sampled.samples) {
        double x = std::exp(-beta * w) - mean;
        var += x * x;
    }
    double stderr_est = std::sqrt(var / (n - 1) / n);
    CHECK(std::abs(mean - truth) <= 4.0 * stderr_est);

    // determinism under a fixed seed
    WorkDistribution again = tpm_work_distribution_sampled(p, beta, 8, 1000, 777);
    WorkDistribution more = tpm_work_distribution_sampled(p, beta, 8, 1000, 777);
    CHECK(again.samples == more.samples);

    CHECK_THROWS_AS(tpm_work_distribution_sampled(p, beta, 8, 0, 1), std::domain_error);
}
