#include <doctest.h>

#include <complex>
#include <random>

#include "qwr/operator_core.hpp"

using namespace qwr;

namespace {

ComplexMatrix random_complex(Eigen::Index d, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    ComplexMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(normal(rng), normal(rng));
    return m;
}

ComplexMatrix random_hermitian(Eigen::Index d, std::mt19937_64& rng, double scale = 1.0) {
    ComplexMatrix m = random_complex(d, rng, scale);
    return 0.5 * (m + m.adjoint().eval());
}

// independent oracle for the largest singular value: power iteration on A^dagger A
double power_iteration_norm(const ComplexMatrix& a) {
    ComplexMatrix ata = a.adjoint() * a;
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(a.cols());
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 5000; ++it) {
        Eigen::VectorXcd w = ata * v;
        double next = w.norm();
        if (std::abs(next - lambda) < 1e-14 * std::max(1.0, next)) {
            lambda = next;
            break;
        }
        lambda = next;
        v = w / next;
    }
    return std::sqrt(lambda);
}

}  // namespace

TEST_CASE("eig_hermitian on diagonal and Pauli-x matrices") {
    ComplexMatrix d3 = ComplexMatrix::Zero(3, 3);
    d3(0, 0) = 3.0; d3(1, 1) = 1.0; d3(2, 2) = 2.0;
    Spectrum s = eig_hermitian(d3);
    CHECK(s.values(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.values(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.values(2) == doctest::Approx(3.0).epsilon(1e-12));

    ComplexMatrix sx(2, 2);
    sx << 0, 1, 1, 0;
    Spectrum sp = eig_hermitian(sx);
    // roots of lambda^2 - 1 = 0
    CHECK(sp.values(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(sp.values(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral reconstruction and phase convention") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        ComplexMatrix h = random_hermitian(6, rng);
        Spectrum s = eig_hermitian(h);
        ComplexMatrix rebuilt =
            s.vectors * s.values.cast<Complex>().asDiagonal() * s.vectors.adjoint();
        CHECK((rebuilt - h).norm() <= 1e-10 * h.norm());
        for (Eigen::Index k = 0; k < 6; ++k) {
            Eigen::Index imax = 0;
            s.vectors.col(k).cwiseAbs().maxCoeff(&imax);
            CHECK(s.vectors(imax, k).imag() == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(s.vectors(imax, k).real() > 0.0);
        }
    }
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m << 0, 1, 2, 0;
    CHECK_THROWS_AS(eig_hermitian(m), std::domain_error);
    CHECK_THROWS_AS((void)HermitianOperator(m), std::domain_error);
}

TEST_CASE("matrix_exponential basic values") {
    CHECK((matrix_exponential(ComplexMatrix::Zero(4, 4)) -
           ComplexMatrix::Identity(4, 4)).norm() <= 1e-14);

    ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
    diag(0, 0) = 0.7;
    diag(1, 1) = -1.3;
    ComplexMatrix e = matrix_exponential(diag);
    CHECK(e(0, 0).real() == doctest::Approx(std::exp(0.7)).epsilon(1e-12));
    CHECK(e(1, 1).real() == doctest::Approx(std::exp(-1.3)).epsilon(1e-12));
    CHECK(std::abs(e(0, 1)) <= 1e-14);
}

TEST_CASE("exp(-iHt) is unitary for Hermitian H") {
    std::mt19937_64 rng(12);
    for (double t : {0.1, 1.0, 7.0}) {
        ComplexMatrix h = random_hermitian(5, rng);
        ComplexMatrix u = matrix_exponential(Complex(0, -1) * t * h);
        CHECK((u.adjoint() * u - ComplexMatrix::Identity(5, 5)).norm() <= 1e-10);
    }
}

TEST_CASE("matrix_exponential range error on huge input") {
    ComplexMatrix big = 1e4 * ComplexMatrix::Identity(3, 3);
    CHECK_THROWS_AS(matrix_exponential(big), std::range_error);
}

TEST_CASE("operator_norm values and power-iteration oracle") {
    CHECK(operator_norm(ComplexMatrix::Identity(5, 5)) == doctest::Approx(1.0));
    ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
    diag(0, 0) = -3.0;
    diag(1, 1) = 2.0;
    CHECK(operator_norm(diag) == doctest::Approx(3.0));

    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        ComplexMatrix a = random_complex(6, rng);
        CHECK(operator_norm(a) ==
              doctest::Approx(power_iteration_norm(a)).epsilon(1e-8));
    }
}

TEST_CASE("theta conjugation structure") {
    std::mt19937_64 rng(14);
    ComplexMatrix real_m = random_hermitian(4, rng).real().cast<Complex>();
    CHECK((theta_conjugate(real_m) - real_m).norm() == 0.0);

    Eigen::MatrixXd g = random_hermitian(4, rng).real();
    ComplexMatrix odd = Complex(0, 1) * (g - g.transpose().eval()).cast<Complex>();
    CHECK((theta_conjugate(odd) + odd).norm() == 0.0);

    // involution and multiplicativity
    ComplexMatrix a = random_complex(4, rng), b = random_complex(4, rng);
    CHECK((theta_conjugate(theta_conjugate(a)) - a).norm() == 0.0);
    CHECK((theta_conjugate(a * b) - theta_conjugate(a) * theta_conjugate(b)).norm() <=
          1e-12 * (a.norm() * b.norm()));
}

TEST_CASE("theta commutes with the exponential") {
    std::mt19937_64 rng(15);
    for (int rep = 0; rep < 10; ++rep) {
        ComplexMatrix x = random_complex(5, rng);
        ComplexMatrix lhs = theta_conjugate(matrix_exponential(x));
        ComplexMatrix rhs = matrix_exponential(theta_conjugate(x));
        CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()));
    }
}

TEST_CASE("golden-thompson slack: commuting equality, 2x2 strictness, sweep") {
    ComplexMatrix da = ComplexMatrix::Zero(3, 3), db = ComplexMatrix::Zero(3, 3);
    da.diagonal() << 1.0, -0.5, 0.2;
    db.diagonal() << -2.0, 0.3, 1.1;
    CHECK(std::abs(golden_thompson_slack(HermitianOperator(da),
                                         HermitianOperator(db))) <= 1e-10);

    ComplexMatrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    CHECK(golden_thompson_slack(HermitianOperator(sx), HermitianOperator(sz)) > 0.0);

    std::mt19937_64 rng(16);
    for (int rep = 0; rep < 300; ++rep) {
        Eigen::Index d = 2 + rep % 7;
        HermitianOperator a(random_hermitian(d, rng));
        HermitianOperator b(random_hermitian(d, rng));
        double slack = golden_thompson_slack(a, b);
        double scale = std::max(
            1.0, std::abs(matrix_exponential(a.matrix() + b.matrix()).trace().real()));
        CHECK(slack >= -1e-9 * scale);
    }

    CHECK_THROWS_AS(golden_thompson_slack(HermitianOperator(sx), HermitianOperator(da)),
                    std::domain_error);
}

TEST_CASE("||exp(A)|| <= exp(||A||) for random matrices") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 300; ++rep) {
        ComplexMatrix a = random_complex(2 + rep % 7, rng);
        double lhs = operator_norm(matrix_exponential(a));
        double rhs = std::exp(operator_norm(a));
        CHECK(rhs - lhs >= -1e-9 * rhs);
    }
}
