#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qwr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian operator: H = Q diag(values) Q^dagger,
/// eigenvalues ascending, each eigenvector's phase fixed so that its
/// largest-magnitude component is real and positive.
struct Spectrum {
    RealVector values;
    ComplexMatrix vectors;  // columns are eigenvectors
};

/// Hermitian matrix with an eagerly computed spectral decomposition.
/// Immutable after construction; safe to share across threads.
class HermitianOperator {
public:
    explicit HermitianOperator(ComplexMatrix m);

    Eigen::Index dim() const { return matrix_.rows(); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const Spectrum& spectrum() const { return spectrum_; }
    const RealVector& eigenvalues() const { return spectrum_.values; }
    const ComplexMatrix& eigenvectors() const { return spectrum_.vectors; }

private:
    ComplexMatrix matrix_;
    Spectrum spectrum_;
};

/// Unitary matrix wrapper; validates ||U^dagger U - I||_F <= 1e-10 sqrt(d).
class UnitaryOperator {
public:
    explicit UnitaryOperator(ComplexMatrix m);
    static UnitaryOperator identity(Eigen::Index dim);

    Eigen::Index dim() const { return matrix_.rows(); }
    const ComplexMatrix& matrix() const { return matrix_; }

private:
    ComplexMatrix matrix_;
};

bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12);

/// Deterministic Hermitian eigendecomposition with the phase convention above.
Spectrum eig_hermitian(const ComplexMatrix& hermitian);

/// exp(A). Hermitian and anti-Hermitian inputs go through the spectral
/// decomposition; everything else through scaling-and-squaring (Pade).
ComplexMatrix matrix_exponential(const ComplexMatrix& a);

/// Largest singular value; equals max |eigenvalue| for Hermitian input.
double operator_norm(const ComplexMatrix& a);

/// Theta A Theta with Theta = complex conjugation in the computational basis.
ComplexMatrix theta_conjugate(const ComplexMatrix& a);

/// Tr[e^A e^B] - Tr[e^{A+B}], nonnegative for Hermitian A, B (Golden-Thompson).
double golden_thompson_slack(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace qwr
