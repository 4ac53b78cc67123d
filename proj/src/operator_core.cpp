#include "qwr/operator_core.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qwr {

namespace {

void require_square_finite(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw std::domain_error("matrix must be square and nonempty");
    if (!m.allFinite())
        throw std::domain_error("matrix has NaN/Inf entries");
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

void fix_phases(ComplexMatrix& vectors) {
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
        Eigen::Index imax = 0;
        vectors.col(k).cwiseAbs().maxCoeff(&imax);
        Complex pivot = vectors(imax, k);
        double mag = std::abs(pivot);
        if (mag > 0.0) vectors.col(k) *= std::conj(pivot) / mag;
    }
}

}  // namespace

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    double scale = max_abs(m);
    if (scale == 0.0) return true;
    return max_abs(ComplexMatrix(m - m.adjoint())) <= rel_tol * scale;
}

Spectrum eig_hermitian(const ComplexMatrix& hermitian) {
    require_square_finite(hermitian);
    if (!is_hermitian(hermitian))
        throw std::domain_error("eig_hermitian: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eig_hermitian: eigensolver failed");
    Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
    fix_phases(s.vectors);
    return s;
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : matrix_(std::move(m)) {
    require_square_finite(matrix_);
    if (!is_hermitian(matrix_))
        throw std::domain_error("HermitianOperator: matrix is not Hermitian");
    // Symmetrize away the allowed 1e-12 asymmetry so downstream identities
    // see an exactly Hermitian matrix.
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
    spectrum_ = eig_hermitian(matrix_);
}

UnitaryOperator::UnitaryOperator(ComplexMatrix m) : matrix_(std::move(m)) {
    require_square_finite(matrix_);
    const Eigen::Index d = matrix_.rows();
    ComplexMatrix defect = matrix_.adjoint() * matrix_ - ComplexMatrix::Identity(d, d);
    if (defect.norm() > 1e-10 * std::sqrt(static_cast<double>(d)))
        throw std::domain_error("UnitaryOperator: matrix is not unitary");
}

UnitaryOperator UnitaryOperator::identity(Eigen::Index dim) {
    return UnitaryOperator(ComplexMatrix::Identity(dim, dim));
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
    require_square_finite(a);
    if (a.norm() > 700.0)
        throw std::range_error("matrix_exponential: argument norm too large");
    if (is_hermitian(a)) {
        Spectrum s = eig_hermitian(a);
        return s.vectors * s.values.array().exp().matrix().asDiagonal() *
               s.vectors.adjoint();
    }
    ComplexMatrix ia = Complex(0, 1) * a;
    if (is_hermitian(ia)) {
        // a = -i H: exponential is unitary, exp(-i lambda) on the spectrum of H.
        Spectrum s = eig_hermitian(ia);
        Eigen::VectorXcd phases =
            (Complex(0, -1) * s.values.cast<Complex>().array()).exp();
        return s.vectors * phases.asDiagonal() * s.vectors.adjoint();
    }
    return a.exp();
}

double operator_norm(const ComplexMatrix& a) {
    require_square_finite(a);
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues()(0);
}

ComplexMatrix theta_conjugate(const ComplexMatrix& a) { return a.conjugate(); }

double golden_thompson_slack(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.dim() != b.dim())
        throw std::domain_error("golden_thompson_slack: dimension mismatch");
    ComplexMatrix ea = matrix_exponential(a.matrix());
    ComplexMatrix eb = matrix_exponential(b.matrix());
    ComplexMatrix eab = matrix_exponential(a.matrix() + b.matrix());
    return (ea * eb).trace().real() - eab.trace().real();
}

}  // namespace qwr
