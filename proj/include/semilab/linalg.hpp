#pragma once

#include <Eigen/Dense>
#include <complex>

namespace semilab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Result of a positive-semidefiniteness test of the Hermitian part.
struct PsdVerdict {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
    double scale = 0.0;
};

/// Conjugate transpose.
ComplexMatrix hermitian_adjoint(const ComplexMatrix& m);

/// exp(t * a) by scaling and squaring with diagonal Pade approximants.
/// Throws std::overflow_error when the result is not representable.
ComplexMatrix matrix_exponential(const ComplexMatrix& a, double t = 1.0);

/// (lambda * I - a)^{-1}; throws std::domain_error when lambda is in the
/// spectrum of a.
ComplexMatrix resolvent(const ComplexMatrix& a, Complex lambda);

/// Tests the Hermitian part (m + m*)/2 for positive semidefiniteness with
/// threshold -tol * max(1, scale); throws std::domain_error when the
/// anti-Hermitian part of m exceeds 1e-6 times its scale.
PsdVerdict is_positive_semidefinite(const ComplexMatrix& m, double tol = 1e-9);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

}
