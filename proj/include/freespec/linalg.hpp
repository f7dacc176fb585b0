#pragma once

#include <complex>

#include <Eigen/Dense>

namespace freespec {

using Complex = std::complex<double>;
using ComplexMat3 = Eigen::Matrix3cd;

// Determinant and adjugate of a 3x3 complex matrix by direct cofactors.
Complex mat3_det(const ComplexMat3& m);
ComplexMat3 mat3_adjugate(const ComplexMat3& m);

// Inverse by the adjugate formula. Requires |det| > 1e-300.
ComplexMat3 mat3_inverse(const ComplexMat3& m);

// Eigenvalues of a Hermitian matrix in ascending order. The input must equal
// its adjoint within 1e-12 per entry.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXd& m);

}  // namespace freespec
