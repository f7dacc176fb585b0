#include "freespec/linalg.hpp"

#include <cmath>

#include "freespec/errors.hpp"

namespace freespec {

Complex mat3_det(const ComplexMat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

ComplexMat3 mat3_adjugate(const ComplexMat3& m) {
  ComplexMat3 c;
  c(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  c(0, 1) = -(m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0));
  c(0, 2) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  c(1, 0) = -(m(0, 1) * m(2, 2) - m(0, 2) * m(2, 1));
  c(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  c(1, 2) = -(m(0, 0) * m(2, 1) - m(0, 1) * m(2, 0));
  c(2, 0) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  c(2, 1) = -(m(0, 0) * m(1, 2) - m(0, 2) * m(1, 0));
  c(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return c.transpose();
}

ComplexMat3 mat3_inverse(const ComplexMat3& m) {
  const Complex det = mat3_det(m);
  const double mag = std::abs(det);
  if (!(mag > 1e-300)) {
    throw SingularityError("3x3 inverse of a singular matrix", mag);
  }
  return mat3_adjugate(m) / det;
}

namespace {

template <typename Matrix>
Eigen::VectorXd hermitian_eigenvalues_impl(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) {
    throw ContractViolation("eigenvalue input must be square");
  }
  const double gap = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (gap > 1e-12) {
    throw ContractViolation("eigenvalue input is not Hermitian (max deviation " +
                            std::to_string(gap) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("Hermitian eigensolver failed at order " +
                       std::to_string(n));
  }
  Eigen::VectorXd vals = solver.eigenvalues();
  const double scale = m.cwiseAbs().maxCoeff();
  const double trace_gap = std::abs(vals.sum() - std::real(m.trace()));
  if (trace_gap > 1e-8 * static_cast<double>(n) * std::max(scale, 1.0)) {
    throw NumericError("eigenvalue sum deviates from trace by " +
                       std::to_string(trace_gap));
  }
  return vals;
}

}  // namespace

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  return hermitian_eigenvalues_impl(m);
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXd& m) {
  return hermitian_eigenvalues_impl(m);
}

}  // namespace freespec
