#pragma once

#include <string>

#include "freespec/free_scalar.hpp"
#include "freespec/linalg.hpp"
#include "freespec/spectra.hpp"

namespace freespec {

// Constant coefficients of the self-adjoint linearization of the symmetrized
// product 2 * sym(S0 S1): L = b0 (x) 1 + b1 (x) S0 + b2 (x) S1.
struct Linearization {
  Eigen::Matrix3d b0;
  Eigen::Matrix3d b1;
  Eigen::Matrix3d b2;
};

Linearization linearize_p2();

// Point of the 3x3 matrix upper half-plane: Im(b) positive definite.
struct OperatorPoint {
  ComplexMat3 b;

  void validate() const;
};

// diag(z, i eps, i eps); when Im z = 0 the first slot is lifted to x + i eps.
OperatorPoint lambda_eps(Complex z, double eps);

// Matrix-valued Cauchy transform: maps the matrix upper half-plane to the
// closed lower half-plane (-Im of the value is positive semidefinite).
struct OperatorTransform {
  std::function<ComplexMat3(const OperatorPoint&)> eval;
  std::string label;
};

// Transform of bj (x) s for s distributed by d: the quadrature of
// (b - t bj)^-1 against d over its grid.
ComplexMat3 tensor_cauchy(const Eigen::Matrix3d& bj, const SpectralDensity& d,
                          const OperatorPoint& b);

// Same transform with the covariance law as the scalar factor, evaluated in
// closed form by partial fractions in t. Exact for the rational integrand,
// stable when Im(b) has entries near machine small.
ComplexMat3 mp_tensor_cauchy(const Eigen::Matrix3d& bj, const MpParams& p,
                             const OperatorPoint& b);

// Matrix version of the reciprocal-shift map: g(b)^-1 - b.
ComplexMat3 operator_h(const OperatorTransform& g, const OperatorPoint& b);

struct OperatorSubordinationResult {
  ComplexMat3 w1;
  long iterations = 0;
  double residual = 0.0;
};

// Fixed point of w -> h_y(h_x(w) + b) + b over 3x3 matrices, iterated from
// w0 = b (or from *start when given; the fixed point is unique). On return
// Im(w1) - Im(b) is positive semidefinite within 1e-8.
OperatorSubordinationResult operator_subordinate(
    const OperatorTransform& gx, const OperatorTransform& gy,
    const OperatorPoint& b, double tol = 1e-9, long max_iter = 200000,
    const ComplexMat3* start = nullptr);

// Cauchy transform of L at b: subordination of the two tensor summands at
// the shifted point b - b0.
ComplexMat3 cauchy_L(const Linearization& lin, const SpectralDensity& d0,
                     const SpectralDensity& d1, const OperatorPoint& b,
                     double tol = 1e-9);

// Density of 2 * sym(S0 S1) for free covariance inputs, recovered on the
// given grid. eps regularizes the corner slots of the evaluation point; the
// inversion height is kInversionHeight.
SpectralDensity asd_p2(const MpParams& p0, const MpParams& p1,
                       const std::vector<double>& grid, double eps = 1e-6,
                       double tol = 1e-9);

// Uniform grid wide enough for the product spectrum of the two inputs.
std::vector<double> default_p2_grid(const MpParams& p0, const MpParams& p1,
                                    int points = 2500);

}  // namespace freespec
