#pragma once

#include <string>

#include "freespec/spectra.hpp"

namespace freespec {

// Stieltjes transform of a probability measure: maps the upper half-plane
// into the lower half-plane.
struct ScalarTransform {
  std::function<Complex(Complex)> eval;
  std::string label;
};

// Closed-form transform of the covariance law.
ScalarTransform mp_transform(const MpParams& p);

// Reciprocal-shift map h(w) = 1/g(w) - w. For transforms of probability
// measures it maps the upper half-plane to its closure.
Complex h_transform(const ScalarTransform& g, Complex w);

struct SubordinationResult {
  Complex w1;
  Complex w2;
  int iterations = 0;
  double residual = 0.0;
};

// Subordination pair for the additive convolution of two measures at b with
// Im b > 0: w1 is the fixed point of w -> h_y(h_x(w) + b) + b iterated from
// w0 = b, and w2 = h_x(w1) + b solves the mirrored map. Both satisfy
// Im w >= Im b, and g_x(w1) = g_y(w2) is the transform of the sum at b.
SubordinationResult subordinate_pair(const ScalarTransform& gx,
                                     const ScalarTransform& gy, Complex b,
                                     double tol = 1e-10,
                                     long max_iter = 100000);

// Density of the additive convolution of two covariance laws, recovered on
// the given grid. eps is the inversion height; 1e-5 keeps the cutoff-based
// support edges sharp.
SpectralDensity asd_p1(const MpParams& p0, const MpParams& p1,
                       const std::vector<double>& grid, double eps = 1e-5,
                       double tol = 1e-10);

// Uniform grid over [0, (sqrt(b0) + sqrt(b1))^2 + 1] where b0, b1 are the
// upper support edges of the two inputs.
std::vector<double> default_p1_grid(const MpParams& p0, const MpParams& p1,
                                    int points = 2000);

}  // namespace freespec
