#pragma once

#include <functional>
#include <string>
#include <vector>

#include "freespec/linalg.hpp"

namespace freespec {

struct SupportInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// Absolutely continuous spectral measure sampled on an ascending grid.
// Values vanish outside [support.lo, support.hi] and the trapezoid mass of a
// valid density is 1 within 1%.
struct SpectralDensity {
  std::vector<double> grid;
  std::vector<double> values;
  SupportInterval support;

  double integral() const;
  double max_value() const;
  void validate() const;

  // CSV with header "x,rho", one row per grid point, 17 significant digits.
  std::string to_csv() const;
  static SpectralDensity from_csv(const std::string& text);
  void save_csv(const std::string& path) const;
  static SpectralDensity load_csv(const std::string& path);
};

// Covariance spectrum parameters: variance sigma2 > 0 and aspect ratio
// c = N/T in (0, 1]. Support edges are sigma2 * (1 -+ sqrt(c))^2.
struct MpParams {
  double sigma2 = 1.0;
  double c = 1.0;

  void validate() const;
  double lower_edge() const;
  double upper_edge() const;
};

// Density sqrt((b - x)(x - a)) / (2 pi sigma2 c x) on [a, b]. The grid is
// graded toward the lower edge, where the c = 1 density diverges like
// 1/sqrt(x); edge values take the limit 0 of the numerator convention.
SpectralDensity mp_density(const MpParams& p, int grid_points);

// Quadrature Stieltjes transform of a sampled density at Im z > 0.
Complex cauchy_transform(const SpectralDensity& d, Complex z);

// Closed-form Stieltjes transform of the covariance law, branch chosen so
// that Im G < 0 on the upper half-plane.
Complex mp_cauchy_closed(const MpParams& p, Complex z);

// Recover a density from a transform: rho(x) = max(0, -Im g(x + i eps) / pi).
// Support is the smallest interval holding all values above a small fraction
// of the mean density; values outside it are cleared. No mass rescaling.
SpectralDensity stieltjes_invert(const std::function<Complex(Complex)>& g,
                                 const std::vector<double>& grid, double eps);

// Default smoothing height for density recovery.
inline constexpr double kInversionHeight = 1e-4;

}  // namespace freespec
