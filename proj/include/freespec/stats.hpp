#pragma once

#include <functional>
#include <vector>

#include "freespec/rng.hpp"
#include "freespec/spectra.hpp"

namespace freespec {

// Normalized cumulative distribution of a sampled density, piecewise linear
// between grid points, 0 below the grid and 1 above it.
std::function<double(double)> density_cdf(const SpectralDensity& d);

// Two-sided Kolmogorov-Smirnov distance between samples and a reference CDF.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

double standard_normal_cdf(double x);

// Inverse-CDF draws from a sampled density.
std::vector<double> sample_density(const SpectralDensity& d, int n,
                                   RngStream rng);

}  // namespace freespec
