#pragma once

#include <string>
#include <vector>

#include "freespec/empirical.hpp"
#include "freespec/spectra.hpp"

namespace freespec {

// SVG 1.1 overlay of theoretical densities (polylines) and empirical
// histograms (bar groups). Axis ranges cover the union of all inputs.
std::string render_svg(const std::vector<SpectralDensity>& densities,
                       const std::vector<Histogram>& histograms,
                       int width = 900, int height = 560);

}  // namespace freespec
