#pragma once

#include <string>
#include <vector>

#include "freespec/spectra.hpp"

namespace freespec {

enum class Decision { H0, H1 };

std::string decision_to_string(Decision d);

// Outcome of comparing an empirical spectrum against a theoretical bound.
// Excesses are measured from the raw support edges; the classification margin
// only decides which eigenvalues count as outliers. A lone outlier can
// therefore leave a positive excess on record while the fraction rule still
// returns H0.
struct DetectionReport {
  Decision decision = Decision::H0;
  long outlier_count = 0;
  double outlier_fraction = 0.0;
  double max_upper_excess = 0.0;
  double max_lower_excess = 0.0;
  SupportInterval support_used;
  std::vector<double> outliers;

  std::string to_json() const;
};

inline constexpr double kDefaultMarginFrac = 0.05;
inline constexpr double kDefaultMinFraction = 1e-3;

// Classify eigenvalues outside [lo - delta, hi + delta] with
// delta = margin_frac * (hi - lo) as outliers; H1 iff their fraction exceeds
// min_fraction.
DetectionReport detect(const std::vector<double>& eigs,
                       const SpectralDensity& bound,
                       double margin_frac = kDefaultMarginFrac,
                       double min_fraction = kDefaultMinFraction);

struct LabeledReport {
  std::string label;
  DetectionReport report;
};

// Labels sorted ascending by max_upper_excess; ties fall back to
// outlier_count, then to the label itself. The sort is stable.
std::vector<std::string> severity_rank(const std::vector<LabeledReport>& reports);

}  // namespace freespec
