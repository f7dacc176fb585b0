#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "freespec/datagen.hpp"
#include "freespec/detection.hpp"
#include "freespec/empirical.hpp"

namespace freespec {

// Sampling geometry of the synthetic measurement campaign: six windows of
// 118 nodes x 118 samples cut from a 5500-sample series.
inline constexpr int kCampaignNodes = 118;
inline constexpr long kCampaignWindowLength = 118;
inline constexpr long kCampaignTotalSamples = 5500;
inline constexpr std::array<long, 6> kCampaignWindowStarts = {100,  850,  2200,
                                                              3300, 3900, 4400};

std::string campaign_window_label(int index);  // "V0" .. "V5"

// One labeled battery entry: the scenario recipe, the analysis window, and
// the measurement-noise level injected per Monte Carlo trial.
struct BatteryScenario {
  std::string label;
  ScenarioSpec spec;
  long window_start = 0;
  double eta = 1.0;
};

// Raw ramp amplitude that gives each target row a signal-variance fraction
// of strength/k over the analysis window, so the k pooled target rows carry
// a spike of strength `strength` after row standardization.
double ramp_magnitude(double strength, double eta, int k, long window_start,
                      long onset, long total);

// The five-scenario default battery sharing one base seed: noise, two ramps
// of increasing strength, a step, and a variance collapse.
std::vector<BatteryScenario> default_battery(std::uint64_t seed);

std::string battery_to_json(const std::vector<BatteryScenario>& battery);
std::vector<BatteryScenario> battery_from_json(const std::string& text);

// Theoretical bound for the chosen statistic at window shape n x t.
SpectralDensity bound_for(PolyId id, int n, int t);

struct ScenarioOutcome {
  std::string label;
  Histogram hist;
  DetectionReport report;
};

struct BatteryResult {
  SpectralDensity bound;
  std::vector<ScenarioOutcome> outcomes;
  std::vector<std::string> severity;  // labels ascending by upper excess
};

// Full pipeline over the battery: per scenario, pooled eigenvalues of the
// chosen statistic over `trials` noise injections, detection against the
// shared bound, then a severity ranking.
BatteryResult run_battery(const std::vector<BatteryScenario>& battery,
                          PolyId id, int trials = 100, int bins = 100,
                          double margin_frac = kDefaultMarginFrac,
                          double min_fraction = kDefaultMinFraction);

}  // namespace freespec
