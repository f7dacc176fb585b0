#include "freespec/battery.hpp"

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "freespec/errors.hpp"
#include "freespec/free_operator.hpp"
#include "freespec/free_scalar.hpp"

namespace freespec {

namespace {

// Trial-noise parent stream; scenario series use streams 1 and 2.
constexpr std::uint64_t kTrialStream = 3;

// Target spike strengths for the two ramp scenarios. Both sit above the
// detectability transition of a single standardized covariance (strength 1)
// but low enough that the lone-window outlier stays inside the detection
// margin; fusing with the reference window doubles the spike and exposes it.
constexpr double kRampAStrength = 1.19;
constexpr double kRampBStrength = 1.26;

std::vector<int> index_range(int lo, int hi) {
  std::vector<int> idx(hi - lo);
  std::iota(idx.begin(), idx.end(), lo);
  return idx;
}

}  // namespace

std::string campaign_window_label(int index) {
  if (index < 0 || index >= static_cast<int>(kCampaignWindowStarts.size())) {
    throw ContractViolation("window index outside 0..5");
  }
  return "V" + std::to_string(index);
}

double ramp_magnitude(double strength, double eta, int k, long window_start,
                      long onset, long total) {
  if (!(strength > 0.0) || k < 1) {
    throw ContractViolation("ramp strength must be positive over >= 1 nodes");
  }
  const double fraction = strength / k;
  if (!(fraction < 1.0)) {
    throw ContractViolation("per-node signal fraction must stay below 1");
  }
  // Signal variance that occupies `fraction` of a standardized row whose
  // remaining variance is 1 (baseline) + eta^2 (trial noise).
  const double signal_var = fraction * (1.0 + eta * eta) / (1.0 - fraction);

  // Deviation of the ramp profile across the analysis window.
  const double span = static_cast<double>(total - onset);
  double mean = 0.0;
  for (long t = window_start; t < window_start + kCampaignWindowLength; ++t) {
    mean += static_cast<double>(t - onset) / span;
  }
  mean /= static_cast<double>(kCampaignWindowLength);
  double var = 0.0;
  for (long t = window_start; t < window_start + kCampaignWindowLength; ++t) {
    const double p = static_cast<double>(t - onset) / span;
    var += (p - mean) * (p - mean);
  }
  var /= static_cast<double>(kCampaignWindowLength);
  return std::sqrt(signal_var / var);
}

std::vector<BatteryScenario> default_battery(std::uint64_t seed) {
  std::vector<BatteryScenario> battery;

  BatteryScenario noise;
  noise.label = "noise";
  noise.spec.kind = ScenarioKind::Noise;
  noise.spec.total_samples = kCampaignTotalSamples;
  noise.spec.n_nodes = kCampaignNodes;
  noise.spec.seed = seed;
  noise.window_start = kCampaignWindowStarts[5];
  noise.eta = 4.0;
  battery.push_back(noise);

  BatteryScenario ramp_a;
  ramp_a.label = "rampA";
  ramp_a.spec.kind = ScenarioKind::Ramp;
  ramp_a.spec.target_nodes = index_range(30, 40);
  ramp_a.spec.onset = 0;
  ramp_a.spec.total_samples = kCampaignTotalSamples;
  ramp_a.spec.n_nodes = kCampaignNodes;
  ramp_a.spec.seed = seed;
  ramp_a.window_start = kCampaignWindowStarts[2];
  ramp_a.eta = 4.0;
  ramp_a.spec.magnitude =
      ramp_magnitude(kRampAStrength, ramp_a.eta, 10, ramp_a.window_start, 0,
                     kCampaignTotalSamples);
  battery.push_back(ramp_a);

  BatteryScenario ramp_b;
  ramp_b.label = "rampB";
  ramp_b.spec.kind = ScenarioKind::Ramp;
  ramp_b.spec.target_nodes = index_range(30, 50);
  ramp_b.spec.onset = 0;
  ramp_b.spec.total_samples = kCampaignTotalSamples;
  ramp_b.spec.n_nodes = kCampaignNodes;
  ramp_b.spec.seed = seed;
  ramp_b.window_start = kCampaignWindowStarts[3];
  ramp_b.eta = 4.0;
  ramp_b.spec.magnitude =
      ramp_magnitude(kRampBStrength, ramp_b.eta, 20, ramp_b.window_start, 0,
                     kCampaignTotalSamples);
  battery.push_back(ramp_b);

  BatteryScenario step;
  step.label = "step";
  step.spec.kind = ScenarioKind::Step;
  step.spec.target_nodes = index_range(20, 30);
  step.spec.magnitude = 6.0;
  step.spec.onset = 900;
  step.spec.total_samples = kCampaignTotalSamples;
  step.spec.n_nodes = kCampaignNodes;
  step.spec.seed = seed;
  step.window_start = kCampaignWindowStarts[1];
  step.eta = 4.0;
  battery.push_back(step);

  // The collapse series ends shortly after onset so the analysis window
  // straddles the variance blow-up.
  BatteryScenario collapse;
  collapse.label = "collapse";
  collapse.spec.kind = ScenarioKind::Collapse;
  collapse.spec.target_nodes = index_range(0, kCampaignNodes);
  collapse.spec.magnitude = 1.0;
  collapse.spec.onset = 3985;
  collapse.spec.total_samples = 4030;
  collapse.spec.n_nodes = kCampaignNodes;
  collapse.spec.seed = seed;
  collapse.window_start = kCampaignWindowStarts[4];
  collapse.eta = 1.0;
  battery.push_back(collapse);

  return battery;
}

std::string battery_to_json(const std::vector<BatteryScenario>& battery) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const BatteryScenario& s : battery) {
    nlohmann::ordered_json j;
    j["label"] = s.label;
    j["spec"] = nlohmann::ordered_json::parse(s.spec.to_json());
    j["window_start"] = s.window_start;
    j["eta"] = s.eta;
    arr.push_back(j);
  }
  return arr.dump(2);
}

std::vector<BatteryScenario> battery_from_json(const std::string& text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("battery JSON: ") + e.what());
  }
  if (!arr.is_array() || arr.empty()) {
    throw ParseError("battery JSON must be a non-empty array");
  }
  std::vector<BatteryScenario> battery;
  for (const auto& j : arr) {
    BatteryScenario s;
    try {
      s.label = j.at("label").get<std::string>();
      s.spec = ScenarioSpec::from_json(j.at("spec").dump());
      s.window_start = j.at("window_start").get<long>();
      s.eta = j.at("eta").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("battery JSON fields: ") + e.what());
    }
    battery.push_back(std::move(s));
  }
  return battery;
}

SpectralDensity bound_for(PolyId id, int n, int t) {
  if (n < 1 || t < 2) {
    throw ContractViolation("bound needs n >= 1 and t >= 2");
  }
  MpParams mp;
  mp.sigma2 = 1.0;
  mp.c = static_cast<double>(n) / static_cast<double>(t);
  switch (id) {
    case PolyId::P0:
      return mp_density(mp, 2000);
    case PolyId::P1:
      return asd_p1(mp, mp, default_p1_grid(mp, mp));
    default:
      return asd_p2(mp, mp, default_p2_grid(mp, mp));
  }
}

BatteryResult run_battery(const std::vector<BatteryScenario>& battery,
                          PolyId id, int trials, int bins, double margin_frac,
                          double min_fraction) {
  if (battery.empty()) {
    throw ContractViolation("battery must not be empty");
  }
  BatteryResult result;
  std::vector<LabeledReport> labeled;
  for (const BatteryScenario& s : battery) {
    const TimeSeries ts = generate_scenario(s.spec);
    const DataMatrix v0 =
        sample_window(ts, kCampaignWindowStarts[0], kCampaignWindowLength);
    const DataMatrix vi =
        sample_window(ts, s.window_start, kCampaignWindowLength);
    if (result.bound.grid.empty()) {
      result.bound = bound_for(id, static_cast<int>(vi.rows()),
                               static_cast<int>(vi.cols()));
    }
    std::vector<double> eigs;
    ScenarioOutcome outcome;
    outcome.label = s.label;
    outcome.hist = empirical_spectrum(v0, vi, id, trials, s.eta, bins,
                                      RngStream{s.spec.seed, kTrialStream},
                                      &eigs);
    outcome.report =
        detect(eigs, result.bound, margin_frac, min_fraction);
    labeled.push_back({s.label, outcome.report});
    result.outcomes.push_back(std::move(outcome));
  }
  result.severity = severity_rank(labeled);
  return result;
}

}  // namespace freespec
