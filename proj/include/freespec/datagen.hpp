#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freespec/empirical.hpp"

namespace freespec {

enum class ScenarioKind { Reference, Step, Ramp, Collapse, Noise };

ScenarioKind scenario_kind_from_string(const std::string& s);
std::string scenario_kind_to_string(ScenarioKind k);

// Recipe for one synthetic measurement series. The baseline is V = Xi * P
// with P i.i.d. standard normal and Xi = I + 0.1 * G / sqrt(N) fixed per
// seed; event kinds add a deterministic signal on target_nodes from onset on.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Reference;
  std::vector<int> target_nodes;
  double magnitude = 0.0;
  long onset = 0;
  long total_samples = 0;
  int n_nodes = 0;
  std::uint64_t seed = 0;

  void validate() const;
  std::string to_json() const;
  static ScenarioSpec from_json(const std::string& text);
};

struct TimeSeries {
  DataMatrix entries;

  Eigen::Index n_nodes() const { return entries.rows(); }
  Eigen::Index total_samples() const { return entries.cols(); }
};

TimeSeries generate_scenario(const ScenarioSpec& spec);

// The N x length slice of columns [start, start + length).
DataMatrix sample_window(const TimeSeries& ts, long start, long length);

// Header-less rectangular CSV, rows = nodes, columns = samples, 17
// significant digits.
void save_csv(const DataMatrix& m, const std::string& path);
DataMatrix load_csv(const std::string& path);

}  // namespace freespec
