#include "freespec/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "freespec/errors.hpp"
#include "freespec/rng.hpp"

namespace freespec {

namespace {

constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kMixingStream = 2;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ScenarioKind scenario_kind_from_string(const std::string& s) {
  if (s == "reference") {
    return ScenarioKind::Reference;
  }
  if (s == "step") {
    return ScenarioKind::Step;
  }
  if (s == "ramp") {
    return ScenarioKind::Ramp;
  }
  if (s == "collapse") {
    return ScenarioKind::Collapse;
  }
  if (s == "noise") {
    return ScenarioKind::Noise;
  }
  throw ContractViolation("unknown scenario kind '" + s + "'");
}

std::string scenario_kind_to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Reference:
      return "reference";
    case ScenarioKind::Step:
      return "step";
    case ScenarioKind::Ramp:
      return "ramp";
    case ScenarioKind::Collapse:
      return "collapse";
    default:
      return "noise";
  }
}

void ScenarioSpec::validate() const {
  if (n_nodes < 1) {
    throw ContractViolation("scenario needs n_nodes >= 1");
  }
  if (total_samples < 1) {
    throw ContractViolation("scenario needs total_samples >= 1");
  }
  if (onset < 0 || onset >= total_samples) {
    throw ContractViolation("scenario onset must lie in [0, total_samples)");
  }
  for (int node : target_nodes) {
    if (node < 0 || node >= n_nodes) {
      throw ContractViolation("target node " + std::to_string(node) +
                              " outside [0, " + std::to_string(n_nodes) + ")");
    }
  }
  if (magnitude < 0.0) {
    throw ContractViolation("scenario magnitude must be >= 0");
  }
  const bool pure = kind == ScenarioKind::Reference || kind == ScenarioKind::Noise;
  if (magnitude == 0.0 && !pure) {
    throw ContractViolation("zero magnitude is only valid for reference/noise");
  }
  if (!pure && target_nodes.empty()) {
    throw ContractViolation("event scenarios need at least one target node");
  }
}

std::string ScenarioSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = scenario_kind_to_string(kind);
  j["target_nodes"] = target_nodes;
  j["magnitude"] = magnitude;
  j["onset"] = onset;
  j["total_samples"] = total_samples;
  j["n_nodes"] = n_nodes;
  j["seed"] = seed;
  return j.dump(2);
}

ScenarioSpec ScenarioSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  ScenarioSpec spec;
  try {
    spec.kind = scenario_kind_from_string(j.at("kind").get<std::string>());
    spec.target_nodes = j.at("target_nodes").get<std::vector<int>>();
    spec.magnitude = j.at("magnitude").get<double>();
    spec.onset = j.at("onset").get<long>();
    spec.total_samples = j.at("total_samples").get<long>();
    spec.n_nodes = j.at("n_nodes").get<int>();
    spec.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario JSON fields: ") + e.what());
  }
  spec.validate();
  return spec;
}

TimeSeries generate_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const int n = spec.n_nodes;
  const long t_total = spec.total_samples;

  const DataMatrix noise = gaussian_matrix(RngStream{spec.seed, kNoiseStream},
                                           n, static_cast<int>(t_total));
  const Eigen::MatrixXd g =
      gaussian_matrix(RngStream{spec.seed, kMixingStream}, n, n);
  const Eigen::MatrixXd mixing =
      Eigen::MatrixXd::Identity(n, n) + 0.1 / std::sqrt(double(n)) * g;

  TimeSeries ts;
  ts.entries = mixing * noise;

  const double span = static_cast<double>(t_total - spec.onset);
  switch (spec.kind) {
    case ScenarioKind::Reference:
    case ScenarioKind::Noise:
      break;
    case ScenarioKind::Step:
      for (int node : spec.target_nodes) {
        for (long t = spec.onset; t < t_total; ++t) {
          ts.entries(node, t) += spec.magnitude;
        }
      }
      break;
    case ScenarioKind::Ramp:
      for (int node : spec.target_nodes) {
        for (long t = spec.onset; t < t_total; ++t) {
          const double progress = static_cast<double>(t - spec.onset) / span;
          ts.entries(node, t) += spec.magnitude * progress;
        }
      }
      break;
    case ScenarioKind::Collapse:
      for (int node : spec.target_nodes) {
        for (long t = spec.onset; t < t_total; ++t) {
          const double progress = static_cast<double>(t - spec.onset) / span;
          ts.entries(node, t) *= 1.0 + 4.0 * progress;
        }
      }
      break;
  }
  return ts;
}

DataMatrix sample_window(const TimeSeries& ts, long start, long length) {
  if (start < 0 || length < 1 || start + length > ts.total_samples()) {
    throw ContractViolation("window [" + std::to_string(start) + ", " +
                            std::to_string(start + length) +
                            ") outside the series");
  }
  return ts.entries.middleCols(start, length);
}

void save_csv(const DataMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ContractViolation("cannot open " + path + " for writing");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) {
        out << ',';
      }
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

DataMatrix load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    int col = 0;
    while (std::getline(cells, cell, ',')) {
      ++col;
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        while (used < cell.size() &&
               (cell[used] == ' ' || cell[used] == '\r')) {
          ++used;
        }
        if (used != cell.size()) {
          throw std::invalid_argument(cell);
        }
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(lineno) + ", column " +
                         std::to_string(col) + " is not numeric");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("row " + std::to_string(lineno) + " has " +
                       std::to_string(row.size()) + " cells, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) {
    throw ParseError(path + " holds no numeric data");
  }
  DataMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

}  // namespace freespec
