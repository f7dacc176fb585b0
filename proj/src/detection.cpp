#include "freespec/detection.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "freespec/errors.hpp"

namespace freespec {

std::string decision_to_string(Decision d) {
  return d == Decision::H0 ? "H0" : "H1";
}

std::string DetectionReport::to_json() const {
  nlohmann::ordered_json j;
  j["decision"] = decision_to_string(decision);
  j["outlier_count"] = outlier_count;
  j["outlier_fraction"] = outlier_fraction;
  j["max_upper_excess"] = max_upper_excess;
  j["max_lower_excess"] = max_lower_excess;
  j["support_used"] = {support_used.lo, support_used.hi};
  j["outliers"] = outliers;
  return j.dump(2);
}

DetectionReport detect(const std::vector<double>& eigs,
                       const SpectralDensity& bound, double margin_frac,
                       double min_fraction) {
  if (eigs.empty()) {
    throw ContractViolation("detect needs at least one eigenvalue");
  }
  if (!(margin_frac >= 0.0) || !(min_fraction >= 0.0)) {
    throw ContractViolation("margin_frac and min_fraction must be >= 0");
  }
  const double lo = bound.support.lo;
  const double hi = bound.support.hi;
  if (!(hi > lo)) {
    throw ContractViolation("bound support is degenerate");
  }
  const double delta = margin_frac * (hi - lo);

  DetectionReport report;
  report.support_used = bound.support;
  for (double e : eigs) {
    if (e > hi + delta) {
      report.outliers.push_back(e);
      report.max_upper_excess = std::max(report.max_upper_excess, e - hi);
    } else if (e < lo - delta) {
      report.outliers.push_back(e);
      report.max_lower_excess = std::max(report.max_lower_excess, lo - e);
    }
  }
  report.outlier_count = static_cast<long>(report.outliers.size());
  report.outlier_fraction = static_cast<double>(report.outlier_count) /
                            static_cast<double>(eigs.size());
  report.decision = report.outlier_fraction > min_fraction ? Decision::H1
                                                           : Decision::H0;
  return report;
}

std::vector<std::string> severity_rank(
    const std::vector<LabeledReport>& reports) {
  if (reports.empty()) {
    throw ContractViolation("severity_rank needs at least one report");
  }
  std::vector<const LabeledReport*> order;
  order.reserve(reports.size());
  for (const LabeledReport& r : reports) {
    order.push_back(&r);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const LabeledReport* a, const LabeledReport* b) {
                     if (a->report.max_upper_excess !=
                         b->report.max_upper_excess) {
                       return a->report.max_upper_excess <
                              b->report.max_upper_excess;
                     }
                     if (a->report.outlier_count != b->report.outlier_count) {
                       return a->report.outlier_count <
                              b->report.outlier_count;
                     }
                     return a->label < b->label;
                   });
  std::vector<std::string> labels;
  labels.reserve(order.size());
  for (const LabeledReport* r : order) {
    labels.push_back(r->label);
  }
  return labels;
}

}  // namespace freespec
