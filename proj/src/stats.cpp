#include "freespec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "freespec/errors.hpp"

namespace freespec {

namespace {

struct CdfTable {
  std::vector<double> xs;
  std::vector<double> cs;

  double operator()(double x) const {
    if (x <= xs.front()) {
      return 0.0;
    }
    if (x >= xs.back()) {
      return 1.0;
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return cs[i] + t * (cs[i + 1] - cs[i]);
  }
};

CdfTable build_cdf_table(const SpectralDensity& d) {
  if (d.grid.size() < 2) {
    throw ContractViolation("cdf needs a density with at least two points");
  }
  CdfTable t;
  t.xs = d.grid;
  t.cs.resize(d.grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < d.grid.size(); ++i) {
    t.cs[i + 1] = t.cs[i] + 0.5 * (d.grid[i + 1] - d.grid[i]) *
                                (d.values[i] + d.values[i + 1]);
  }
  const double total = t.cs.back();
  if (!(total > 0.0)) {
    throw ContractViolation("cdf needs a density with positive mass");
  }
  for (double& c : t.cs) {
    c /= total;
  }
  return t;
}

}  // namespace

std::function<double(double)> density_cdf(const SpectralDensity& d) {
  auto table = std::make_shared<CdfTable>(build_cdf_table(d));
  return [table](double x) { return (*table)(x); };
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw ContractViolation("ks_distance needs at least one sample");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

std::vector<double> sample_density(const SpectralDensity& d, int n,
                                   RngStream rng) {
  if (n < 1) {
    throw ContractViolation("sample_density needs n >= 1");
  }
  const CdfTable table = build_cdf_table(d);
  std::mt19937_64 engine;
  std::seed_seq seq{static_cast<std::uint32_t>(rng.seed),
                    static_cast<std::uint32_t>(rng.seed >> 32),
                    static_cast<std::uint32_t>(rng.stream),
                    static_cast<std::uint32_t>(rng.stream >> 32)};
  engine.seed(seq);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    const double u =
        static_cast<double>((engine() >> 11) + 1) * 0x1.0p-53;
    const auto it = std::lower_bound(table.cs.begin(), table.cs.end(), u);
    std::size_t i = static_cast<std::size_t>(it - table.cs.begin());
    if (i == 0) {
      out[k] = table.xs.front();
      continue;
    }
    if (i >= table.cs.size()) {
      i = table.cs.size() - 1;
    }
    const double c0 = table.cs[i - 1];
    const double c1 = table.cs[i];
    const double t = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
    out[k] = table.xs[i - 1] + t * (table.xs[i] - table.xs[i - 1]);
  }
  return out;
}

}  // namespace freespec
