#include "freespec/spectra.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "freespec/errors.hpp"
#include "freespec/quadrature.hpp"

namespace freespec {

namespace {

// Fraction of the mean density (mass over grid span) below which values are
// treated as tail noise when rebuilding the support. A fraction of the peak
// would misbehave for laws with an integrable singularity, whose peak grows
// without bound as the grid refines.
constexpr double kSupportCutoffFraction = 1e-2;

double support_cutoff(const SpectralDensity& d) {
  const double span = d.grid.back() - d.grid.front();
  return kSupportCutoffFraction * d.integral() / span;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double SpectralDensity::integral() const {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    acc += 0.5 * (grid[i + 1] - grid[i]) * (values[i] + values[i + 1]);
  }
  return acc;
}

double SpectralDensity::max_value() const {
  double m = 0.0;
  for (double v : values) {
    m = std::max(m, v);
  }
  return m;
}

void SpectralDensity::validate() const {
  if (grid.size() != values.size() || grid.size() < 2) {
    throw ContractViolation("density grid and values must match, length >= 2");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ContractViolation("density grid must be strictly ascending");
    }
  }
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ContractViolation("density values must be finite and non-negative");
    }
  }
  const double mass = integral();
  if (mass < 0.99 || mass > 1.01) {
    throw NumericError("density mass " + std::to_string(mass) +
                       " outside [0.99, 1.01]");
  }
}

std::string SpectralDensity::to_csv() const {
  std::string out = "x,rho\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out += format_double(grid[i]);
    out += ',';
    out += format_double(values[i]);
    out += '\n';
  }
  return out;
}

SpectralDensity SpectralDensity::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "x,rho") {
    throw ParseError("density CSV must start with header 'x,rho'");
  }
  SpectralDensity d;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) {
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("density CSV row " + std::to_string(row) +
                       " is missing a comma");
    }
    try {
      d.grid.push_back(std::stod(line.substr(0, comma)));
      d.values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError("density CSV row " + std::to_string(row) +
                       " is not numeric");
    }
  }
  if (d.grid.size() < 2) {
    throw ParseError("density CSV needs at least two rows");
  }
  // Rebuild support from the stored values with the standard cutoff.
  const double cutoff = support_cutoff(d);
  std::size_t first = d.grid.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    if (d.values[i] > cutoff) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first > last) {
    throw ParseError("density CSV has no positive values");
  }
  d.support = {d.grid[first], d.grid[last]};
  return d;
}

void SpectralDensity::save_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ContractViolation("cannot open " + path + " for writing");
  }
  out << to_csv();
}

SpectralDensity SpectralDensity::load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_csv(buf.str());
}

void MpParams::validate() const {
  if (!(sigma2 > 0.0)) {
    throw ContractViolation("sigma2 must be positive");
  }
  if (!(c > 0.0) || c > 1.0) {
    throw ContractViolation("aspect ratio c must lie in (0, 1]");
  }
}

double MpParams::lower_edge() const {
  const double s = std::sqrt(c);
  return sigma2 * (1.0 - s) * (1.0 - s);
}

double MpParams::upper_edge() const {
  const double s = std::sqrt(c);
  return sigma2 * (1.0 + s) * (1.0 + s);
}

SpectralDensity mp_density(const MpParams& p, int grid_points) {
  p.validate();
  if (grid_points < 64) {
    throw ContractViolation("mp_density needs at least 64 grid points");
  }
  const double a = p.lower_edge();
  const double b = p.upper_edge();
  SpectralDensity d;
  d.grid = graded_grid(a, b, grid_points);
  d.values.resize(d.grid.size());
  const double denom0 = 2.0 * std::numbers::pi * p.sigma2 * p.c;
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    const double x = d.grid[i];
    const double rad = (b - x) * (x - a);
    d.values[i] = (rad > 0.0 && x > 0.0) ? std::sqrt(rad) / (denom0 * x) : 0.0;
  }
  d.support = {a, b};
  d.validate();
  return d;
}

Complex cauchy_transform(const SpectralDensity& d, Complex z) {
  if (!(z.imag() > 0.0)) {
    throw ContractViolation("cauchy_transform requires Im z > 0");
  }
  const auto weights = trapezoid_weights(d.grid);
  Complex acc = 0.0;
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    acc += weights[i] * d.values[i] / (z - d.grid[i]);
  }
  if (!(acc.imag() < 0.0)) {
    throw NumericError("cauchy_transform lost the half-plane property");
  }
  return acc;
}

Complex mp_cauchy_closed(const MpParams& p, Complex z) {
  p.validate();
  if (!(z.imag() > 0.0)) {
    throw ContractViolation("mp_cauchy_closed requires Im z > 0");
  }
  const Complex w = z + p.sigma2 * (p.c - 1.0);
  const Complex disc = w * w - 4.0 * p.sigma2 * p.c * z;
  const Complex root = std::sqrt(disc);
  const Complex denom = 2.0 * p.sigma2 * p.c * z;
  Complex g = (w - root) / denom;
  if (!(g.imag() < 0.0)) {
    g = (w + root) / denom;
  }
  if (!(g.imag() < 0.0)) {
    throw NumericError("mp_cauchy_closed branch selection failed");
  }
  return g;
}

SpectralDensity stieltjes_invert(const std::function<Complex(Complex)>& g,
                                 const std::vector<double>& grid, double eps) {
  if (!(eps > 0.0) || eps > 0.1) {
    throw ContractViolation("inversion height eps must lie in (0, 0.1]");
  }
  if (grid.size() < 2) {
    throw ContractViolation("inversion grid needs at least two points");
  }
  SpectralDensity d;
  d.grid = grid;
  d.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex v = g(Complex(grid[i], eps));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericError("transform is not finite at x = " +
                         std::to_string(grid[i]));
    }
    d.values[i] = std::max(0.0, -v.imag() / std::numbers::pi);
  }
  const double cutoff = support_cutoff(d);
  std::size_t first = grid.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (d.values[i] > cutoff) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first > last) {
    throw NumericError("recovered density is identically zero");
  }
  d.support = {grid[first], grid[last]};
  for (std::size_t i = 0; i < first; ++i) {
    d.values[i] = 0.0;
  }
  for (std::size_t i = last + 1; i < grid.size(); ++i) {
    d.values[i] = 0.0;
  }
  return d;
}

}  // namespace freespec
