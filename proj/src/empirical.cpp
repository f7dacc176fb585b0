#include "freespec/empirical.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "freespec/errors.hpp"
#include "freespec/linalg.hpp"

namespace freespec {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_window(const DataMatrix& v, const char* who) {
  if (v.rows() < 2 || v.cols() < 2) {
    throw ContractViolation(std::string(who) + " needs at least 2x2 data");
  }
  if (!v.allFinite()) {
    throw ContractViolation(std::string(who) + " has non-finite entries");
  }
}

}  // namespace

PolyId poly_from_string(const std::string& s) {
  if (s == "p0" || s == "P0") {
    return PolyId::P0;
  }
  if (s == "p1" || s == "P1") {
    return PolyId::P1;
  }
  if (s == "p2" || s == "P2") {
    return PolyId::P2;
  }
  throw ContractViolation("unknown polynomial id '" + s + "'");
}

std::string poly_to_string(PolyId id) {
  switch (id) {
    case PolyId::P0:
      return "p0";
    case PolyId::P1:
      return "p1";
    default:
      return "p2";
  }
}

DataMatrix standardize(const DataMatrix& v) {
  check_window(v, "standardize");
  const Eigen::Index n = v.rows();
  const Eigen::Index t = v.cols();
  DataMatrix out(n, t);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = v.row(i).mean();
    const double ss = (v.row(i).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(t - 1));
    if (!(sd > 0.0)) {
      throw DegenerateRowError(static_cast<int>(i));
    }
    out.row(i) = (v.row(i).array() - mean) / sd;
  }
  return out;
}

DataMatrix add_noise(const DataMatrix& v, double eta, RngStream rng) {
  check_window(v, "add_noise");
  if (!(eta > 0.0)) {
    throw ContractViolation("noise level eta must be positive");
  }
  GaussianSampler sampler(rng);
  return v + eta * sampler.matrix(static_cast<int>(v.rows()),
                                  static_cast<int>(v.cols()));
}

Eigen::MatrixXd covariance(const DataMatrix& v) {
  check_window(v, "covariance");
  const Eigen::MatrixXd raw =
      (v * v.transpose()) / static_cast<double>(v.cols());
  // Commutative pairwise mean keeps the result exactly symmetric.
  return 0.5 * (raw + raw.transpose());
}

Eigen::MatrixXd eval_polynomial(PolyId id, const Eigen::MatrixXd& s0,
                                const Eigen::MatrixXd& s1) {
  if (s0.rows() != s1.rows() || s0.cols() != s1.cols() ||
      s0.rows() != s0.cols()) {
    throw ContractViolation("polynomial inputs must be square, equal order");
  }
  switch (id) {
    case PolyId::P0:
      return s1;
    case PolyId::P1:
      return s0 + s1;
    default: {
      const Eigen::MatrixXd cross = s0 * s1;
      return cross + cross.transpose();
    }
  }
}

void Histogram::validate() const {
  if (bin_edges.size() < 2 || counts.size() + 1 != bin_edges.size() ||
      density.size() != counts.size()) {
    throw ContractViolation("histogram shape mismatch");
  }
  long sum = 0;
  for (long c : counts) {
    if (c < 0) {
      throw ContractViolation("histogram counts must be non-negative");
    }
    sum += c;
  }
  if (sum != total) {
    throw ContractViolation("histogram counts do not sum to total");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    mass += density[i] * (bin_edges[i + 1] - bin_edges[i]);
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    throw ContractViolation("histogram density mass deviates from 1");
  }
}

std::string Histogram::to_csv() const {
  std::string out = "bin_lo,bin_hi,count,density\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out += format_double(bin_edges[i]);
    out += ',';
    out += format_double(bin_edges[i + 1]);
    out += ',';
    out += std::to_string(counts[i]);
    out += ',';
    out += format_double(density[i]);
    out += '\n';
  }
  return out;
}

Histogram Histogram::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "bin_lo,bin_hi,count,density") {
    throw ParseError("histogram CSV must start with its four-column header");
  }
  Histogram h;
  int row = 1;
  double prev_hi = 0.0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) {
      continue;
    }
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> parts;
    while (std::getline(cells, cell, ',')) {
      parts.push_back(cell);
    }
    if (parts.size() != 4) {
      throw ParseError("histogram CSV row " + std::to_string(row) +
                       " needs four cells");
    }
    try {
      const double lo = std::stod(parts[0]);
      const double hi = std::stod(parts[1]);
      const long count = std::stol(parts[2]);
      const double dens = std::stod(parts[3]);
      if (h.bin_edges.empty()) {
        h.bin_edges.push_back(lo);
      } else if (std::abs(lo - prev_hi) > 1e-12 * (1.0 + std::abs(lo))) {
        throw ParseError("histogram CSV row " + std::to_string(row) +
                         " is not contiguous");
      }
      h.bin_edges.push_back(hi);
      h.counts.push_back(count);
      h.density.push_back(dens);
      h.total += count;
      prev_hi = hi;
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("histogram CSV row " + std::to_string(row) +
                       " is not numeric");
    }
  }
  h.validate();
  return h;
}

void Histogram::save_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ContractViolation("cannot open " + path + " for writing");
  }
  out << to_csv();
}

Histogram Histogram::load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_csv(buf.str());
}

Histogram make_histogram(const std::vector<double>& samples, int bins) {
  if (samples.empty()) {
    throw ContractViolation("histogram needs at least one sample");
  }
  if (bins < 1) {
    throw ContractViolation("histogram needs at least one bin");
  }
  double lo = samples[0];
  double hi = samples[0];
  for (double s : samples) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  double range = hi - lo;
  if (range <= 0.0) {
    range = 1.0;
  }
  lo -= 0.01 * range;
  hi += 0.01 * range;
  const double width = (hi - lo) / bins;

  Histogram h;
  h.bin_edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) {
    h.bin_edges[i] = lo + width * i;
  }
  h.counts.assign(bins, 0);
  for (double s : samples) {
    int idx = static_cast<int>((s - lo) / width);
    idx = std::max(0, std::min(bins - 1, idx));
    ++h.counts[idx];
  }
  h.total = static_cast<long>(samples.size());
  h.density.resize(bins);
  for (int i = 0; i < bins; ++i) {
    h.density[i] = static_cast<double>(h.counts[i]) /
                   (static_cast<double>(h.total) * width);
  }
  h.validate();
  return h;
}

Histogram empirical_spectrum(const DataMatrix& v0, const DataMatrix& v1,
                             PolyId id, int trials, double eta, int bins,
                             RngStream rng, std::vector<double>* eigs_out) {
  check_window(v0, "empirical_spectrum");
  check_window(v1, "empirical_spectrum");
  if (v0.rows() != v1.rows() || v0.cols() != v1.cols()) {
    throw ContractViolation("windows must share one shape");
  }
  if (trials < 1) {
    throw ContractViolation("empirical_spectrum needs trials >= 1");
  }
  if (eta < 0.0) {
    throw ContractViolation("noise level eta must be non-negative");
  }
  const int n = static_cast<int>(v0.rows());
  std::vector<double> eigs;
  eigs.reserve(static_cast<std::size_t>(trials) * n);
  for (int trial = 0; trial < trials; ++trial) {
    GaussianSampler sampler(rng.child(static_cast<std::uint64_t>(trial)));
    DataMatrix n0;
    DataMatrix n1;
    try {
      n0 = standardize(v0 + eta * sampler.matrix(n, static_cast<int>(v0.cols())));
      n1 = standardize(v1 + eta * sampler.matrix(n, static_cast<int>(v1.cols())));
    } catch (const DegenerateRowError& e) {
      throw DegenerateRowError(e.row, "trial " + std::to_string(trial));
    }
    const Eigen::MatrixXd s0 = covariance(n0);
    const Eigen::MatrixXd s1 = covariance(n1);
    const Eigen::MatrixXd poly = eval_polynomial(id, s0, s1);
    const Eigen::VectorXd vals = hermitian_eigenvalues(poly);
    for (int i = 0; i < n; ++i) {
      eigs.push_back(vals[i]);
    }
  }
  if (eigs_out != nullptr) {
    *eigs_out = eigs;
  }
  return make_histogram(eigs, bins);
}

}  // namespace freespec
