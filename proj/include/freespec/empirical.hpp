#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "freespec/rng.hpp"

namespace freespec {

// N x T measurement window: rows are nodes, columns are time samples.
using DataMatrix = Eigen::MatrixXd;

enum class PolyId { P0, P1, P2 };

PolyId poly_from_string(const std::string& s);
std::string poly_to_string(PolyId id);

// Row-wise affine normalization to mean 0 and unbiased sample variance 1.
DataMatrix standardize(const DataMatrix& v);

// v + eta * G with G i.i.d. standard normal from rng.
DataMatrix add_noise(const DataMatrix& v, double eta, RngStream rng);

// Sample covariance S = V V' / T of a standardized window.
Eigen::MatrixXd covariance(const DataMatrix& v);

// P0 = S1, P1 = S0 + S1, P2 = S0 S1 + S1 S0 (exactly symmetric by
// construction).
Eigen::MatrixXd eval_polynomial(PolyId id, const Eigen::MatrixXd& s0,
                                const Eigen::MatrixXd& s1);

// Empirical eigenvalue distribution over Monte Carlo trials.
struct Histogram {
  std::vector<double> bin_edges;
  std::vector<long> counts;
  long total = 0;
  std::vector<double> density;

  void validate() const;
  std::string to_csv() const;  // header "bin_lo,bin_hi,count,density"
  static Histogram from_csv(const std::string& text);
  void save_csv(const std::string& path) const;
  static Histogram load_csv(const std::string& path);
};

// Histogram over [min, max] padded by 1% of the range on each side.
Histogram make_histogram(const std::vector<double>& samples, int bins);

// Per trial: noise-inject both windows from a fresh child stream,
// standardize, form covariances, evaluate the polynomial, and pool all N
// eigenvalues. Pooled eigenvalues are returned through eigs_out when given.
Histogram empirical_spectrum(const DataMatrix& v0, const DataMatrix& v1,
                             PolyId id, int trials, double eta, int bins,
                             RngStream rng,
                             std::vector<double>* eigs_out = nullptr);

}  // namespace freespec
