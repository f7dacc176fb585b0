#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace freespec {

// Seeded, splittable random stream. Identical (seed, stream) pairs reproduce
// identical draws; distinct stream ids behave as independent streams.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  // Derived stream for sub-task k (for example, one per Monte Carlo trial).
  RngStream child(std::uint64_t k) const;
};

// Standard normal sampler over one stream. Gaussians come from Box-Muller on
// explicit 53-bit uniforms, so sequences do not depend on the standard
// library's distribution implementations.
class GaussianSampler {
 public:
  explicit GaussianSampler(RngStream s);

  double operator()();

  // rows x cols matrix of i.i.d. standard normals, filled row by row.
  Eigen::MatrixXd matrix(int rows, int cols);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// i.i.d. standard normal matrix drawn from a fresh sampler on rng.
Eigen::MatrixXd gaussian_matrix(RngStream rng, int rows, int cols);

}  // namespace freespec
