#include "freespec/rng.hpp"

#include <cmath>
#include <numbers>

#include "freespec/errors.hpp"

namespace freespec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream RngStream::child(std::uint64_t k) const {
  std::uint64_t h = stream;
  h ^= k + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  return RngStream{seed, splitmix64(h)};
}

GaussianSampler::GaussianSampler(RngStream s) {
  std::seed_seq seq{static_cast<std::uint32_t>(s.seed),
                    static_cast<std::uint32_t>(s.seed >> 32),
                    static_cast<std::uint32_t>(s.stream),
                    static_cast<std::uint32_t>(s.stream >> 32)};
  engine_.seed(seq);
}

double GaussianSampler::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 53-bit uniform in (0, 1]; the +1 keeps log() finite.
  auto uniform = [this]() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  };
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Eigen::MatrixXd GaussianSampler::matrix(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw ContractViolation("gaussian matrix dimensions must be positive");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = (*this)();
    }
  }
  return m;
}

Eigen::MatrixXd gaussian_matrix(RngStream rng, int rows, int cols) {
  GaussianSampler sampler(rng);
  return sampler.matrix(rows, cols);
}

}  // namespace freespec
