#include "freespec/quadrature.hpp"

#include <cmath>

namespace freespec {

std::vector<double> trapezoid_weights(const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  if (n < 2) {
    throw ContractViolation("trapezoid weights need at least two nodes");
  }
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = nodes[i + 1] - nodes[i];
    if (!(h > 0.0)) {
      throw ContractViolation("trapezoid nodes must be strictly ascending");
    }
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) {
    throw ContractViolation("uniform grid needs points >= 2 and hi > lo");
  }
  std::vector<double> g(points);
  const double h = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    g[i] = lo + h * i;
  }
  g.back() = hi;
  return g;
}

std::vector<double> graded_grid(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) {
    throw ContractViolation("graded grid needs points >= 2 and hi > lo");
  }
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / (points - 1);
    g[i] = lo + (hi - lo) * u * u * u;
  }
  g.back() = hi;
  return g;
}

}  // namespace freespec
