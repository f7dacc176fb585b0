#pragma once

#include <type_traits>
#include <utility>
#include <vector>

#include "freespec/errors.hpp"

namespace freespec {

// Composite trapezoid weights for strictly ascending nodes.
std::vector<double> trapezoid_weights(const std::vector<double>& nodes);

// Uniform grid with the given endpoints included.
std::vector<double> uniform_grid(double lo, double hi, int points);

// Grid refined cubically toward lo. Resolves the inverse-square-root lower
// edge of covariance-type densities under trapezoid quadrature.
std::vector<double> graded_grid(double lo, double hi, int points);

// Sum of weights[i] * f(nodes[i]). Works for scalar and small-matrix values.
template <typename F>
auto integrate_weighted(F&& f, const std::vector<double>& nodes,
                        const std::vector<double>& weights) {
  if (nodes.size() != weights.size()) {
    throw ContractViolation("quadrature nodes and weights differ in length");
  }
  if (nodes.empty()) {
    throw ContractViolation("quadrature needs at least one node");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw ContractViolation("quadrature nodes must be strictly ascending");
    }
  }
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw ContractViolation("quadrature weights must be positive");
    }
  }
  using Value = std::decay_t<decltype(f(nodes[0]))>;
  Value acc = weights[0] * f(nodes[0]);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    acc += weights[i] * f(nodes[i]);
  }
  return acc;
}

}  // namespace freespec
