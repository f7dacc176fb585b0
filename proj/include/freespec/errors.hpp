#pragma once

#include <stdexcept>
#include <string>

namespace freespec {

// Violated precondition or invalid argument. The CLI maps this to exit code 2.
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numeric failure during evaluation. The CLI maps this to exit code 1.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iteration budget exhausted before reaching the requested tolerance.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& msg, double residual)
      : NumericError(msg + " (residual " + std::to_string(residual) + ")"),
        residual(residual) {}
  double residual;
};

// Inverse of an effectively singular matrix was requested.
class SingularityError : public NumericError {
 public:
  SingularityError(const std::string& msg, double det_magnitude)
      : NumericError(msg + " (|det| " + std::to_string(det_magnitude) + ")"),
        det_magnitude(det_magnitude) {}
  double det_magnitude;
};

// A data row with zero sample variance cannot be standardized.
class DegenerateRowError : public ContractViolation {
 public:
  explicit DegenerateRowError(int row)
      : ContractViolation("degenerate row " + std::to_string(row) +
                          ": zero sample variance"),
        row(row) {}
  DegenerateRowError(int row, const std::string& context)
      : ContractViolation(context + ": degenerate row " + std::to_string(row) +
                          ": zero sample variance"),
        row(row) {}
  int row;
};

// Malformed CSV or JSON input.
class ParseError : public ContractViolation {
 public:
  explicit ParseError(const std::string& msg) : ContractViolation(msg) {}
};

}  // namespace freespec
