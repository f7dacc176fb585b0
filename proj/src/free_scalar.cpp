#include "freespec/free_scalar.hpp"

#include <cmath>
#include <limits>

#include "freespec/errors.hpp"
#include "freespec/quadrature.hpp"

namespace freespec {

ScalarTransform mp_transform(const MpParams& p) {
  p.validate();
  return ScalarTransform{
      [p](Complex z) { return mp_cauchy_closed(p, z); },
      "mp(c=" + std::to_string(p.c) + ",sigma2=" + std::to_string(p.sigma2) +
          ")"};
}

Complex h_transform(const ScalarTransform& g, Complex w) {
  if (!(w.imag() > 0.0)) {
    throw ContractViolation("h_transform requires Im w > 0");
  }
  const Complex gw = g.eval(w);
  if (gw == Complex(0.0, 0.0)) {
    throw SingularityError("h_transform hit a zero of the transform", 0.0);
  }
  return 1.0 / gw - w;
}

SubordinationResult subordinate_pair(const ScalarTransform& gx,
                                     const ScalarTransform& gy, Complex b,
                                     double tol, long max_iter) {
  if (!(b.imag() > 0.0)) {
    throw ContractViolation("subordinate_pair requires Im b > 0");
  }
  Complex w = b;
  double residual = std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (long it = 1; it <= max_iter; ++it) {
    const Complex next = h_transform(gy, h_transform(gx, w) + b) + b;
    residual = std::abs(next - w);
    w = next;
    if (residual < 0.9 * best) {
      best = residual;
      stalled = 0;
    } else {
      ++stalled;
    }
    // Evaluation noise in the transforms can floor the residual above tol
    // for near-degenerate inputs; accept a small persistent plateau.
    const bool plateaued = stalled >= 12 && residual < 1e3 * tol;
    if (residual < tol || plateaued) {
      // The exact fixed point satisfies Im w >= Im b; the computed one may
      // undershoot by a few multiples of the stopping tolerance when the
      // limit sits on the cone boundary.
      const double slack = 1e-12 + 100.0 * tol;
      if (w.imag() < b.imag() - slack) {
        throw NumericError("subordination point left the half-plane cone");
      }
      SubordinationResult r;
      r.w1 = w;
      // The mirrored fixed point follows from w1 by one half-step.
      r.w2 = h_transform(gx, w) + b;
      r.iterations = static_cast<int>(it);
      r.residual = residual;
      if (r.w2.imag() < b.imag() - slack) {
        throw NumericError("mirrored subordination point left the cone");
      }
      return r;
    }
  }
  throw ConvergenceError("subordination did not converge", residual);
}

SpectralDensity asd_p1(const MpParams& p0, const MpParams& p1,
                       const std::vector<double>& grid, double eps,
                       double tol) {
  p0.validate();
  p1.validate();
  const ScalarTransform gx = mp_transform(p0);
  const ScalarTransform gy = mp_transform(p1);
  auto g_sum = [&](Complex z) {
    try {
      const SubordinationResult r = subordinate_pair(gx, gy, z, tol);
      return gx.eval(r.w1);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(
          "convolution transform failed at x = " + std::to_string(z.real()),
          e.residual);
    }
  };
  SpectralDensity d = stieltjes_invert(g_sum, grid, eps);
  d.validate();
  return d;
}

std::vector<double> default_p1_grid(const MpParams& p0, const MpParams& p1,
                                    int points) {
  p0.validate();
  p1.validate();
  const double hi =
      std::pow(std::sqrt(p0.upper_edge()) + std::sqrt(p1.upper_edge()), 2) +
      1.0;
  return uniform_grid(0.0, hi, points);
}

}  // namespace freespec
