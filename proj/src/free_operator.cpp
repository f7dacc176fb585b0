#include "freespec/free_operator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "freespec/errors.hpp"
#include "freespec/quadrature.hpp"

namespace freespec {

namespace {

// Interpolation stencil half-width for the quadratic coefficients in t.
constexpr double kStencil = 10.0;

// Beyond this magnitude a root is treated by its Laurent expansion.
constexpr double kFarRoot = 1e4;

Complex mp_transform_any_halfplane(const MpParams& p, Complex z) {
  if (z.imag() > 0.0) {
    return mp_cauchy_closed(p, z);
  }
  if (z.imag() < 0.0) {
    return std::conj(mp_cauchy_closed(p, std::conj(z)));
  }
  throw NumericError("tensor transform root landed on the real axis");
}

ComplexMat3 tensor_cauchy_impl(const ComplexMat3& bj,
                               const std::vector<double>& nodes,
                               const std::vector<double>& weighted_values,
                               const ComplexMat3& b) {
  ComplexMat3 acc = ComplexMat3::Zero();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (weighted_values[i] == 0.0) {
      continue;
    }
    acc += weighted_values[i] * mat3_inverse(b - nodes[i] * bj);
  }
  return acc;
}

double min_imag_eigenvalue(const ComplexMat3& m) {
  const ComplexMat3 im = (m - m.adjoint()) / Complex(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<ComplexMat3> solver(im,
                                                    Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("3x3 Hermitian eigensolver failed");
  }
  return solver.eigenvalues().minCoeff();
}

}  // namespace

Linearization linearize_p2() {
  Linearization lin;
  lin.b0.setZero();
  lin.b1.setZero();
  lin.b2.setZero();
  lin.b0(1, 2) = -1.0;
  lin.b0(2, 1) = -1.0;
  lin.b1(0, 1) = 1.0;
  lin.b1(1, 0) = 1.0;
  lin.b2(0, 2) = 1.0;
  lin.b2(2, 0) = 1.0;
  return lin;
}

void OperatorPoint::validate() const {
  if (!(min_imag_eigenvalue(b) > 0.0)) {
    throw ContractViolation("operator point needs Im(b) positive definite");
  }
}

OperatorPoint lambda_eps(Complex z, double eps) {
  if (!(eps > 0.0)) {
    throw ContractViolation("lambda_eps needs eps > 0");
  }
  if (z.imag() < 0.0) {
    throw ContractViolation("lambda_eps needs Im z >= 0");
  }
  ComplexMat3 m = ComplexMat3::Zero();
  m(0, 0) = (z.imag() > 0.0) ? z : z + Complex(0.0, eps);
  m(1, 1) = Complex(0.0, eps);
  m(2, 2) = Complex(0.0, eps);
  return OperatorPoint{m};
}

ComplexMat3 tensor_cauchy(const Eigen::Matrix3d& bj, const SpectralDensity& d,
                          const OperatorPoint& b) {
  b.validate();
  const std::vector<double> weights = trapezoid_weights(d.grid);
  std::vector<double> weighted(d.grid.size());
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    weighted[i] = weights[i] * d.values[i];
  }
  return tensor_cauchy_impl(bj.cast<Complex>(), d.grid, weighted, b.b);
}

ComplexMat3 mp_tensor_cauchy(const Eigen::Matrix3d& bj_real, const MpParams& p,
                             const OperatorPoint& b) {
  p.validate();
  const ComplexMat3 bj = bj_real.cast<Complex>();
  if (bj.cwiseAbs().maxCoeff() == 0.0) {
    return mat3_inverse(b.b);
  }

  // det(b - t bj) and adj(b - t bj) are quadratic in t because bj has a null
  // direction; recover their coefficients from three exact samples.
  const ComplexMat3 m_plus = b.b - kStencil * bj;
  const ComplexMat3 m_minus = b.b + kStencil * bj;
  const Complex q0 = mat3_det(b.b);
  const Complex det_plus = mat3_det(m_plus);
  const Complex det_minus = mat3_det(m_minus);
  const Complex q1 = (det_plus - det_minus) / (2.0 * kStencil);
  const Complex q2 =
      (det_plus + det_minus - 2.0 * q0) / (2.0 * kStencil * kStencil);
  const ComplexMat3 a0 = mat3_adjugate(b.b);
  const ComplexMat3 adj_plus = mat3_adjugate(m_plus);
  const ComplexMat3 adj_minus = mat3_adjugate(m_minus);
  const ComplexMat3 a1 = (adj_plus - adj_minus) / (2.0 * kStencil);
  const ComplexMat3 a2 =
      (adj_plus + adj_minus - 2.0 * a0) / (2.0 * kStencil * kStencil);

  if (q2 == Complex(0.0, 0.0)) {
    throw NumericError("tensor transform determinant lost its quadratic term");
  }

  // Roots of q2 t^2 + q1 t + q0, largest magnitude first, computed the
  // cancellation-free way.
  const Complex disc = std::sqrt(q1 * q1 - 4.0 * q2 * q0);
  const Complex qq =
      -0.5 * (q1 + (((std::conj(q1) * disc).real() >= 0.0) ? disc : -disc));
  if (qq == Complex(0.0, 0.0)) {
    throw NumericError("tensor transform quadratic is degenerate");
  }
  Complex t_far = qq / q2;
  Complex t_near = q0 / qq;
  if (std::abs(t_near) > std::abs(t_far)) {
    std::swap(t_far, t_near);
  }
  if (std::abs(t_far - t_near) <
      1e-12 * (1.0 + std::abs(t_far) + std::abs(t_near))) {
    throw NumericError("tensor transform roots coincide");
  }

  const double m0 = 1.0;
  const double m1 = p.sigma2;
  const double m2 = p.sigma2 * p.sigma2 * (1.0 + p.c);
  const auto adj_at = [&](Complex t) -> ComplexMat3 {
    return a2 * (t * t) + a1 * t + a0;
  };

  ComplexMat3 out;
  const Complex denom = q2 * (t_far - t_near);
  if (std::abs(t_far) > kFarRoot) {
    // The far root carries the Laurent expansion of the scalar transform;
    // grouping it with the polynomial part cancels the 1/q2 growth.
    out = (a2 / q2) * (-m0 * t_near / (t_far - t_near));
    out -= ((a1 * t_far + a0) * (m0 / t_far) +
            adj_at(t_far) * (m1 / (t_far * t_far) +
                             m2 / (t_far * t_far * t_far))) /
           denom;
  } else {
    out = (a2 / q2) * m0;
    out -= adj_at(t_far) * mp_transform_any_halfplane(p, t_far) / denom;
  }
  out -= adj_at(t_near) * mp_transform_any_halfplane(p, t_near) /
         (q2 * (t_near - t_far));
  return out;
}

ComplexMat3 operator_h(const OperatorTransform& g, const OperatorPoint& b) {
  return mat3_inverse(g.eval(b)) - b.b;
}

OperatorSubordinationResult operator_subordinate(
    const OperatorTransform& gx, const OperatorTransform& gy,
    const OperatorPoint& b, double tol, long max_iter,
    const ComplexMat3* start) {
  b.validate();
  ComplexMat3 w = (start != nullptr) ? *start : b.b;
  double residual = std::numeric_limits<double>::infinity();
  for (long it = 1; it <= max_iter; ++it) {
    const ComplexMat3 hx = operator_h(gx, OperatorPoint{w});
    const OperatorPoint u{hx + b.b};
    const ComplexMat3 hy = operator_h(gy, u);
    const ComplexMat3 next = hy + b.b;
    residual = (next - w).cwiseAbs().maxCoeff();
    w = next;
    if (residual < tol) {
      // The exact fixed point satisfies Im w >= Im b, but the transforms are
      // evaluated by quadrature whose bias shifts the computed point by a few
      // parts in 1e-6. The check guards against a qualitative escape toward
      // the real axis, not against that bias.
      const double dip = min_imag_eigenvalue(w - b.b);
      if (dip < -1e-4) {
        throw NumericError(
            "operator subordination point left the half-plane cone by " +
            std::to_string(dip));
      }
      return OperatorSubordinationResult{w, it, residual};
    }
  }
  throw ConvergenceError("operator subordination did not converge", residual);
}

ComplexMat3 cauchy_L(const Linearization& lin, const SpectralDensity& d0,
                     const SpectralDensity& d1, const OperatorPoint& b,
                     double tol) {
  const ComplexMat3 shift = lin.b0.cast<Complex>();
  const OperatorPoint base{b.b - shift};
  base.validate();

  // Quadrature tables over each density, shared across all iterations.
  const ComplexMat3 b1c = lin.b1.cast<Complex>();
  const ComplexMat3 b2c = lin.b2.cast<Complex>();
  const std::vector<double> w0 = trapezoid_weights(d0.grid);
  const std::vector<double> w1 = trapezoid_weights(d1.grid);
  std::vector<double> wv0(d0.grid.size());
  std::vector<double> wv1(d1.grid.size());
  for (std::size_t i = 0; i < d0.grid.size(); ++i) {
    wv0[i] = w0[i] * d0.values[i];
  }
  for (std::size_t i = 0; i < d1.grid.size(); ++i) {
    wv1[i] = w1[i] * d1.values[i];
  }
  const OperatorTransform gx{
      [&](const OperatorPoint& q) {
        return tensor_cauchy_impl(b1c, d0.grid, wv0, q.b);
      },
      "tensor(b1, d0)"};
  const OperatorTransform gy{
      [&](const OperatorPoint& q) {
        return tensor_cauchy_impl(b2c, d1.grid, wv1, q.b);
      },
      "tensor(b2, d1)"};
  const OperatorSubordinationResult r =
      operator_subordinate(gx, gy, base, tol);
  return tensor_cauchy_impl(b1c, d0.grid, wv0, r.w1);
}

SpectralDensity asd_p2(const MpParams& p0, const MpParams& p1,
                       const std::vector<double>& grid, double eps,
                       double tol) {
  p0.validate();
  p1.validate();
  if (!(eps > 0.0)) {
    throw ContractViolation("asd_p2 needs eps > 0");
  }
  const Linearization lin = linearize_p2();
  const ComplexMat3 shift = lin.b0.cast<Complex>();
  const OperatorTransform gx{
      [&](const OperatorPoint& q) {
        return mp_tensor_cauchy(lin.b1, p0, q);
      },
      "tensor(b1, mp0)"};
  const OperatorTransform gy{
      [&](const OperatorPoint& q) {
        return mp_tensor_cauchy(lin.b2, p1, q);
      },
      "tensor(b2, mp1)"};

  SpectralDensity d;
  d.grid = grid;
  d.values.resize(grid.size());
  ComplexMat3 warm;
  bool have_warm = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const OperatorPoint pt =
        lambda_eps(Complex(grid[i], kInversionHeight), eps);
    const OperatorPoint base{pt.b - shift};
    try {
      const OperatorSubordinationResult r = operator_subordinate(
          gx, gy, base, tol, 200000, have_warm ? &warm : nullptr);
      warm = r.w1;
      have_warm = true;
      const Complex g11 = gx.eval(OperatorPoint{r.w1})(0, 0);
      if (!std::isfinite(g11.real()) || !std::isfinite(g11.imag())) {
        throw NumericError("transform is not finite");
      }
      d.values[i] = std::max(0.0, -g11.imag() / std::numbers::pi);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(
          "product-density transform failed at x = " + std::to_string(grid[i]),
          e.residual);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at x = " +
                         std::to_string(grid[i]));
    }
  }

  const double cutoff = 1e-4 * d.max_value();
  std::size_t first = grid.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (d.values[i] > cutoff) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first > last) {
    throw NumericError("product density is identically zero");
  }
  d.support = {grid[first], grid[last]};
  for (std::size_t i = 0; i < first; ++i) {
    d.values[i] = 0.0;
  }
  for (std::size_t i = last + 1; i < grid.size(); ++i) {
    d.values[i] = 0.0;
  }
  d.validate();
  return d;
}

std::vector<double> default_p2_grid(const MpParams& p0, const MpParams& p1,
                                    int points) {
  p0.validate();
  p1.validate();
  const double scale = p0.upper_edge() * p1.upper_edge();
  return uniform_grid(-0.5 * scale, 1.05 * scale, points);
}

}  // namespace freespec
