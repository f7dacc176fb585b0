#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "freespec/errors.hpp"
#include "freespec/quadrature.hpp"
#include "freespec/rng.hpp"
#include "freespec/spectra.hpp"

namespace {

using freespec::Complex;

constexpr double kPi = std::numbers::pi;

// Covariance density written straight from the defining formula, kept local
// so grid handling in the production code is exercised against plain math.
double mp_formula(double sigma2, double c, double x) {
  const double a = sigma2 * (1.0 - std::sqrt(c)) * (1.0 - std::sqrt(c));
  const double b = sigma2 * (1.0 + std::sqrt(c)) * (1.0 + std::sqrt(c));
  if (x <= a || x >= b) {
    return 0.0;
  }
  return std::sqrt((b - x) * (x - a)) / (2.0 * kPi * sigma2 * c * x);
}

// Semicircle transform on the upper half-plane via principal square roots.
Complex semicircle_transform(Complex z) {
  return (z - std::sqrt(z - 2.0) * std::sqrt(z + 2.0)) / 2.0;
}

double interpolate(const freespec::SpectralDensity& d, double x) {
  for (std::size_t i = 1; i < d.grid.size(); ++i) {
    if (d.grid[i] >= x) {
      const double t = (x - d.grid[i - 1]) / (d.grid[i] - d.grid[i - 1]);
      return (1.0 - t) * d.values[i - 1] + t * d.values[i];
    }
  }
  return 0.0;
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("mp_density pins support edges and interior values") {
  const freespec::SpectralDensity d = freespec::mp_density({1.0, 1.0}, 2000);
  CHECK(d.support.lo == doctest::Approx(0.0));
  CHECK(d.support.hi == doctest::Approx(4.0));
  CHECK(d.values.front() == doctest::Approx(0.0));
  CHECK(d.values.back() == doctest::Approx(0.0));
  CHECK(interpolate(d, 1.0) ==
        doctest::Approx(std::sqrt(3.0) / (2.0 * kPi)).epsilon(1e-4));
  CHECK(interpolate(d, 2.0) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-4));
}

TEST_CASE("mp_density integrates to one away from the square case") {
  const freespec::SpectralDensity d = freespec::mp_density({2.0, 0.25}, 2000);
  CHECK(d.support.lo == doctest::Approx(2.0 * 0.25));
  CHECK(d.support.hi == doctest::Approx(2.0 * 2.25));
  CHECK(d.integral() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("mp_density validates its parameters") {
  CHECK_THROWS_AS(freespec::mp_density({1.0, 1.5}, 2000),
                  freespec::ContractViolation);
  CHECK_THROWS_AS(freespec::mp_density({-1.0, 0.5}, 2000),
                  freespec::ContractViolation);
  CHECK_THROWS_AS(freespec::mp_density({1.0, 1.0}, 63),
                  freespec::ContractViolation);
}

TEST_CASE("density validate flags malformed samples") {
  freespec::SpectralDensity d = freespec::mp_density({1.0, 1.0}, 256);
  freespec::SpectralDensity negative = d;
  negative.values[100] = -0.5;
  CHECK_THROWS_AS(negative.validate(), freespec::ContractViolation);
  freespec::SpectralDensity doubled = d;
  for (double& v : doubled.values) {
    v *= 2.0;
  }
  CHECK_THROWS_AS(doubled.validate(), freespec::NumericError);
  freespec::SpectralDensity ragged = d;
  ragged.values.pop_back();
  CHECK_THROWS_AS(ragged.validate(), freespec::ContractViolation);
}

TEST_CASE("cauchy_transform matches the closed form away from the support") {
  const freespec::SpectralDensity d = freespec::mp_density({1.0, 1.0}, 2000);
  const Complex g = freespec::cauchy_transform(d, Complex(5.0, 1e-8));
  CHECK(std::abs(g - Complex(0.27639320225002106, 0.0)) < 1e-4);
  const Complex far = freespec::cauchy_transform(d, Complex(0.0, 100.0));
  CHECK(std::abs(far * Complex(0.0, 100.0) - 1.0) < 0.02);
  CHECK_THROWS_AS(freespec::cauchy_transform(d, Complex(5.0, 0.0)),
                  freespec::ContractViolation);
}

TEST_CASE("cauchy_transform of a symmetric density is odd in the real part") {
  freespec::SpectralDensity semi;
  semi.grid = freespec::uniform_grid(-2.0, 2.0, 2001);
  semi.values.resize(semi.grid.size());
  for (std::size_t i = 0; i < semi.grid.size(); ++i) {
    const double x = semi.grid[i];
    semi.values[i] = std::sqrt(std::max(0.0, 4.0 - x * x)) / (2.0 * kPi);
  }
  semi.support = {-2.0, 2.0};
  const Complex g = freespec::cauchy_transform(semi, Complex(0.0, 2.0));
  CHECK(std::abs(g.real()) < 1e-12);
  CHECK(g.imag() < 0.0);
}

TEST_CASE("mp_cauchy_closed agrees with quadrature and the local density") {
  const freespec::MpParams p{1.0, 1.0};
  const freespec::SpectralDensity d = freespec::mp_density(p, 4000);
  freespec::GaussianSampler s({99, 0});
  for (int i = 0; i < 100; ++i) {
    const double x = -1.0 + 7.0 * std::abs(s()) / 3.0;
    const double y = 0.05 + 2.0 * std::abs(s());
    const Complex z(x, y);
    const Complex closed = freespec::mp_cauchy_closed(p, z);
    const Complex quad = freespec::cauchy_transform(d, z);
    CHECK(std::abs(closed - quad) < 2e-3);
  }
  const Complex inside = freespec::mp_cauchy_closed(p, Complex(2.0, 1e-6));
  CHECK(inside.imag() == doctest::Approx(-0.5).epsilon(1e-3));
  CHECK_THROWS_AS(freespec::mp_cauchy_closed(p, Complex(2.0, 0.0)),
                  freespec::ContractViolation);
}

TEST_CASE("mp_cauchy_closed maps the upper half-plane into the lower") {
  const freespec::MpParams p{2.0, 0.5};
  freespec::GaussianSampler s({7, 3});
  for (int i = 0; i < 1000; ++i) {
    const Complex z(4.0 * s(), 1e-3 + 3.0 * std::abs(s()));
    CHECK(freespec::mp_cauchy_closed(p, z).imag() < 0.0);
  }
}

TEST_CASE("stieltjes_invert round-trips the covariance law") {
  const freespec::MpParams p{1.0, 1.0};
  const auto g = [&](Complex z) { return freespec::mp_cauchy_closed(p, z); };
  const std::vector<double> grid = freespec::uniform_grid(-0.5, 4.5, 2001);
  const freespec::SpectralDensity rec =
      freespec::stieltjes_invert(g, grid, freespec::kInversionHeight);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    if (std::abs(x - 0.0) <= 0.05 || std::abs(x - 4.0) <= 0.05) {
      continue;
    }
    worst = std::max(worst, std::abs(rec.values[i] - mp_formula(1.0, 1.0, x)));
  }
  CHECK(worst < 2e-3);
  CHECK(rec.support.lo > -0.1);
  CHECK(rec.support.hi < 4.1);
}

TEST_CASE("stieltjes_invert reproduces the smoothing kernel of a point mass") {
  const auto g = [](Complex z) { return 1.0 / z; };
  const std::vector<double> grid = freespec::uniform_grid(-0.5, 0.5, 4001);
  const freespec::SpectralDensity rec =
      freespec::stieltjes_invert(g, grid, 1e-3);
  const double peak = interpolate(rec, 0.0);
  CHECK(peak == doctest::Approx(1.0 / (kPi * 1e-3)).epsilon(0.01));
  const std::vector<double> w = freespec::trapezoid_weights(rec.grid);
  double near_mass = 0.0;
  for (std::size_t i = 0; i < rec.grid.size(); ++i) {
    if (std::abs(rec.grid[i]) <= 0.1) {
      near_mass += w[i] * rec.values[i];
    }
  }
  CHECK(near_mass > 0.9);
}

TEST_CASE("stieltjes_invert recovers the semicircle from its transform") {
  const std::vector<double> grid = freespec::uniform_grid(-2.5, 2.5, 2001);
  const freespec::SpectralDensity rec = freespec::stieltjes_invert(
      semicircle_transform, grid, freespec::kInversionHeight);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    if (std::abs(x) > 1.9) {
      continue;
    }
    const double truth = std::sqrt(4.0 - x * x) / (2.0 * kPi);
    worst = std::max(worst, std::abs(rec.values[i] - truth));
  }
  CHECK(worst < 2e-3);
  CHECK(std::abs(rec.support.lo + 2.0) < 0.25);
  CHECK(std::abs(rec.support.hi - 2.0) < 0.25);
}

TEST_CASE("stieltjes_invert rejects bad heights, grids and transforms") {
  const auto g = [](Complex z) { return 1.0 / z; };
  const std::vector<double> grid = freespec::uniform_grid(-1.0, 1.0, 101);
  CHECK_THROWS_AS(freespec::stieltjes_invert(g, grid, 0.0),
                  freespec::ContractViolation);
  CHECK_THROWS_AS(freespec::stieltjes_invert(g, grid, 0.2),
                  freespec::ContractViolation);
  CHECK_THROWS_AS(freespec::stieltjes_invert(g, {0.0}, 1e-4),
                  freespec::ContractViolation);
  const auto real_only = [](Complex) { return Complex(1.0, 0.0); };
  CHECK_THROWS_AS(freespec::stieltjes_invert(real_only, grid, 1e-4),
                  freespec::NumericError);
  const auto nan = [](Complex) {
    return Complex(std::nan(""), std::nan(""));
  };
  CHECK_THROWS_AS(freespec::stieltjes_invert(nan, grid, 1e-4),
                  freespec::NumericError);
}

TEST_CASE("density CSV round-trips exactly") {
  const freespec::SpectralDensity d = freespec::mp_density({1.0, 0.5}, 300);
  const std::string text = d.to_csv();
  CHECK(text.rfind("x,rho\n", 0) == 0);
  const freespec::SpectralDensity back = freespec::SpectralDensity::from_csv(text);
  REQUIRE(back.grid.size() == d.grid.size());
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    CHECK(back.grid[i] == d.grid[i]);
    CHECK(back.values[i] == d.values[i]);
  }
  // The rebuilt support ends where the stored values cross the tail cutoff,
  // slightly inside the analytic edges where the density vanishes.
  const double span = d.grid.back() - d.grid.front();
  const std::size_t n = d.grid.size();
  const double slack_lo = 1.5 * (d.grid[1] - d.grid[0]) + 1e-3 * span;
  const double slack_hi = 1.5 * (d.grid[n - 1] - d.grid[n - 2]) + 1e-3 * span;
  CHECK(back.support.lo >= d.support.lo);
  CHECK(back.support.lo <= d.support.lo + slack_lo);
  CHECK(back.support.hi <= d.support.hi);
  CHECK(back.support.hi >= d.support.hi - slack_hi);
}

TEST_CASE("density CSV parsing reports malformed input") {
  CHECK_THROWS_AS(freespec::SpectralDensity::from_csv("a,b\n1,2\n"),
                  freespec::ParseError);
  CHECK_THROWS_AS(freespec::SpectralDensity::from_csv("x,rho\n1\n2\n"),
                  freespec::ParseError);
  CHECK_THROWS_AS(freespec::SpectralDensity::from_csv("x,rho\n1,zebra\n2,1\n"),
                  freespec::ParseError);
  CHECK_THROWS_AS(freespec::SpectralDensity::from_csv("x,rho\n"),
                  freespec::ParseError);
  CHECK_THROWS_AS(freespec::SpectralDensity::from_csv("x,rho\n1,0\n2,0\n"),
                  freespec::ParseError);
}

TEST_CASE("density CSV file round-trip preserves bytes") {
  const freespec::SpectralDensity d = freespec::mp_density({1.5, 0.75}, 128);
  const std::string path = "/tmp/freespec_density_roundtrip.csv";
  d.save_csv(path);
  const freespec::SpectralDensity back = freespec::SpectralDensity::load_csv(path);
  CHECK(back.to_csv() == d.to_csv());
}

}  // TEST_SUITE
