// End-to-end acceptance checks for the spectral anomaly detection pipeline.
// Each check prints one PASS/FAIL line; the process exits 0 only if every
// selected check passes. Tolerances and runtime budgets are pinned below.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "freespec/battery.hpp"
#include "freespec/datagen.hpp"
#include "freespec/detection.hpp"
#include "freespec/empirical.hpp"
#include "freespec/errors.hpp"
#include "freespec/free_operator.hpp"
#include "freespec/free_scalar.hpp"
#include "freespec/linalg.hpp"
#include "freespec/quadrature.hpp"
#include "freespec/rng.hpp"
#include "freespec/spectra.hpp"
#include "freespec/stats.hpp"

namespace fs = std::filesystem;
using namespace freespec;

namespace {

std::string g_cli_path = FREESPEC_CLI_PATH;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

Eigen::MatrixXd wishart(RngStream rng, int n, int t) {
  const Eigen::MatrixXd x = gaussian_matrix(rng, n, t);
  const Eigen::MatrixXd s = x * x.transpose() / static_cast<double>(t);
  return 0.5 * (s + s.transpose());
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Exact empirical CDF of the pooled samples at the bin edges against the
// reference CDF; the sup over edges bounds the KS distance up to one bin.
double histogram_ks(const Histogram& h, const SpectralDensity& bound) {
  const auto cdf = density_cdf(bound);
  double worst = std::abs(cdf(h.bin_edges.front()));
  long seen = 0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    seen += h.counts[i];
    const double empirical = static_cast<double>(seen) / h.total;
    worst = std::max(worst, std::abs(empirical - cdf(h.bin_edges[i + 1])));
  }
  return worst;
}

std::map<std::string, Decision> battery_decisions(const BatteryResult& r) {
  std::map<std::string, Decision> d;
  for (const ScenarioOutcome& o : r.outcomes) {
    d[o.label] = o.report.decision;
  }
  return d;
}

// 1. Closed-form transform of the covariance law, pushed back through the
// density recovery, lands on the analytic density away from the edges.
Outcome check_density_round_trip() {
  const auto start = std::chrono::steady_clock::now();
  const MpParams p{1.0, 1.0};
  const std::vector<double> grid = uniform_grid(-0.5, 4.5, 2001);
  const SpectralDensity rec = stieltjes_invert(
      [&](Complex z) { return mp_cauchy_closed(p, z); }, grid,
      kInversionHeight);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    if (x < 0.05 || x > 4.0 - 0.05) {
      continue;
    }
    const double truth = std::sqrt((4.0 - x) * x) / (2.0 * std::numbers::pi * x);
    worst = std::max(worst, std::abs(rec.values[i] - truth));
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  Outcome o;
  o.pass = worst < 2e-3 && secs < 1.0;
  o.detail = fmt("sup error %.2e (limit 2e-3), %.2f s (limit 1 s)", worst, secs);
  return o;
}

// 2. Pooled single-covariance eigenvalues of pure noise match the analytic
// law at the campaign window shape.
Outcome check_single_covariance_law() {
  const auto start = std::chrono::steady_clock::now();
  const DataMatrix v0 = gaussian_matrix(RngStream{901, 0}, 118, 118);
  const DataMatrix v1 = gaussian_matrix(RngStream{901, 1}, 118, 118);
  std::vector<double> eigs;
  empirical_spectrum(v0, v1, PolyId::P0, 100, 0.01, 100, RngStream{902, 0},
                     &eigs);
  const double ks =
      ks_distance(eigs, density_cdf(mp_density({1.0, 1.0}, 2000)));
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  Outcome o;
  o.pass = ks < 0.05 && secs < 30.0;
  o.detail = fmt("KS %.4f (limit 0.05) over %zu eigenvalues, %.1f s (limit 30 s)",
                 ks, eigs.size(), secs);
  return o;
}

// 3. The linear-fusion bound has the predicted support edges and matches a
// large Monte Carlo sum of independent sample covariances.
Outcome check_linear_fusion_bound() {
  const auto start = std::chrono::steady_clock::now();
  const MpParams one{1.0, 1.0};
  const SpectralDensity d = asd_p1(one, one, default_p1_grid(one, one));
  const double lo_err = std::abs(d.support.lo - (3.0 - 2.0 * std::sqrt(2.0)));
  const double hi_err = std::abs(d.support.hi - (3.0 + 2.0 * std::sqrt(2.0)));

  const int n = 2000;
  const RngStream root{903, 0};
  const Eigen::MatrixXd s0 = wishart(root.child(0), n, n);
  const Eigen::MatrixXd s1 = wishart(root.child(1), n, n);
  const Eigen::MatrixXd sum = s0 + s1;
  const Eigen::VectorXd ev = hermitian_eigenvalues(sum);
  const double ks = ks_distance(to_vector(ev), density_cdf(d));
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  Outcome o;
  o.pass = lo_err <= 0.05 && hi_err <= 0.05 && ks < 0.05 && secs < 120.0;
  o.detail = fmt("edge errors %.3f/%.3f (limit 0.05), KS %.4f (limit 0.05), "
                 "%.1f s (limit 120 s)",
                 lo_err, hi_err, ks, secs);
  return o;
}

// 4. The quadratic-fusion bound matches Monte Carlo spectra of the fused
// statistic, carries unit mass, and reaches below zero.
Outcome check_quadratic_fusion_bound() {
  const auto start = std::chrono::steady_clock::now();
  const MpParams one{1.0, 1.0};
  const SpectralDensity d = asd_p2(one, one, default_p2_grid(one, one));

  const int n = 1000;
  std::vector<double> eigs;
  eigs.reserve(50 * n);
  for (int trial = 0; trial < 50; ++trial) {
    const RngStream root{904, static_cast<std::uint64_t>(trial)};
    const Eigen::MatrixXd s0 = wishart(root.child(0), n, n);
    const Eigen::MatrixXd s1 = wishart(root.child(1), n, n);
    const Eigen::MatrixXd p2 = s0 * s1 + s1 * s0;
    const Eigen::VectorXd ev = hermitian_eigenvalues(p2);
    for (int i = 0; i < ev.size(); ++i) {
      eigs.push_back(ev[i]);
    }
  }
  const double ks = ks_distance(eigs, density_cdf(d));
  const double mass_err = std::abs(d.integral() - 1.0);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  Outcome o;
  o.pass = ks < 0.05 && mass_err <= 0.02 && d.support.lo < 0.0 && secs < 600.0;
  o.detail = fmt("KS %.4f (limit 0.05), mass error %.4f (limit 0.02), "
                 "lower edge %.3f (< 0), %.0f s (limit 600 s)",
                 ks, mass_err, d.support.lo, secs);
  return o;
}

// 5. The corner block of the linearized resolvent reproduces the plain
// resolvent of the fused statistic on random matrix pairs.
Outcome check_linearization_identity() {
  const Linearization lin = linearize_p2();
  GaussianSampler zdraw(RngStream{906, 0});
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 7;
    const RngStream root{905, static_cast<std::uint64_t>(k)};
    const Eigen::MatrixXd a0 = gaussian_matrix(root.child(0), n, n);
    const Eigen::MatrixXd a1 = gaussian_matrix(root.child(1), n, n);
    const Eigen::MatrixXd s0 = 0.5 * (a0 + a0.transpose());
    const Eigen::MatrixXd s1 = 0.5 * (a1 + a1.transpose());
    const Complex z(zdraw(), 0.3 + std::abs(zdraw()));

    const Eigen::MatrixXcd s0c = s0.cast<Complex>();
    const Eigen::MatrixXcd s1c = s1.cast<Complex>();
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const Complex corner = (i == 0 && j == 0) ? z : Complex(0.0, 0.0);
        big.block(i * n, j * n, n, n) =
            (corner - lin.b0(i, j)) *
                Eigen::MatrixXcd::Identity(n, n) -
            lin.b1(i, j) * s0c - lin.b2(i, j) * s1c;
      }
    }
    const Eigen::MatrixXcd inv =
        big.partialPivLu().solve(Eigen::MatrixXcd::Identity(3 * n, 3 * n));

    const Eigen::MatrixXd p2 = s0 * s1 + s1 * s0;
    const Eigen::MatrixXcd resolvent =
        (z * Eigen::MatrixXcd::Identity(n, n) - p2.cast<Complex>())
            .partialPivLu()
            .solve(Eigen::MatrixXcd::Identity(n, n));
    worst = std::max(
        worst,
        (inv.topLeftCorner(n, n) - resolvent).cwiseAbs().maxCoeff());
  }
  Outcome o;
  o.pass = worst < 1e-9;
  o.detail = fmt("worst corner-block deviation %.2e (limit 1e-9)", worst);
  return o;
}

// 6. Under the single-covariance statistic, ramps stay invisible while step
// and collapse scenarios raise alarms, on every seed.
Outcome check_single_statistic_separation() {
  int good = 0;
  std::string misses;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const BatteryResult r =
        run_battery(default_battery(seed), PolyId::P0, 100);
    const auto d = battery_decisions(r);
    const bool ok = d.at("rampA") == Decision::H0 &&
                    d.at("rampB") == Decision::H0 &&
                    d.at("step") == Decision::H1 &&
                    d.at("collapse") == Decision::H1;
    if (ok) {
      ++good;
    } else {
      misses += " " + std::to_string(seed);
    }
  }
  Outcome o;
  o.pass = good == 10;
  o.detail = fmt("%d/10 seeds separate ramps from step and collapse%s%s", good,
                 misses.empty() ? "" : ", failing seeds:", misses.c_str());
  return o;
}

// 7. Under linear fusion, every event raises an alarm and the severity
// ranking lands in the designed order on at least nine of ten seeds.
Outcome check_linear_fusion_battery() {
  const std::vector<std::string> expected = {"noise", "rampA", "rampB", "step",
                                             "collapse"};
  int good = 0;
  std::string misses;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const BatteryResult r =
        run_battery(default_battery(seed), PolyId::P1, 100);
    const auto d = battery_decisions(r);
    const bool ok = d.at("rampA") == Decision::H1 &&
                    d.at("rampB") == Decision::H1 &&
                    d.at("step") == Decision::H1 &&
                    d.at("collapse") == Decision::H1 &&
                    r.severity == expected;
    if (ok) {
      ++good;
    } else {
      misses += " " + std::to_string(seed);
    }
  }
  Outcome o;
  o.pass = good >= 9;
  o.detail = fmt("%d/10 seeds flag all events in the designed order%s%s", good,
                 misses.empty() ? "" : ", failing seeds:", misses.c_str());
  return o;
}

// 8. Under quadratic fusion, the noise spectrum hugs its bound while every
// event still raises an alarm, on at least nine of ten seeds.
Outcome check_quadratic_fusion_battery() {
  const SpectralDensity bound = bound_for(PolyId::P2, 118, 118);
  int good = 0;
  double worst_ks = 0.0;
  std::string misses;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::vector<BatteryScenario> battery = default_battery(seed);
    bool ok = true;
    for (const BatteryScenario& s : battery) {
      const TimeSeries ts = generate_scenario(s.spec);
      const DataMatrix v0 =
          sample_window(ts, kCampaignWindowStarts[0], kCampaignWindowLength);
      const DataMatrix vi =
          sample_window(ts, s.window_start, kCampaignWindowLength);
      std::vector<double> eigs;
      const Histogram hist =
          empirical_spectrum(v0, vi, PolyId::P2, 100, s.eta, 100,
                             RngStream{s.spec.seed, 3}, &eigs);
      const DetectionReport report = detect(eigs, bound);
      if (s.label == "noise") {
        const double ks = histogram_ks(hist, bound);
        worst_ks = std::max(worst_ks, ks);
        ok = ok && report.decision == Decision::H0 && ks < 0.06;
      } else {
        ok = ok && report.decision == Decision::H1;
      }
    }
    if (ok) {
      ++good;
    } else {
      misses += " " + std::to_string(seed);
    }
  }
  Outcome o;
  o.pass = good >= 9;
  o.detail = fmt("%d/10 seeds consistent, worst noise KS %.4f (limit 0.06)%s%s",
                 good, worst_ks, misses.empty() ? "" : ", failing seeds:",
                 misses.c_str());
  return o;
}

// 9. Pure-noise runs with default thresholds almost never raise an alarm.
Outcome check_false_alarm_rate() {
  const SpectralDensity bound = bound_for(PolyId::P0, 118, 118);
  int alarms = 0;
  for (int rep = 1; rep <= 50; ++rep) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::Noise;
    spec.n_nodes = kCampaignNodes;
    spec.total_samples = kCampaignTotalSamples;
    spec.seed = 1000 + static_cast<std::uint64_t>(rep);
    const TimeSeries ts = generate_scenario(spec);
    const DataMatrix v0 =
        sample_window(ts, kCampaignWindowStarts[0], kCampaignWindowLength);
    const DataMatrix vi =
        sample_window(ts, kCampaignWindowStarts[5], kCampaignWindowLength);
    std::vector<double> eigs;
    empirical_spectrum(v0, vi, PolyId::P0, 100, 0.01, 100,
                       RngStream{2000 + static_cast<std::uint64_t>(rep), 0},
                       &eigs);
    if (detect(eigs, bound).decision == Decision::H1) {
      ++alarms;
    }
  }
  Outcome o;
  o.pass = alarms <= 5;
  o.detail = fmt("%d/50 false alarms (limit 5)", alarms);
  return o;
}

int run_command(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// 10. Two report runs with the same seed produce byte-identical directories.
Outcome check_report_determinism() {
  std::string tmpl = (fs::temp_directory_path() / "freespec_accept_XXXXXX").string();
  Outcome o;
  if (mkdtemp(tmpl.data()) == nullptr) {
    o.detail = "cannot create scratch directory";
    return o;
  }
  const fs::path base(tmpl);
  const fs::path a = base / "a";
  const fs::path b = base / "b";
  const std::string flags = " report --seed 4 --trials 30 --out ";
  if (run_command(g_cli_path + flags + a.string() + " > /dev/null 2>&1") != 0 ||
      run_command(g_cli_path + flags + b.string() + " > /dev/null 2>&1") != 0) {
    o.detail = "report command failed";
    return o;
  }
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(a)) {
    names.push_back(entry.path().filename().string());
  }
  std::size_t compared = 0;
  bool identical = !names.empty();
  for (const std::string& name : names) {
    std::ifstream fa(a / name, std::ios::binary);
    std::ifstream fb(b / name, std::ios::binary);
    if (!fa || !fb) {
      identical = false;
      break;
    }
    std::ostringstream ba;
    std::ostringstream bb;
    ba << fa.rdbuf();
    bb << fb.rdbuf();
    identical = identical && ba.str() == bb.str();
    ++compared;
  }
  o.pass = identical && compared >= 13;
  o.detail = fmt("%zu files compared, %s", compared,
                 identical ? "byte-identical" : "MISMATCH");
  return o;
}

struct Check {
  int id;
  const char* label;
  Outcome (*run)();
};

const Check kChecks[] = {
    {1, "density recovery round trip", check_density_round_trip},
    {2, "single-covariance law at campaign scale", check_single_covariance_law},
    {3, "linear fusion bound edges and Monte Carlo fit",
     check_linear_fusion_bound},
    {4, "quadratic fusion bound Monte Carlo fit and mass",
     check_quadratic_fusion_bound},
    {5, "linearization corner identity", check_linearization_identity},
    {6, "single statistic separates step and collapse from ramps",
     check_single_statistic_separation},
    {7, "linear fusion flags all events in severity order",
     check_linear_fusion_battery},
    {8, "quadratic fusion consistency on noise and events",
     check_quadratic_fusion_battery},
    {9, "false-alarm rate under pure noise", check_false_alarm_rate},
    {10, "report command determinism", check_report_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for the spectral anomaly detection pipeline"};
  int only = 0;
  app.add_option("--only", only, "Run a single check by number (1-10)");
  app.add_option("--cli", g_cli_path, "Path to the pipeline binary");
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  int ran = 0;
  for (const Check& c : kChecks) {
    if (only != 0 && c.id != only) {
      continue;
    }
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%2d] %s  %s (%s)\n", c.id, o.pass ? "PASS" : "FAIL", c.label,
                o.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no check with number %d\n", only);
    return 2;
  }
  std::printf("%d/%d checks passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
