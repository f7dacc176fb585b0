#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "freespec/datagen.hpp"
#include "freespec/empirical.hpp"
#include "freespec/errors.hpp"
#include "freespec/linalg.hpp"
#include "freespec/spectra.hpp"
#include "freespec/stats.hpp"

namespace {

freespec::ScenarioSpec reference_spec(std::uint64_t seed, int n, long total) {
  freespec::ScenarioSpec s;
  s.kind = freespec::ScenarioKind::Reference;
  s.n_nodes = n;
  s.total_samples = total;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_SUITE("datagen") {

TEST_CASE("scenario kinds round-trip through their names") {
  using freespec::ScenarioKind;
  for (const ScenarioKind k :
       {ScenarioKind::Reference, ScenarioKind::Step, ScenarioKind::Ramp,
        ScenarioKind::Collapse, ScenarioKind::Noise}) {
    CHECK(freespec::scenario_kind_from_string(
              freespec::scenario_kind_to_string(k)) == k);
  }
  CHECK_THROWS_AS(freespec::scenario_kind_from_string("surge"),
                  freespec::ContractViolation);
}

TEST_CASE("scenario validation rejects inconsistent recipes") {
  freespec::ScenarioSpec s = reference_spec(1, 10, 100);
  CHECK_NOTHROW(s.validate());

  freespec::ScenarioSpec bad = s;
  bad.n_nodes = 0;
  CHECK_THROWS_AS(bad.validate(), freespec::ContractViolation);

  bad = s;
  bad.kind = freespec::ScenarioKind::Step;
  CHECK_THROWS_AS(bad.validate(), freespec::ContractViolation);

  bad = s;
  bad.kind = freespec::ScenarioKind::Step;
  bad.target_nodes = {3};
  bad.magnitude = 0.0;
  CHECK_THROWS_AS(bad.validate(), freespec::ContractViolation);

  bad.magnitude = 2.0;
  CHECK_NOTHROW(bad.validate());
  bad.onset = 100;
  CHECK_THROWS_AS(bad.validate(), freespec::ContractViolation);
  bad.onset = -1;
  CHECK_THROWS_AS(bad.validate(), freespec::ContractViolation);

  bad.onset = 10;
  bad.target_nodes = {10};
  CHECK_THROWS_AS(bad.validate(), freespec::ContractViolation);

  bad.target_nodes = {3};
  bad.magnitude = -1.0;
  CHECK_THROWS_AS(bad.validate(), freespec::ContractViolation);
}

TEST_CASE("scenario JSON round-trips and rejects malformed text") {
  freespec::ScenarioSpec s;
  s.kind = freespec::ScenarioKind::Ramp;
  s.target_nodes = {2, 5, 7};
  s.magnitude = 3.25;
  s.onset = 40;
  s.total_samples = 400;
  s.n_nodes = 12;
  s.seed = 99;
  const std::string text = s.to_json();
  const freespec::ScenarioSpec back = freespec::ScenarioSpec::from_json(text);
  CHECK(back.kind == s.kind);
  CHECK(back.target_nodes == s.target_nodes);
  CHECK(back.magnitude == s.magnitude);
  CHECK(back.onset == s.onset);
  CHECK(back.total_samples == s.total_samples);
  CHECK(back.n_nodes == s.n_nodes);
  CHECK(back.seed == s.seed);

  CHECK_THROWS_AS(freespec::ScenarioSpec::from_json("not json"),
                  freespec::ParseError);
  CHECK_THROWS_AS(freespec::ScenarioSpec::from_json("{\"kind\":\"ramp\"}"),
                  freespec::ParseError);
  CHECK_THROWS_AS(
      freespec::ScenarioSpec::from_json("{\"kind\":7,\"n_nodes\":3}"),
      freespec::ParseError);
}

TEST_CASE("generation is deterministic per seed and differs across seeds") {
  const freespec::ScenarioSpec s = reference_spec(42, 20, 300);
  const freespec::TimeSeries a = freespec::generate_scenario(s);
  const freespec::TimeSeries b = freespec::generate_scenario(s);
  CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() == 0.0);
  const freespec::TimeSeries c =
      freespec::generate_scenario(reference_spec(43, 20, 300));
  CHECK((a.entries - c.entries).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("noise scenarios share the reference baseline") {
  freespec::ScenarioSpec s = reference_spec(7, 16, 200);
  const freespec::TimeSeries ref = freespec::generate_scenario(s);
  s.kind = freespec::ScenarioKind::Noise;
  const freespec::TimeSeries noise = freespec::generate_scenario(s);
  CHECK((ref.entries - noise.entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a step adds its magnitude on targets after onset") {
  freespec::ScenarioSpec s = reference_spec(9, 12, 150);
  const freespec::TimeSeries ref = freespec::generate_scenario(s);
  s.kind = freespec::ScenarioKind::Step;
  s.target_nodes = {1, 4};
  s.magnitude = 2.5;
  s.onset = 60;
  const freespec::TimeSeries step = freespec::generate_scenario(s);
  const Eigen::MatrixXd diff = step.entries - ref.entries;
  CHECK(diff.leftCols(60).cwiseAbs().maxCoeff() == 0.0);
  for (long t = 60; t < 150; ++t) {
    CHECK(diff(1, t) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(diff(4, t) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(diff(0, t) == 0.0);
  }
}

TEST_CASE("a ramp grows linearly from onset to the series end") {
  freespec::ScenarioSpec s = reference_spec(10, 8, 120);
  const freespec::TimeSeries ref = freespec::generate_scenario(s);
  s.kind = freespec::ScenarioKind::Ramp;
  s.target_nodes = {3};
  s.magnitude = 4.0;
  s.onset = 20;
  const freespec::TimeSeries ramp = freespec::generate_scenario(s);
  const Eigen::MatrixXd diff = ramp.entries - ref.entries;
  CHECK(diff.leftCols(20).cwiseAbs().maxCoeff() == 0.0);
  const double span = 120.0 - 20.0;
  for (long t = 20; t < 120; t += 13) {
    CHECK(diff(3, t) ==
          doctest::Approx(4.0 * (t - 20) / span).epsilon(1e-12));
  }
  CHECK(diff.row(2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a collapse rescales target amplitudes progressively") {
  freespec::ScenarioSpec s = reference_spec(11, 6, 100);
  const freespec::TimeSeries ref = freespec::generate_scenario(s);
  s.kind = freespec::ScenarioKind::Collapse;
  s.target_nodes = {0, 5};
  s.magnitude = 1.0;
  s.onset = 50;
  const freespec::TimeSeries collapse = freespec::generate_scenario(s);
  for (long t = 50; t < 100; t += 7) {
    const double factor = 1.0 + 4.0 * (t - 50) / 50.0;
    CHECK(collapse.entries(0, t) ==
          doctest::Approx(factor * ref.entries(0, t)).epsilon(1e-12));
  }
  CHECK((collapse.entries.row(1) - ref.entries.row(1)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("reference windows follow the square covariance law") {
  std::vector<double> eigs;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const freespec::TimeSeries ts =
        freespec::generate_scenario(reference_spec(seed, 118, 400));
    const freespec::DataMatrix w = freespec::sample_window(ts, 100, 118);
    const Eigen::MatrixXd cov =
        freespec::covariance(freespec::standardize(w));
    const Eigen::VectorXd ev = freespec::hermitian_eigenvalues(cov);
    for (int i = 0; i < ev.size(); ++i) {
      eigs.push_back(ev[i]);
    }
  }
  const freespec::SpectralDensity mp = freespec::mp_density({1.0, 1.0}, 2000);
  CHECK(freespec::ks_distance(eigs, freespec::density_cdf(mp)) < 0.05);
}

TEST_CASE("sample_window slices exactly and checks its range") {
  const freespec::TimeSeries ts =
      freespec::generate_scenario(reference_spec(3, 5, 50));
  const freespec::DataMatrix w = freespec::sample_window(ts, 10, 20);
  CHECK(w.rows() == 5);
  CHECK(w.cols() == 20);
  CHECK((w - ts.entries.middleCols(10, 20)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(freespec::sample_window(ts, 40, 20),
                  freespec::ContractViolation);
  CHECK_THROWS_AS(freespec::sample_window(ts, -1, 10),
                  freespec::ContractViolation);
  CHECK_THROWS_AS(freespec::sample_window(ts, 0, 0),
                  freespec::ContractViolation);
}

TEST_CASE("data CSV round-trips rectangles exactly") {
  freespec::DataMatrix m(2, 3);
  m << 1.0, -2.5e-13, 3.00000000000000711, 4.0, 5.5, -6.25;
  const std::string path = "/tmp/freespec_data_roundtrip.csv";
  freespec::save_csv(m, path);
  const freespec::DataMatrix back = freespec::load_csv(path);
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("data CSV loading reports structural problems") {
  const std::string ragged = "/tmp/freespec_data_ragged.csv";
  {
    std::FILE* f = std::fopen(ragged.c_str(), "w");
    std::fputs("1,2,3\n4,5\n", f);
    std::fclose(f);
  }
  try {
    freespec::load_csv(ragged);
    FAIL("expected ParseError");
  } catch (const freespec::ParseError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }

  const std::string alpha = "/tmp/freespec_data_alpha.csv";
  {
    std::FILE* f = std::fopen(alpha.c_str(), "w");
    std::fputs("1,x\n", f);
    std::fclose(f);
  }
  try {
    freespec::load_csv(alpha);
    FAIL("expected ParseError");
  } catch (const freespec::ParseError& e) {
    CHECK(std::string(e.what()).find("column 2") != std::string::npos);
  }

  const std::string empty = "/tmp/freespec_data_empty.csv";
  {
    std::FILE* f = std::fopen(empty.c_str(), "w");
    std::fclose(f);
  }
  CHECK_THROWS_AS(freespec::load_csv(empty), freespec::ParseError);
  CHECK_THROWS_AS(freespec::load_csv("/tmp/freespec_no_such_file.csv"),
                  freespec::ParseError);
}

}  // TEST_SUITE
