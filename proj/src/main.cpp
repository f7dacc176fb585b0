#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "freespec/battery.hpp"
#include "freespec/datagen.hpp"
#include "freespec/detection.hpp"
#include "freespec/empirical.hpp"
#include "freespec/errors.hpp"
#include "freespec/free_operator.hpp"
#include "freespec/free_scalar.hpp"
#include "freespec/plot.hpp"
#include "freespec/spectra.hpp"

namespace fs = std::filesystem;
using namespace freespec;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ContractViolation("cannot open " + path + " for writing");
  }
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct MpArgs {
  double c = 1.0;
  double sigma2 = 1.0;
  int points = 2000;
  std::string out;
};

void run_mp(const MpArgs& a) {
  MpParams p;
  p.sigma2 = a.sigma2;
  p.c = a.c;
  mp_density(p, a.points).save_csv(a.out);
}

struct AsdArgs {
  std::string poly = "p1";
  double c0 = 1.0;
  double c1 = 1.0;
  double eps = 0.0;  // 0 selects the per-statistic default
  double tol = 0.0;
  std::string out;
};

void run_asd(const AsdArgs& a) {
  MpParams p0;
  p0.c = a.c0;
  MpParams p1;
  p1.c = a.c1;
  const PolyId id = poly_from_string(a.poly);
  SpectralDensity d;
  if (id == PolyId::P1) {
    d = asd_p1(p0, p1, default_p1_grid(p0, p1), a.eps > 0.0 ? a.eps : 1e-5,
               a.tol > 0.0 ? a.tol : 1e-10);
  } else if (id == PolyId::P2) {
    d = asd_p2(p0, p1, default_p2_grid(p0, p1), a.eps > 0.0 ? a.eps : 1e-6,
               a.tol > 0.0 ? a.tol : 1e-9);
  } else {
    throw ContractViolation("asd expects --poly p1 or p2");
  }
  d.save_csv(a.out);
}

struct EsdArgs {
  std::string v0_path;
  std::string v1_path;
  std::string poly = "p1";
  int trials = 100;
  double eta = 0.01;
  std::uint64_t seed = 1;
  int bins = 100;
  std::string out;
};

Histogram compute_esd(const EsdArgs& a, std::vector<double>* eigs,
                      int* n_out, int* t_out) {
  const DataMatrix v0 = load_csv(a.v0_path);
  const DataMatrix v1 = load_csv(a.v1_path);
  if (n_out != nullptr) {
    *n_out = static_cast<int>(v1.rows());
    *t_out = static_cast<int>(v1.cols());
  }
  return empirical_spectrum(v0, v1, poly_from_string(a.poly), a.trials, a.eta,
                            a.bins, RngStream{a.seed, 0}, eigs);
}

void run_esd(const EsdArgs& a) {
  compute_esd(a, nullptr, nullptr, nullptr).save_csv(a.out);
}

struct DetectArgs {
  std::string hist_path;
  std::string bound_path;
  bool auto_bound = false;
  double margin = kDefaultMarginFrac;
  double min_fraction = kDefaultMinFraction;
  std::string out;
  EsdArgs esd;
};

void run_detect(const DetectArgs& a) {
  if (!a.hist_path.empty() &&
      (!a.esd.v0_path.empty() || !a.esd.v1_path.empty())) {
    throw ContractViolation("detect takes --hist or --v0/--v1, not both");
  }
  std::vector<double> eigs;
  int n = 0;
  int t = 0;
  if (!a.hist_path.empty()) {
    // Bin centers stand in for eigenvalues when only a histogram is given.
    const Histogram h = Histogram::load_csv(a.hist_path);
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      const double center = 0.5 * (h.bin_edges[i] + h.bin_edges[i + 1]);
      for (long k = 0; k < h.counts[i]; ++k) {
        eigs.push_back(center);
      }
    }
  } else if (!a.esd.v0_path.empty() && !a.esd.v1_path.empty()) {
    compute_esd(a.esd, &eigs, &n, &t);
  } else {
    throw ContractViolation("detect needs --hist or both --v0 and --v1");
  }

  SpectralDensity bound;
  if (a.auto_bound) {
    if (n == 0) {
      throw ContractViolation("--auto needs --v0/--v1 to fix the shape");
    }
    bound = bound_for(poly_from_string(a.esd.poly), n, t);
  } else if (!a.bound_path.empty()) {
    bound = SpectralDensity::load_csv(a.bound_path);
  } else {
    throw ContractViolation("detect needs --bound or --auto");
  }

  const DetectionReport report = detect(eigs, bound, a.margin, a.min_fraction);
  if (a.out.empty()) {
    std::cout << report.to_json() << "\n";
  } else {
    write_text(a.out, report.to_json() + "\n");
  }
}

struct SimulateArgs {
  std::string scenario_path;
  std::string out_dir;
};

void run_simulate(const SimulateArgs& a) {
  const ScenarioSpec spec = ScenarioSpec::from_json(read_text(a.scenario_path));
  const TimeSeries ts = generate_scenario(spec);
  fs::create_directories(a.out_dir);
  save_csv(ts.entries, (fs::path(a.out_dir) / "series.csv").string());
  for (int w = 0; w < static_cast<int>(kCampaignWindowStarts.size()); ++w) {
    const long start = kCampaignWindowStarts[w];
    if (start + kCampaignWindowLength > ts.total_samples()) {
      continue;  // the series ends before this window
    }
    const DataMatrix win = sample_window(ts, start, kCampaignWindowLength);
    const std::string name = campaign_window_label(w) + ".csv";
    save_csv(win, (fs::path(a.out_dir) / name).string());
  }
}

struct PlotArgs {
  std::vector<std::string> density_paths;
  std::vector<std::string> hist_paths;
  std::string out;
};

void run_plot(const PlotArgs& a) {
  std::vector<SpectralDensity> densities;
  for (const std::string& p : a.density_paths) {
    densities.push_back(SpectralDensity::load_csv(p));
  }
  std::vector<Histogram> hists;
  for (const std::string& p : a.hist_paths) {
    hists.push_back(Histogram::load_csv(p));
  }
  write_text(a.out, render_svg(densities, hists));
}

struct ReportArgs {
  std::string scenarios_path;
  std::string poly = "p1";
  std::uint64_t seed = 1;
  int trials = 100;
  int bins = 100;
  double margin = kDefaultMarginFrac;
  double min_fraction = kDefaultMinFraction;
  std::string out_dir;
};

void run_report(const ReportArgs& a) {
  std::vector<BatteryScenario> battery =
      a.scenarios_path.empty() ? default_battery(a.seed)
                               : battery_from_json(read_text(a.scenarios_path));
  const PolyId id = poly_from_string(a.poly);
  const BatteryResult result =
      run_battery(battery, id, a.trials, a.bins, a.margin, a.min_fraction);

  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  write_text((dir / "battery.json").string(), battery_to_json(battery) + "\n");
  result.bound.save_csv((dir / "bound.csv").string());
  for (const ScenarioOutcome& o : result.outcomes) {
    o.hist.save_csv((dir / (o.label + "_esd.csv")).string());
    write_text((dir / (o.label + "_report.json")).string(),
               o.report.to_json() + "\n");
  }
  nlohmann::ordered_json sev;
  sev["severity_ascending"] = result.severity;
  write_text((dir / "severity.json").string(), sev.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral anomaly detection via fused covariance statistics"};
  app.require_subcommand(1);

  MpArgs mp_args;
  CLI::App* mp = app.add_subcommand("mp", "Covariance spectrum density CSV");
  mp->add_option("--c", mp_args.c, "Aspect ratio N/T in (0, 1]");
  mp->add_option("--sigma2", mp_args.sigma2, "Entry variance");
  mp->add_option("--points", mp_args.points, "Grid points");
  mp->add_option("--out", mp_args.out, "Output CSV path")->required();
  mp->callback([&] { run_mp(mp_args); });

  AsdArgs asd_args;
  CLI::App* asd =
      app.add_subcommand("asd", "Fused-statistic theoretical density CSV");
  asd->add_option("--poly", asd_args.poly, "Statistic: p1 or p2");
  asd->add_option("--c0", asd_args.c0, "Aspect ratio of the first input");
  asd->add_option("--c1", asd_args.c1, "Aspect ratio of the second input");
  asd->add_option("--eps", asd_args.eps, "Regularization height");
  asd->add_option("--tol", asd_args.tol, "Fixed-point tolerance");
  asd->add_option("--out", asd_args.out, "Output CSV path")->required();
  asd->callback([&] { run_asd(asd_args); });

  EsdArgs esd_args;
  CLI::App* esd =
      app.add_subcommand("esd", "Empirical spectrum histogram CSV");
  esd->add_option("--v0", esd_args.v0_path, "Reference window CSV")->required();
  esd->add_option("--v1", esd_args.v1_path, "Analysis window CSV")->required();
  esd->add_option("--poly", esd_args.poly, "Statistic: p0, p1 or p2");
  esd->add_option("--trials", esd_args.trials, "Monte Carlo trials");
  esd->add_option("--eta", esd_args.eta, "Per-trial noise level");
  esd->add_option("--seed", esd_args.seed, "Seed");
  esd->add_option("--bins", esd_args.bins, "Histogram bins");
  esd->add_option("--out", esd_args.out, "Output CSV path")->required();
  esd->callback([&] { run_esd(esd_args); });

  DetectArgs det_args;
  CLI::App* det =
      app.add_subcommand("detect", "Outlier decision against a bound");
  det->add_option("--hist", det_args.hist_path, "Histogram CSV input");
  det->add_option("--v0", det_args.esd.v0_path, "Reference window CSV");
  det->add_option("--v1", det_args.esd.v1_path, "Analysis window CSV");
  det->add_option("--poly", det_args.esd.poly, "Statistic: p0, p1 or p2");
  det->add_option("--trials", det_args.esd.trials, "Monte Carlo trials");
  det->add_option("--eta", det_args.esd.eta, "Per-trial noise level");
  det->add_option("--seed", det_args.esd.seed, "Seed");
  det->add_option("--bins", det_args.esd.bins, "Histogram bins");
  det->add_option("--bound", det_args.bound_path, "Bound density CSV");
  det->add_flag("--auto", det_args.auto_bound,
                "Derive the bound from --poly and the window shape");
  det->add_option("--margin", det_args.margin, "Outlier margin fraction");
  det->add_option("--min-fraction", det_args.min_fraction,
                  "Outlier fraction needed for H1");
  det->add_option("--out", det_args.out, "Report JSON path (default stdout)");
  det->callback([&] { run_detect(det_args); });

  SimulateArgs sim_args;
  CLI::App* sim =
      app.add_subcommand("simulate", "Synthetic series and window CSVs");
  sim->add_option("--scenario", sim_args.scenario_path, "Scenario JSON path")
      ->required();
  sim->add_option("--out", sim_args.out_dir, "Output directory")->required();
  sim->callback([&] { run_simulate(sim_args); });

  PlotArgs plot_args;
  CLI::App* plot = app.add_subcommand("plot", "SVG overlay of inputs");
  plot->add_option("--density", plot_args.density_paths, "Density CSV paths");
  plot->add_option("--hist", plot_args.hist_paths, "Histogram CSV paths");
  plot->add_option("--out", plot_args.out, "Output SVG path")->required();
  plot->callback([&] { run_plot(plot_args); });

  ReportArgs rep_args;
  CLI::App* rep =
      app.add_subcommand("report", "Scenario battery with severity ranking");
  rep->add_option("--scenarios", rep_args.scenarios_path,
                  "Battery JSON path (default: built-in battery)");
  rep->add_option("--poly", rep_args.poly, "Statistic: p0, p1 or p2");
  rep->add_option("--seed", rep_args.seed, "Seed for the built-in battery");
  rep->add_option("--trials", rep_args.trials, "Monte Carlo trials");
  rep->add_option("--bins", rep_args.bins, "Histogram bins");
  rep->add_option("--margin", rep_args.margin, "Outlier margin fraction");
  rep->add_option("--min-fraction", rep_args.min_fraction,
                  "Outlier fraction needed for H1");
  rep->add_option("--out", rep_args.out_dir, "Output directory")->required();
  rep->callback([&] { run_report(rep_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
