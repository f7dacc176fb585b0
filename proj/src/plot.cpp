#include "freespec/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "freespec/errors.hpp"

namespace freespec {

namespace {

constexpr const char* kDensityColors[] = {"#1f4e9c", "#b3282d", "#2e7d32",
                                          "#7b1fa2"};
constexpr const char* kHistColors[] = {"#8faed4", "#e0a3a5", "#a5c9a7",
                                       "#c6a4d4"};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

// Round tick spacing to 1, 2, or 5 times a power of ten.
double tick_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double mult : {1.0, 2.0, 5.0}) {
    if (mult * mag >= raw) {
      return mult * mag;
    }
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const std::vector<SpectralDensity>& densities,
                       const std::vector<Histogram>& histograms, int width,
                       int height) {
  if (densities.empty() && histograms.empty()) {
    throw ContractViolation("plot needs at least one density or histogram");
  }
  if (width < 200 || height < 150) {
    throw ContractViolation("plot canvas too small");
  }

  Range x;
  Range y;
  bool first = true;
  for (const SpectralDensity& d : densities) {
    d.validate();
    for (std::size_t i = 0; i < d.grid.size(); ++i) {
      if (first) {
        x.lo = x.hi = d.grid[i];
        first = false;
      }
      x.include(d.grid[i]);
      y.include(d.values[i]);
    }
  }
  for (const Histogram& h : histograms) {
    h.validate();
    for (double e : h.bin_edges) {
      if (first) {
        x.lo = x.hi = e;
        first = false;
      }
      x.include(e);
    }
    for (double v : h.density) {
      y.include(v);
    }
  }
  if (!(x.hi > x.lo)) {
    x.hi = x.lo + 1.0;
  }
  y.lo = 0.0;
  if (!(y.hi > 0.0)) {
    y.hi = 1.0;
  }
  y.hi *= 1.06;

  const double ml = 64.0;
  const double mr = 20.0;
  const double mt = 20.0;
  const double mb = 44.0;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;
  const auto sx = [&](double v) {
    return ml + (v - x.lo) / (x.hi - x.lo) * pw;
  };
  const auto sy = [&](double v) {
    return mt + ph - (v - y.lo) / (y.hi - y.lo) * ph;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width
      << ' ' << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  // Histogram bars first so density curves stay visible on top.
  for (std::size_t k = 0; k < histograms.size(); ++k) {
    const Histogram& h = histograms[k];
    const char* color = kHistColors[k % 4];
    svg << "<g fill=\"" << color << "\" fill-opacity=\"0.6\">\n";
    for (std::size_t i = 0; i < h.density.size(); ++i) {
      if (h.density[i] <= 0.0) {
        continue;
      }
      const double x0 = sx(h.bin_edges[i]);
      const double x1 = sx(h.bin_edges[i + 1]);
      const double y1 = sy(std::min(h.density[i], y.hi));
      svg << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\""
          << num(x1 - x0) << "\" height=\"" << num(mt + ph - y1) << "\"/>\n";
    }
    svg << "</g>\n";
  }

  for (std::size_t k = 0; k < densities.size(); ++k) {
    const SpectralDensity& d = densities[k];
    svg << "<polyline fill=\"none\" stroke=\"" << kDensityColors[k % 4]
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < d.grid.size(); ++i) {
      if (i > 0) {
        svg << ' ';
      }
      svg << num(sx(d.grid[i])) << ',' << num(sy(std::min(d.values[i], y.hi)));
    }
    svg << "\"/>\n";
  }

  // Axes and ticks.
  svg << "<g stroke=\"#333\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << num(ml) << "\" y1=\"" << num(mt + ph) << "\" x2=\""
      << num(ml + pw) << "\" y2=\"" << num(mt + ph) << "\"/>\n";
  svg << "<line x1=\"" << num(ml) << "\" y1=\"" << num(mt) << "\" x2=\""
      << num(ml) << "\" y2=\"" << num(mt + ph) << "\"/>\n";
  svg << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  const double xstep = tick_step(x.hi - x.lo, 8);
  for (double v = std::ceil(x.lo / xstep) * xstep; v <= x.hi + 1e-9 * xstep;
       v += xstep) {
    svg << "<line stroke=\"#333\" x1=\"" << num(sx(v)) << "\" y1=\""
        << num(mt + ph) << "\" x2=\"" << num(sx(v)) << "\" y2=\""
        << num(mt + ph + 5) << "\"/>\n";
    svg << "<text x=\"" << num(sx(v)) << "\" y=\"" << num(mt + ph + 18)
        << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
  }
  const double ystep = tick_step(y.hi - y.lo, 6);
  for (double v = 0.0; v <= y.hi + 1e-9 * ystep; v += ystep) {
    svg << "<line stroke=\"#333\" x1=\"" << num(ml - 5) << "\" y1=\""
        << num(sy(v)) << "\" x2=\"" << num(ml) << "\" y2=\"" << num(sy(v))
        << "\"/>\n";
    svg << "<text x=\"" << num(ml - 8) << "\" y=\"" << num(sy(v) + 4)
        << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace freespec
