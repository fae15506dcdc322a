#include "bpsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace bpsim {
namespace {

constexpr int kWidth = 820, kHeight = 420;
constexpr int kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
constexpr std::size_t kMaxPointsPerSeries = 4000;

struct Range {
  double lo = 0.0, hi = 1.0;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Range fit(const std::vector<PlotSeries>& series, bool horizontal) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series) {
    const auto& v = horizontal ? *s.x : *s.y;
    for (double x : v) {
      if (!std::isfinite(x)) continue;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!(lo < hi)) {
    if (!std::isfinite(lo)) return {0.0, 1.0};
    return {lo - 1.0, lo + 1.0};
  }
  const double pad = horizontal ? 0.0 : 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

// Round tick spacing to 1/2/5 x 10^n covering roughly 6 intervals.
std::vector<double> ticks(const Range& r) {
  const double span = r.hi - r.lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> out;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * span; v += step)
    out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return out;
}

}  // namespace

void write_svg_plot(std::ostream& out, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series, double marker_x) {
  for (const auto& s : series) {
    if (!s.x || !s.y || s.x->size() != s.y->size())
      throw std::invalid_argument("write_svg_plot: malformed series");
  }
  const Range xr = fit(series, true), yr = fit(series, false);
  auto px = [&](double x) {
    return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - kLeft - kRight);
  };
  auto py = [&](double y) {
    return kHeight - kBottom -
           (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - kTop - kBottom);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";

  // Grid and tick labels.
  for (double tx : ticks(xr)) {
    const double X = px(tx);
    out << "<line x1=\"" << fmt(X) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(X)
        << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << fmt(X) << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(tx) << "</text>\n";
  }
  for (double ty : ticks(yr)) {
    const double Y = py(ty);
    out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(Y) << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << fmt(Y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(Y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(ty) << "</text>\n";
  }
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
      << kWidth - kLeft - kRight << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  if (std::isfinite(marker_x) && marker_x >= xr.lo && marker_x <= xr.hi) {
    out << "<line x1=\"" << fmt(px(marker_x)) << "\" y1=\"" << kTop
        << "\" x2=\"" << fmt(px(marker_x)) << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"#888888\" stroke-width=\"1\" "
           "stroke-dasharray=\"5,4\"/>\n";
  }

  for (const auto& s : series) {
    const std::size_t n = s.x->size();
    const std::size_t stride = std::max<std::size_t>(1, n / kMaxPointsPerSeries);
    out << "<path fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.4\" d=\"";
    bool pen_down = false;
    for (std::size_t i = 0; i < n; i += stride) {
      const double x = (*s.x)[i], y = (*s.y)[i];
      if (!std::isfinite(x) || !std::isfinite(y)) {
        pen_down = false;
        continue;
      }
      out << (pen_down ? 'L' : 'M') << fmt(px(x)) << ' ' << fmt(py(y));
      pen_down = true;
    }
    out << "\"/>\n";
  }

  // Legend (top-right inside the frame) and axis labels.
  int ly = kTop + 16;
  for (const auto& s : series) {
    out << "<line x1=\"" << kWidth - kRight - 150 << "\" y1=\"" << ly - 4
        << "\" x2=\"" << kWidth - kRight - 122 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kWidth - kRight - 116 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
        << "</text>\n";
    ly += 16;
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\""
      << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << (kTop + kHeight - kBottom) / 2 << ")\">" << y_label << "</text>\n"
      << "</svg>\n";
}

std::vector<std::string> write_standard_plots(const std::string& dir,
                                              const Scenario& scenario,
                                              const RunResult& result) {
  namespace fs = std::filesystem;
  const TraceLog& tr = result.trace;
  const auto& t = tr.column("t");
  const double marker = tr.switch_event()
                            ? tr.switch_event()->t
                            : std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> written;
  auto emit = [&](const std::string& file, const std::string& title,
                  const std::string& ylab, const std::vector<PlotSeries>& ss) {
    const fs::path path = fs::path(dir) / file;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot: " + path.string());
    write_svg_plot(out, scenario.name + ": " + title, "t [s]", ylab, ss, marker);
    written.push_back(path.string());
  };

  emit("output_y.svg", "output vs disturbance", "signal",
       {{"y", &t, &tr.column("y"), "#1f6fb4"},
        {"delta", &t, &tr.column("delta"), "#d1662c"}});
  if (scenario.mode == RunMode::kClosedLoop) {
    emit("control_u.svg", "control signal", "u",
         {{"u", &t, &tr.column("u"), "#1f6fb4"}});
  }
  emit("estimates.svg", "gradient vs finite-time estimate", "theta",
       {{"theta_hat", &t, &tr.column("theta_hat"), "#1f6fb4"},
        {"theta_F", &t, &tr.column("theta_F"), "#c0392b"}});
  return written;
}

}  // namespace bpsim
