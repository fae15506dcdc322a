#ifndef BPSIM_PLOT_HPP_
#define BPSIM_PLOT_HPP_

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "bpsim/simcore.hpp"

namespace bpsim {

/// One curve of an SVG line plot. NaN samples break the polyline.
struct PlotSeries {
  std::string label;
  const std::vector<double>* x = nullptr;
  const std::vector<double>* y = nullptr;
  std::string color = "#1f6fb4";
};

// Static vector plot: axes, ticks, legend, optional vertical marker (e.g.
// the switch time; NaN disables it). Long traces are decimated to keep the
// file small.
void write_svg_plot(std::ostream& out, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series,
                    double marker_x = std::numeric_limits<double>::quiet_NaN());

// The standard figure set for a run, written into dir: output_y.svg
// (y and delta overlay), control_u.svg, estimates.svg (theta_hat vs
// theta_F). Returns the paths written.
std::vector<std::string> write_standard_plots(const std::string& dir,
                                              const Scenario& scenario,
                                              const RunResult& result);

}  // namespace bpsim

#endif  // BPSIM_PLOT_HPP_
