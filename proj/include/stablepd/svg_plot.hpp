#pragma once

#include "stablepd/io.hpp"

#include <string>
#include <vector>

namespace stablepd {

struct PlotPoint {
  int degree = 0;
  double birth = 0;
  double death = 0;
};

struct PlotOptions {
  int size = 480;
  std::string title;
};

/// Reads either a diagram CSV or a stable-diagram CSV (chosen by header).
std::vector<PlotPoint> read_plot_points(std::istream& in);

/// Scatter of (death, birth) with the diagonal; degree 0 as red circles, degree 1 as blue squares.
std::string render_diagram_svg(const std::vector<PlotPoint>& points, const PlotOptions& opts = {});

}  // namespace stablepd
