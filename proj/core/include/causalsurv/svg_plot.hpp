#pragma once

#include <string>
#include <vector>

#include "causalsurv/survival_core.hpp"

namespace causalsurv {

struct PlotSeries {
  std::string label;
  std::string color;  // SVG color name or #rrggbb
  std::vector<double> times;
  std::vector<double> values;
};

// Minimal step-function plot: each series drawn as a right-continuous
// staircase polyline, with axes, ticks, and a legend. y_lo/y_hi fix the value
// axis (survival plots use [0,1], difference plots are symmetric around 0).
std::string step_plot_svg(const std::string& title, const std::vector<PlotSeries>& series,
                          double y_lo, double y_hi);

}  // namespace causalsurv
