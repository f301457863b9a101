#pragma once

#include <span>
#include <string>
#include <vector>

#include "sharesim/sweep_io.hpp"

namespace sharesim {

// One estimator's curve on a chart: mean MSE per sample size plus the 95%
// band. Points must be sorted by sample size.
struct ChartSeries {
  std::string label;
  std::string color;  // CSS color
  std::vector<CurvePoint> points;
};

// Log-log MSE chart for one variant pair: one band + mean line per series,
// axis decade ticks, and a legend. With a single sample size the bands
// degenerate to points with error bars. Returns a complete SVG document.
std::string render_mse_chart_svg(const std::string& title, std::span<const ChartSeries> series);

}  // namespace sharesim
