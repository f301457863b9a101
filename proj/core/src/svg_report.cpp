#include "sharesim/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sharesim/errors.hpp"

namespace sharesim {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 84.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 48.0;
constexpr double kMarginBottom = 64.0;

// Positive floor so zero or clamped-to-zero CI bounds stay on the log axis.
constexpr double kLogFloor = 1e-12;

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

std::string fmt_tick(double decade_exponent) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "1e%d", static_cast<int>(decade_exponent));
  return buffer;
}

struct LogAxis {
  double lo_exp = 0.0;
  double hi_exp = 1.0;

  double to_unit(double value) const {
    const double e = std::log10(std::max(value, kLogFloor));
    return (e - lo_exp) / (hi_exp - lo_exp);
  }
};

LogAxis fit_axis(double min_value, double max_value) {
  LogAxis axis;
  axis.lo_exp = std::floor(std::log10(std::max(min_value, kLogFloor)));
  axis.hi_exp = std::ceil(std::log10(std::max(max_value, kLogFloor)));
  if (axis.hi_exp <= axis.lo_exp) axis.hi_exp = axis.lo_exp + 1.0;
  return axis;
}

}  // namespace

std::string render_mse_chart_svg(const std::string& title, std::span<const ChartSeries> series) {
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool any = false;
  for (const ChartSeries& s : series) {
    for (const CurvePoint& p : s.points) {
      if (std::isnan(p.mse)) continue;
      const double lo = std::max(p.ci_low, kLogFloor);
      const double hi = std::max(p.ci_high, kLogFloor);
      const double mse = std::max(p.mse, kLogFloor);
      const double n = static_cast<double>(p.sample_size);
      if (!any) {
        min_x = max_x = n;
        min_y = std::min(lo, mse);
        max_y = std::max(hi, mse);
        any = true;
      } else {
        min_x = std::min(min_x, n);
        max_x = std::max(max_x, n);
        min_y = std::min(min_y, std::min(lo, mse));
        max_y = std::max(max_y, std::max(hi, mse));
      }
    }
  }
  if (!any) throw Error("no plottable points for chart '" + title + "'");

  const LogAxis x_axis = fit_axis(min_x, max_x);
  const LogAxis y_axis = fit_axis(min_y, max_y);
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double n) { return kMarginLeft + x_axis.to_unit(n) * plot_w; };
  auto py = [&](double v) { return kMarginTop + (1.0 - y_axis.to_unit(v)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // Gridlines and ticks at every decade.
  for (double e = x_axis.lo_exp; e <= x_axis.hi_exp + 0.5; e += 1.0) {
    const double x = px(std::pow(10.0, e));
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kMarginTop) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(kMarginTop + plot_h) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kMarginTop + plot_h + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(e)
        << "</text>\n";
  }
  for (double e = y_axis.lo_exp; e <= y_axis.hi_exp + 0.5; e += 1.0) {
    const double y = py(std::pow(10.0, e));
    svg << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(y) << "\" x2=\""
        << fmt(kMarginLeft + plot_w) << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << fmt(kMarginLeft - 8) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(e)
        << "</text>\n";
  }
  svg << "<rect x=\"" << fmt(kMarginLeft) << "\" y=\"" << fmt(kMarginTop) << "\" width=\""
      << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
      << "\" fill=\"none\" stroke=\"#222222\"/>\n";

  // Axis labels.
  svg << "<text x=\"" << fmt(kMarginLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << "sample size (trajectories)</text>\n";
  svg << "<text x=\"20\" y=\"" << fmt(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 20 " << fmt(kMarginTop + plot_h / 2) << ")\">"
      << "MSE of the ATE estimate</text>\n";

  for (const ChartSeries& s : series) {
    std::vector<const CurvePoint*> points;
    for (const CurvePoint& p : s.points) {
      if (!std::isnan(p.mse)) points.push_back(&p);
    }
    if (points.empty()) continue;

    if (points.size() == 1) {
      // Single sample size: point with an error bar.
      const CurvePoint& p = *points.front();
      const double x = px(static_cast<double>(p.sample_size));
      svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(py(std::max(p.ci_low, kLogFloor)))
          << "\" x2=\"" << fmt(x) << "\" y2=\"" << fmt(py(std::max(p.ci_high, kLogFloor)))
          << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
      svg << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(py(std::max(p.mse, kLogFloor)))
          << "\" r=\"4\" fill=\"" << s.color << "\"/>\n";
      continue;
    }

    // CI band: upper bound left to right, lower bound back.
    svg << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
    for (const CurvePoint* p : points) {
      svg << fmt(px(static_cast<double>(p->sample_size))) << ','
          << fmt(py(std::max(p->ci_high, kLogFloor))) << ' ';
    }
    for (auto it = points.rbegin(); it != points.rend(); ++it) {
      svg << fmt(px(static_cast<double>((*it)->sample_size))) << ','
          << fmt(py(std::max((*it)->ci_low, kLogFloor))) << ' ';
    }
    svg << "\"/>\n";

    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    for (const CurvePoint* p : points) {
      svg << fmt(px(static_cast<double>(p->sample_size))) << ','
          << fmt(py(std::max(p->mse, kLogFloor))) << ' ';
    }
    svg << "\"/>\n";
  }

  // Legend, top right.
  double legend_y = kMarginTop + 16.0;
  const double legend_x = kMarginLeft + plot_w - 190.0;
  for (const ChartSeries& s : series) {
    svg << "<rect x=\"" << fmt(legend_x) << "\" y=\"" << fmt(legend_y - 9) << "\" width=\"18\" "
        << "height=\"10\" fill=\"" << s.color << "\"/>\n";
    svg << "<text x=\"" << fmt(legend_x + 24) << "\" y=\"" << fmt(legend_y)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    legend_y += 18.0;
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace sharesim
