#include "causalsurv/svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace causalsurv {

namespace {

constexpr double kWidth = 640.0, kHeight = 400.0;
constexpr double kLeft = 60.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string step_plot_svg(const std::string& title, const std::vector<PlotSeries>& series,
                          double y_lo, double y_hi) {
  double x_max = 0.0;
  for (const auto& s : series) {
    for (double t : s.times) x_max = std::max(x_max, t);
  }
  if (x_max <= 0.0) x_max = 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double t) { return kLeft + t / x_max * plot_w; };
  auto py = [&](double v) { return kTop + (y_hi - v) / (y_hi - y_lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(title) << "</text>\n";

  svg << "<g stroke=\"#333\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  svg << "</g>\n";

  const int n_ticks = 5;
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i <= n_ticks; ++i) {
    const double t = x_max * i / n_ticks;
    const double x = px(t);
    svg << "<line x1=\"" << x << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << x << "\" y2=\""
        << kTop + plot_h + 5 << "\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">"
        << short_num(t) << "</text>\n";

    const double v = y_lo + (y_hi - y_lo) * i / n_ticks;
    const double y = py(v);
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
        << "\" stroke=\"#333\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
        << short_num(v) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">days</text>\n";
  svg << "</g>\n";

  for (const auto& s : series) {
    if (s.times.empty()) continue;
    std::ostringstream pts;
    double prev = s.values.front();
    pts << px(s.times.front()) << ',' << py(prev);
    for (std::size_t k = 1; k < s.times.size(); ++k) {
      pts << ' ' << px(s.times[k]) << ',' << py(prev);
      pts << ' ' << px(s.times[k]) << ',' << py(s.values[k]);
      prev = s.values[k];
    }
    pts << ' ' << px(x_max) << ',' << py(prev);
    svg << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" stroke-opacity=\"0.8\" points=\"" << pts.str() << "\"/>\n";
  }

  double legend_y = kTop + 8;
  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  std::vector<std::string> seen;
  for (const auto& s : series) {
    if (s.label.empty() || std::find(seen.begin(), seen.end(), s.label) != seen.end()) continue;
    seen.push_back(s.label);
    svg << "<line x1=\"" << kLeft + plot_w - 130 << "\" y1=\"" << legend_y << "\" x2=\""
        << kLeft + plot_w - 105 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kLeft + plot_w - 100 << "\" y=\"" << legend_y + 4 << "\">"
        << escape_xml(s.label) << "</text>\n";
    legend_y += 16;
  }
  svg << "</g>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace causalsurv
