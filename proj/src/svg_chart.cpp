#include "linkcast/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace linkcast {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void render_svg(std::ostream& out, const LineChart& chart) {
  constexpr double left = 70, right = 160, top = 40, bottom = 55;
  const double plot_w = chart.width - left - right;
  const double plot_h = chart.height - top - bottom;

  auto tx = [&](double x) { return chart.log_x ? std::log10(x) : x; };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isnan(s.y[i]) || (chart.log_x && s.x[i] <= 0)) continue;
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (chart.fixed_unit_y) ymin = 0, ymax = 1;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  auto px = [&](double x) { return left + (tx(x) - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\"" << chart.height
      << "\" viewBox=\"0 0 " << chart.width << ' ' << chart.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(chart.title) << "</text>\n";
  out << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(plot_w) << "\" height=\""
      << fmt(plot_h) << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double y = ymin + (ymax - ymin) * i / 5.0;
    out << "<line x1=\"" << fmt(left) << "\" x2=\"" << fmt(left + plot_w) << "\" y1=\"" << fmt(py(y)) << "\" y2=\""
        << fmt(py(y)) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py(y) + 4) << "\" text-anchor=\"end\">" << tick_label(y)
        << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double t = xmin + (xmax - xmin) * i / 5.0;
    const double x = chart.log_x ? std::pow(10.0, t) : t;
    const double sx = left + (t - xmin) / (xmax - xmin) * plot_w;
    out << "<text x=\"" << fmt(sx) << "\" y=\"" << fmt(top + plot_h + 18) << "\" text-anchor=\"middle\">"
        << tick_label(x) << "</text>\n";
  }
  out << "<text x=\"" << fmt(left + plot_w / 2) << "\" y=\"" << fmt(chart.height - 12.0)
      << "\" text-anchor=\"middle\">" << escape(chart.x_label) << (chart.log_x ? " (log)" : "") << "</text>\n";
  out << "<text transform=\"translate(18," << fmt(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(chart.y_label) << "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    std::string path;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isnan(s.y[i]) || (chart.log_x && s.x[i] <= 0)) {
        pen_down = false;
        continue;
      }
      path += (pen_down ? " L" : " M") + fmt(px(s.x[i])) + ',' + fmt(py(s.y[i]));
      pen_down = true;
    }
    out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isnan(s.y[i]) || (chart.log_x && s.x[i] <= 0)) continue;
      out << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"2.5\" fill=\"" << s.color
          << "\"/>\n";
    }
    const double ly = top + 14 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << fmt(left + plot_w + 12) << "\" x2=\"" << fmt(left + plot_w + 32) << "\" y1=\"" << fmt(ly)
        << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(left + plot_w + 38) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.name)
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace linkcast
