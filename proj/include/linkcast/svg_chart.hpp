#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linkcast {

struct ChartSeries {
  std::string name;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;  // NaN breaks the line
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool fixed_unit_y = false;  // pin the y axis to [0, 1]
  int width = 720;
  int height = 420;
  std::vector<ChartSeries> series;
};

/// Deterministic SVG rendering: identical input gives identical bytes.
void render_svg(std::ostream& out, const LineChart& chart);

}  // namespace linkcast
