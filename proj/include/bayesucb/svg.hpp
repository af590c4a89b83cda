#pragma once

#include <string>
#include <vector>

namespace bayesucb {

// One polyline; y_err, when nonempty, draws a shaded band y +/- y_err.
struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_err;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ChartSeries> series;
  int width = 860;
  int height = 520;
  bool log_x = false;
};

// Renders a self-contained SVG line chart (no external assets).
std::string render_line_chart(const ChartSpec& spec);

void write_line_chart(const std::string& path, const ChartSpec& spec);

}  // namespace bayesucb
