#include "bayesucb/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bayesucb {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

std::string num(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// Round tick labels toward 1-2-5 steps.
std::vector<double> nice_ticks(double lo, double hi, int target) {
  std::vector<double> ticks;
  if (!(hi > lo)) {
    ticks.push_back(lo);
    return ticks;
  }
  const double raw_step = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw_step) {
      step = mag * m;
      break;
    }
  }
  const double first = std::ceil(lo / step) * step;
  for (double t = first; t <= hi + step * 1e-9; t += step) ticks.push_back(t);
  return ticks;
}

}  // namespace

std::string render_line_chart(const ChartSpec& spec) {
  const double margin_left = 72, margin_right = 180, margin_top = 44, margin_bottom = 56;
  const double plot_w = spec.width - margin_left - margin_right;
  const double plot_h = spec.height - margin_top - margin_bottom;

  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  bool have_range = false;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double xv = spec.log_x ? std::log10(s.x[i]) : s.x[i];
      const double err = i < s.y_err.size() ? s.y_err[i] : 0.0;
      if (!std::isfinite(xv) || !std::isfinite(s.y[i])) continue;
      if (!have_range) {
        x_lo = x_hi = xv;
        y_lo = s.y[i] - err;
        y_hi = s.y[i] + err;
        have_range = true;
      } else {
        x_lo = std::min(x_lo, xv);
        x_hi = std::max(x_hi, xv);
        y_lo = std::min(y_lo, s.y[i] - err);
        y_hi = std::max(y_hi, s.y[i] + err);
      }
    }
  }
  if (!have_range) x_lo = y_lo = 0.0, x_hi = y_hi = 1.0;
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  const double y_pad = 0.04 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const auto x_pix = [&](double v) {
    const double t = ((spec.log_x ? std::log10(v) : v) - x_lo) / (x_hi - x_lo);
    return margin_left + t * plot_w;
  };
  const auto y_pix = [&](double v) {
    const double t = (v - y_lo) / (y_hi - y_lo);
    return margin_top + (1.0 - t) * plot_h;
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
  out << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\"24\" font-size=\"15\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\">" << escape_xml(spec.title)
      << "</text>\n";

  // axes
  out << "<line x1=\"" << margin_left << "\" y1=\"" << margin_top + plot_h << "\" x2=\""
      << margin_left + plot_w << "\" y2=\"" << margin_top + plot_h
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << margin_left << "\" y1=\"" << margin_top << "\" x2=\"" << margin_left
      << "\" y2=\"" << margin_top + plot_h << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  for (double t : nice_ticks(x_lo, x_hi, 6)) {
    const double px = margin_left + (t - x_lo) / (x_hi - x_lo) * plot_w;
    out << "<line x1=\"" << num(px) << "\" y1=\"" << margin_top + plot_h << "\" x2=\"" << num(px)
        << "\" y2=\"" << margin_top + plot_h + 5 << "\" stroke=\"black\"/>\n";
    const double label = spec.log_x ? std::pow(10.0, t) : t;
    out << "<text x=\"" << num(px) << "\" y=\"" << margin_top + plot_h + 20
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" << num(label)
        << "</text>\n";
  }
  for (double t : nice_ticks(y_lo, y_hi, 6)) {
    const double py = y_pix(t);
    out << "<line x1=\"" << margin_left - 5 << "\" y1=\"" << num(py) << "\" x2=\"" << margin_left
        << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << margin_left - 9 << "\" y=\"" << num(py + 4)
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << num(t)
        << "</text>\n";
  }
  out << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\"" << spec.height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << escape_xml(spec.x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << margin_top + plot_h / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "transform=\"rotate(-90 18 " << margin_top + plot_h / 2 << ")\">"
      << escape_xml(spec.y_label) << "</text>\n";

  // error bands first so lines draw on top
  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    if (s.y_err.empty()) continue;
    const char* color = kPalette[si % kPaletteSize];
    std::ostringstream points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      points << num(x_pix(s.x[i])) << "," << num(y_pix(s.y[i] + s.y_err[i])) << " ";
    }
    for (std::size_t i = s.x.size(); i-- > 0;) {
      points << num(x_pix(s.x[i])) << "," << num(y_pix(s.y[i] - s.y_err[i])) << " ";
    }
    out << "<polygon points=\"" << points.str() << "\" fill=\"" << color
        << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
  }

  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const auto& s = spec.series[si];
    const char* color = kPalette[si % kPaletteSize];
    std::ostringstream points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      points << num(x_pix(s.x[i])) << "," << num(y_pix(s.y[i])) << " ";
    }
    out << "<polyline points=\"" << points.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.6\"/>\n";
  }

  // legend
  const double legend_x = margin_left + plot_w + 14;
  double legend_y = margin_top + 8;
  for (std::size_t si = 0; si < spec.series.size(); ++si) {
    const char* color = kPalette[si % kPaletteSize];
    out << "<line x1=\"" << legend_x << "\" y1=\"" << num(legend_y) << "\" x2=\""
        << legend_x + 22 << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << legend_x + 28 << "\" y=\"" << num(legend_y + 4)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << escape_xml(spec.series[si].name)
        << "</text>\n";
    legend_y += 18;
  }

  out << "</svg>\n";
  return out.str();
}

void write_line_chart(const std::string& path, const ChartSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_line_chart: cannot open '" + path + "'");
  out << render_line_chart(spec);
  if (!out) throw std::runtime_error("write_line_chart: write failed for '" + path + "'");
}

}  // namespace bayesucb
