#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "kpzlab/errors.hpp"

namespace kpzlab {

// Shortest decimal string that round-trips a double.
inline std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

inline std::string fmt_fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return std::string(buf);
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw resource_error("write_text_file: cannot open " + path);
  out << content;
  out.flush();
  if (!out) throw resource_error("write_text_file: short write to " + path);
}

// Comma-separated table with a header row, LF endings, and a trailing newline.
// Cells are preformatted strings; numeric columns should come through fmt_g17
// so outputs stay byte-identical across runs.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header.size())
      throw precondition_error("CsvTable: row width differs from header");
    rows.push_back(std::move(cells));
  }

  std::string to_string() const {
    if (header.empty()) throw precondition_error("CsvTable: empty header");
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      out += header[i];
    }
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ',';
        out += r[i];
      }
      out += '\n';
    }
    return out;
  }
};

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;  // (x, y), drawn in order
};

// Standalone SVG 1.1 line chart, fixed 800x600 viewport, no external
// references.  Coordinates are written with two decimals so the byte stream
// is reproducible.
inline std::string svg_line_chart(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<SvgSeries>& series) {
  if (series.empty()) throw precondition_error("svg_line_chart: no series");
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  bool first = true;
  for (const auto& s : series) {
    if (s.points.empty()) throw precondition_error("svg_line_chart: empty series");
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y))
        throw domain_error("svg_line_chart: non-finite point");
      if (first) {
        x_lo = x_hi = x;
        y_lo = y_hi = y;
        first = false;
      } else {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
  }
  if (x_hi == x_lo) {
    x_lo -= 1.0;
    x_hi += 1.0;
  }
  if (y_hi == y_lo) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  const double pad_x = 0.04 * (x_hi - x_lo), pad_y = 0.06 * (y_hi - y_lo);
  x_lo -= pad_x;
  x_hi += pad_x;
  y_lo -= pad_y;
  y_hi += pad_y;

  const double width = 800, height = 600;
  const double ml = 78, mr = 24, mt = 48, mb = 62;  // margins
  const auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr); };
  const auto py = [&](double y) {
    return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb);
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
         "height=\"600\" viewBox=\"0 0 800 600\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"400\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" "
         "text-anchor=\"middle\" fill=\"#111111\">" +
         xml_escape(title) + "</text>\n";

  // axis ticks, 6 per axis, labeled with short general format
  const auto tick_text = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
    const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
    const double gx = px(xv), gy = py(yv);
    svg += "<line x1=\"" + fmt_fixed(gx, 2) + "\" y1=\"" + fmt_fixed(height - mb, 2) +
           "\" x2=\"" + fmt_fixed(gx, 2) + "\" y2=\"" + fmt_fixed(mt, 2) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt_fixed(ml, 2) + "\" y1=\"" + fmt_fixed(gy, 2) + "\" x2=\"" +
           fmt_fixed(width - mr, 2) + "\" y2=\"" + fmt_fixed(gy, 2) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt_fixed(gx, 2) + "\" y=\"" + fmt_fixed(height - mb + 20, 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "fill=\"#333333\">" +
           tick_text(xv) + "</text>\n";
    svg += "<text x=\"" + fmt_fixed(ml - 8, 2) + "\" y=\"" + fmt_fixed(gy + 4, 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\" "
           "fill=\"#333333\">" +
           tick_text(yv) + "</text>\n";
  }
  // axes on top of the grid
  svg += "<line x1=\"" + fmt_fixed(ml, 2) + "\" y1=\"" + fmt_fixed(height - mb, 2) + "\" x2=\"" +
         fmt_fixed(width - mr, 2) + "\" y2=\"" + fmt_fixed(height - mb, 2) +
         "\" stroke=\"#111111\" stroke-width=\"1.5\"/>\n";
  svg += "<line x1=\"" + fmt_fixed(ml, 2) + "\" y1=\"" + fmt_fixed(height - mb, 2) + "\" x2=\"" +
         fmt_fixed(ml, 2) + "\" y2=\"" + fmt_fixed(mt, 2) +
         "\" stroke=\"#111111\" stroke-width=\"1.5\"/>\n";
  svg += "<text x=\"" + fmt_fixed((ml + width - mr) / 2, 2) + "\" y=\"" +
         fmt_fixed(height - 16, 2) +
         "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
         "fill=\"#111111\">" +
         xml_escape(x_label) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + fmt_fixed((mt + height - mb) / 2, 2) +
         "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" "
         "fill=\"#111111\" transform=\"rotate(-90 20 " +
         fmt_fixed((mt + height - mb) / 2, 2) + ")\">" + xml_escape(y_label) + "</text>\n";

  for (const auto& s : series) {
    svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) svg += ' ';
      svg += fmt_fixed(px(s.points[i].first), 2) + "," + fmt_fixed(py(s.points[i].second), 2);
    }
    svg += "\"/>\n";
  }
  // legend, top right inside the plot area
  double ly = mt + 18;
  for (const auto& s : series) {
    const double lx = width - mr - 180;
    svg += "<line x1=\"" + fmt_fixed(lx, 2) + "\" y1=\"" + fmt_fixed(ly - 4, 2) + "\" x2=\"" +
           fmt_fixed(lx + 26, 2) + "\" y2=\"" + fmt_fixed(ly - 4, 2) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"1.8\"/>\n";
    svg += "<text x=\"" + fmt_fixed(lx + 32, 2) + "\" y=\"" + fmt_fixed(ly, 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#111111\">" +
           xml_escape(s.label) + "</text>\n";
    ly += 18;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace kpzlab
