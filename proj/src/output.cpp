#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "error.hpp"

namespace degwave {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  require(cells.size() == header_.size(), ErrorCode::invalid_argument,
          "CSV row width does not match the header");
  rows_.push_back(std::move(cells));
}

void CsvTable::add_numbers(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_real(v));
  add_row(std::move(cells));
}

namespace {

void write_line(std::ofstream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::io_error,
          "cannot write '" + path.string() + "'");
  return out;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out = open_output(path);
  write_line(out, header_);
  for (const auto& row : rows_) write_line(out, row);
  require(static_cast<bool>(out), ErrorCode::io_error, "write failed for '" + path.string() + "'");
}

void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
  constexpr double width = 800, height = 500;
  constexpr double left = 90, right = 30, top = 50, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) {
    const double pad = ymin == 0.0 ? 1.0 : 0.05 * std::abs(ymin);
    ymin -= pad;
    ymax += pad;
  }
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ofstream out = open_output(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
         "viewBox=\"0 0 800 500\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  out << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
      << escape_xml(spec.title) << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\""
      << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = xmin + (xmax - xmin) * k / 4.0;
    const double gx = left + pw * k / 4.0;
    out << "<line x1=\"" << fixed(gx) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(gx)
        << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(gx) << "\" y=\"" << top + ph + 20
        << "\" text-anchor=\"middle\">" << tick_label(fx) << "</text>\n";
    const double fy = ymin + (ymax - ymin) * k / 4.0;
    const double gy = top + ph * (1.0 - k / 4.0);
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(gy) << "\" x2=\"" << left
        << "\" y2=\"" << fixed(gy) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << fixed(gy + 4)
        << "\" text-anchor=\"end\">" << tick_label(spec.log_y ? std::pow(10.0, fy) : fy)
        << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">" << escape_xml(spec.x_label) << "</text>\n";
  out << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << top + ph / 2 << ")\">" << escape_xml(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 5];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (spec.log_y && !(series[s].y[i] > 0.0)) continue;
      out << fixed(px(series[s].x[i])) << ',' << fixed(py(series[s].y[i])) << ' ';
    }
    out << "\"/>\n";
    if (spec.markers) {
      for (std::size_t i = 0; i < series[s].x.size(); ++i) {
        if (spec.log_y && !(series[s].y[i] > 0.0)) continue;
        out << "<circle cx=\"" << fixed(px(series[s].x[i])) << "\" cy=\""
            << fixed(py(series[s].y[i])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    if (!series[s].label.empty()) {
      const double ly = top + 18 + 16 * static_cast<double>(s);
      out << "<text x=\"" << left + pw - 10 << "\" y=\"" << fixed(ly)
          << "\" text-anchor=\"end\" fill=\"" << color << "\">"
          << escape_xml(series[s].label) << "</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace degwave
