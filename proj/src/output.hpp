#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace degwave {

/// "%.17g"
std::string format_real(double v);

/// Comma-separated table with a single header line. Header cells carry the
/// unit in brackets and the defining formula after a colon.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  /// Numeric row; every value is written with 17 significant digits.
  void add_numbers(const std::vector<double>& values);

  std::size_t rows() const { return rows_.size(); }
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  bool markers = false;
};

/// Polyline plot on a fixed 800 x 500 canvas.
void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series);

}  // namespace degwave
