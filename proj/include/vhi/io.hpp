#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace vhi::io {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);
std::string format_optional(const std::optional<double>& x);

/// Comma-separated table with a '#'-prefixed header block, LF line endings.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_meta(std::string key, std::string value);
  void add_row(std::vector<std::string> cells);
  [[nodiscard]] std::size_t rows() const { return rows_.size(); }

  void write(std::ostream& out) const;
  /// Rows and column line only, without the header block.
  [[nodiscard]] std::string body() const;

private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Static single-file SVG line plot. Nonpositive values are dropped on log axes.
std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace vhi::io
