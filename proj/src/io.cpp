#include "vhi/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace vhi::io {

std::string format_double(double x) { return fmt::format("{}", x); }

std::string format_optional(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("CsvTable: no columns");
}

void CsvTable::add_meta(std::string key, std::string value) {
  std::replace(value.begin(), value.end(), '\n', ' ');
  meta_.emplace_back(std::move(key), std::move(value));
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument(fmt::format("CsvTable: row has {} cells, expected {}", cells.size(), columns_.size()));
  rows_.push_back(std::move(cells));
}

std::string CsvTable::body() const {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return s;
}

void CsvTable::write(std::ostream& out) const {
  for (const auto& [k, v] : meta_) out << "# " << k << ": " << v << '\n';
  out << body();
}

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string escape(const std::string& s) {
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

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series) {
  auto tx = [&](double x) { return spec.log_x ? std::log10(x) : x; };
  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  std::vector<std::vector<std::pair<double, double>>> mapped;
  for (const auto& s : series) {
    auto& m = mapped.emplace_back();
    for (const auto& [x, y] : s.points) {
      if ((spec.log_x && !(x > 0.0)) || (spec.log_y && !(y > 0.0)) || !std::isfinite(x) || !std::isfinite(y))
        continue;
      m.emplace_back(tx(x), ty(y));
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream o;
  o << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif">)",
                   kWidth, kHeight)
    << '\n';
  o << fmt::format(R"(<rect x="0" y="0" width="{}" height="{}" fill="white"/>)", kWidth, kHeight) << '\n';
  o << fmt::format(R"(<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>)", kWidth / 2,
                   escape(spec.title))
    << '\n';
  o << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", kLeft, kTop, pw, ph)
    << '\n';
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0, yv = y0 + (y1 - y0) * t / 4.0;
    const std::string xl = spec.log_x ? fmt::format("1e{:.2g}", xv) : fmt::format("{:.3g}", xv);
    const std::string yl = spec.log_y ? fmt::format("1e{:.2g}", yv) : fmt::format("{:.3g}", yv);
    o << fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="middle" font-size="11">{}</text>)", px(xv),
                     kTop + ph + 16, xl)
      << '\n';
    o << fmt::format(R"(<text x="{:.1f}" y="{:.1f}" text-anchor="end" font-size="11">{}</text>)", kLeft - 6,
                     py(yv) + 4, yl)
      << '\n';
  }
  o << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>)", kLeft + pw / 2,
                   kHeight - 16, escape(spec.x_label))
    << '\n';
  o << fmt::format(R"svg(<text x="16" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 16 {})">{}</text>)svg",
                   kTop + ph / 2, kTop + ph / 2, escape(spec.y_label))
    << '\n';
  for (std::size_t s = 0; s < mapped.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    std::string pts;
    for (const auto& [x, y] : mapped[s]) pts += fmt::format("{:.2f},{:.2f} ", px(x), py(y));
    o << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>)", color, pts) << '\n';
    for (const auto& [x, y] : mapped[s])
      o << fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="3" fill="{}"/>)", px(x), py(y), color) << '\n';
    o << fmt::format(R"(<text x="{}" y="{}" font-size="12" fill="{}">{}</text>)", kLeft + pw - 150,
                     kTop + 18 + 16 * static_cast<double>(s), color, escape(series[s].label))
      << '\n';
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace vhi::io
