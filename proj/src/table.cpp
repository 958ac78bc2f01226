// Copyright 2026 The qrep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrep/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace qrep {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("Table: row width does not match column count");
  rows_.push_back(std::move(row));
}

size_t Table::column_index(const std::string& column) const {
  const auto it = std::find(columns_.begin(), columns_.end(), column);
  if (it == columns_.end())
    throw std::invalid_argument("Table: no column named '" + column + "'");
  return static_cast<size_t>(it - columns_.begin());
}

double Table::number_at(size_t row, const std::string& column) const {
  const Cell& c = rows_.at(row).at(column_index(column));
  if (const double* v = std::get_if<double>(&c)) return *v;
  throw std::invalid_argument("Table: cell is not numeric");
}

std::string Table::text_at(size_t row, const std::string& column) const {
  const Cell& c = rows_.at(row).at(column_index(column));
  if (const std::string* v = std::get_if<std::string>(&c)) return *v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(c));
  return buf;
}

std::string Table::format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string Table::to_csv() const {
  std::string out;
  for (const auto& c : comments_) {
    out += "# ";
    out += c;
    out += '\n';
  }
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const double* v = std::get_if<double>(&row[i]))
        out += format_number(*v);
      else
        out += std::get<std::string>(row[i]);
    }
    out += '\n';
  }
  return out;
}

void Table::write_csv(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("Table: cannot write '" + path + "'");
  f << to_csv();
}

namespace {

std::string svg_color(size_t i) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  return kPalette[i % 8];
}

}  // namespace

std::string Table::to_svg(const std::string& x_column, const std::string& y_column,
                          const std::string& group_column, bool log_y) const {
  const size_t xi = column_index(x_column);
  const size_t yi = column_index(y_column);
  const bool grouped = !group_column.empty();
  const size_t gi = grouped ? column_index(group_column) : 0;

  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& row : rows_) {
    const double* x = std::get_if<double>(&row[xi]);
    const double* y = std::get_if<double>(&row[yi]);
    if (!x || !y) continue;
    double yv = *y;
    if (log_y) {
      if (yv <= 0.0) continue;
      yv = std::log10(yv);
    }
    std::string key = "series";
    if (grouped) {
      if (const double* g = std::get_if<double>(&row[gi]))
        key = format_number(*g);
      else
        key = std::get<std::string>(row[gi]);
    }
    series[key].emplace_back(*x, yv);
    xmin = std::min(xmin, *x);
    xmax = std::max(xmax, *x);
    ymin = std::min(ymin, yv);
    ymax = std::max(ymax, yv);
  }
  if (series.empty() || xmin >= xmax) return "<svg xmlns='http://www.w3.org/2000/svg'/>";
  if (ymin >= ymax) {
    ymin -= 1.0;
    ymax += 1.0;
  }

  const double W = 720, H = 480, L = 70, R = 160, T = 30, B = 50;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

  std::string svg;
  svg += "<svg xmlns='http://www.w3.org/2000/svg' width='720' height='480' "
         "font-family='sans-serif' font-size='12'>\n";
  svg += "<rect width='720' height='480' fill='white'/>\n";
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='black'/>\n", L, H - B,
                W - R, H - B);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<line x1='%g' y1='%g' x2='%g' y2='%g' stroke='black'/>\n", L, T, L,
                H - B);
  svg += buf;
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x='%g' y='%g' text-anchor='middle'>%.4g</text>\n", px(xv),
                  H - B + 18, xv);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x='%g' y='%g' text-anchor='end'>%s%.4g</text>\n", L - 6,
                  py(yv) + 4, log_y ? "1e" : "", yv);
    svg += buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x='%g' y='%g' text-anchor='middle'>%s</text>\n", (L + W - R) / 2,
                H - 10, x_column.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x='16' y='%g' transform='rotate(-90 16 %g)' "
                "text-anchor='middle'>%s%s</text>\n",
                (T + H - B) / 2, (T + H - B) / 2, log_y ? "log10 " : "",
                y_column.c_str());
  svg += buf;

  size_t idx = 0;
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end());
    std::string poly = "<polyline fill='none' stroke='" + svg_color(idx) +
                       "' stroke-width='1.5' points='";
    for (const auto& [x, y] : pts) {
      std::snprintf(buf, sizeof buf, "%g,%g ", px(x), py(y));
      poly += buf;
    }
    poly += "'/>\n";
    svg += poly;
    std::snprintf(buf, sizeof buf,
                  "<text x='%g' y='%g' fill='%s'>%s%s</text>\n", W - R + 10,
                  T + 16.0 * (idx + 1), svg_color(idx).c_str(),
                  grouped ? (group_column + "=").c_str() : "", name.c_str());
    svg += buf;
    ++idx;
  }
  svg += "</svg>\n";
  return svg;
}

void Table::write_svg(const std::string& path, const std::string& x_column,
                      const std::string& y_column, const std::string& group_column,
                      bool log_y) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("Table: cannot write '" + path + "'");
  f << to_svg(x_column, y_column, group_column, log_y);
}

}  // namespace qrep
