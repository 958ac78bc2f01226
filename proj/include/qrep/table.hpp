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

#pragma once

#include <string>
#include <variant>
#include <vector>

namespace qrep {

/// Result table with a CSV emitter (17 significant digits, '.' decimal) and a
/// minimal SVG line-plot emitter for quick inspection.
class Table {
 public:
  using Cell = std::variant<double, std::string>;

  Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_comment(const std::string& line) { comments_.push_back(line); }
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  size_t row_count() const { return rows_.size(); }

  double number_at(size_t row, const std::string& column) const;
  std::string text_at(size_t row, const std::string& column) const;

  std::string to_csv() const;
  void write_csv(const std::string& path) const;

  /// Line plot of y_column vs x_column, one polyline per distinct value of
  /// group_column (pass "" for a single series). Log-scale y available for
  /// rate plots.
  std::string to_svg(const std::string& x_column, const std::string& y_column,
                     const std::string& group_column, bool log_y = false) const;
  void write_svg(const std::string& path, const std::string& x_column,
                 const std::string& y_column, const std::string& group_column,
                 bool log_y = false) const;

  static std::string format_number(double v);

 private:
  size_t column_index(const std::string& column) const;

  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace qrep
