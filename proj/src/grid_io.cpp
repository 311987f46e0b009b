// Copyright 2026 The rydeit Authors
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

#include "rydeit/grid_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <system_error>

#include "rydeit/constants.hpp"
#include "rydeit/error.hpp"

namespace rydeit {

namespace {

bool ends_with_mhz(std::string_view label) {
  return label.size() >= 4 && label.substr(label.size() - 4) == "_mhz";
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_cell(std::string_view s, int line, int column) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(line, column, "expected a number, found '" + std::string(s) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(line, column, "value is not finite");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw InvalidInput("cannot format number");
  return std::string(buf, ptr);
}

std::string format_axis(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return format_double(std::strtod(buf, nullptr));
}

void write_grid_csv(std::ostream& out, const SpectrumGrid& grid) {
  const bool y_mhz = ends_with_mhz(grid.y_label);
  out << "delta_c_mhz," << grid.y_label << ','
      << (grid.quantity == GridQuantity::im_chi ? "im_chi" : "transmission") << '\n';
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    const double y = y_mhz ? rad_to_mhz(grid.y_values[r]) : grid.y_values[r];
    const std::string ys = format_axis(y);
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      out << format_axis(rad_to_mhz(grid.x_values[c])) << ',' << ys << ',' << format_double(grid.at(r, c)) << '\n';
    }
  }
}

std::string grid_to_csv(const SpectrumGrid& grid) {
  std::ostringstream os;
  write_grid_csv(os, grid);
  return os.str();
}

SpectrumGrid parse_grid_csv(std::string_view text) {
  struct Cell {
    double x, y, v;
    int line;
  };
  SpectrumGrid grid;
  std::vector<Cell> cells_read;
  int line_no = 0;
  bool header = true;
  bool y_mhz = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != 3) throw ParseError(line_no, 1, "expected 3 columns, found " + std::to_string(cells.size()));
    const int c2 = static_cast<int>(cells[0].size()) + 2;
    const int c3 = c2 + static_cast<int>(cells[1].size()) + 1;
    if (header) {
      if (cells[0] != "delta_c_mhz") throw ParseError(line_no, 1, "first column must be delta_c_mhz");
      if (cells[1].empty()) throw ParseError(line_no, c2, "missing y column name");
      grid.y_label = std::string(cells[1]);
      y_mhz = ends_with_mhz(grid.y_label);
      if (cells[2] == "transmission") {
        grid.quantity = GridQuantity::transmission;
      } else if (cells[2] == "im_chi") {
        grid.quantity = GridQuantity::im_chi;
      } else {
        throw ParseError(line_no, c3, "third column must be transmission or im_chi");
      }
      header = false;
      continue;
    }
    const double x = mhz_to_rad(parse_cell(cells[0], line_no, 1));
    double y = parse_cell(cells[1], line_no, c2);
    if (y_mhz) y = mhz_to_rad(y);
    cells_read.push_back({x, y, parse_cell(cells[2], line_no, c3), line_no});
  }
  if (header) throw ParseError(1, 1, "empty grid file");
  if (cells_read.empty()) throw ParseError(2, 1, "grid has no data rows");

  // Consecutive cells sharing a y value form one row.
  std::size_t width = 0;
  while (width < cells_read.size() && cells_read[width].y == cells_read.front().y) ++width;
  if (cells_read.size() % width != 0) throw ParseError(cells_read.back().line, 1, "last row of the grid is incomplete");
  for (std::size_t k = 0; k < width; ++k) grid.x_values.push_back(cells_read[k].x);
  for (std::size_t k = 0; k < cells_read.size(); ++k) {
    const auto& cell = cells_read[k];
    const std::size_t row = k / width, c = k % width;
    if (c == 0) {
      if (row > 0 && cell.y == grid.y_values.back()) {
        throw ParseError(cell.line, 1, "row of the grid is longer than the first row");
      }
      grid.y_values.push_back(cell.y);
    } else if (cell.y != grid.y_values.back()) {
      throw ParseError(cell.line, 1, "row of the grid is shorter than the first row");
    }
    if (cell.x != grid.x_values[c]) throw ParseError(cell.line, 1, "detuning column differs from the first row");
    grid.values.push_back(cell.v);
  }
  return grid;
}

void write_trace_csv(std::ostream& out, const PeakTrace& trace, std::string_view y_label, bool y_in_mhz) {
  out << y_label << ",delta_c_peak_mhz,peak_height\n";
  for (const auto& p : trace.points) {
    out << format_axis(y_in_mhz ? rad_to_mhz(p.scan_param) : p.scan_param) << ','
        << format_axis(rad_to_mhz(p.delta_c_peak)) << ',' << format_double(p.height) << '\n';
  }
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

}  // namespace rydeit
