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

#pragma once

// Plain-text grid and trace files.
//
// Grid CSV: header `delta_c_mhz,<y_label>,<quantity>` and one line per cell,
// rows of constant y in scan order. Detunings are written as ordinary
// frequencies in MHz. Axis values are rounded to 12 significant digits and
// grid values use the shortest round-trip representation, so identical grids
// give identical bytes.

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rydeit/analysis.hpp"
#include "rydeit/doppler_spectra.hpp"

namespace rydeit {

std::string format_double(double v);
/// Rounds to 12 significant digits, then formats like format_double().
std::string format_axis(double v);

void write_grid_csv(std::ostream& out, const SpectrumGrid& grid);
std::string grid_to_csv(const SpectrumGrid& grid);

/// Inverse of write_grid_csv for the axes and values. A y label ending in
/// "_mhz" is converted back to rad/s. Throws ParseError on malformed input or
/// a non-rectangular grid.
SpectrumGrid parse_grid_csv(std::string_view text);

/// `<y_label>,delta_c_peak_mhz,peak_height`
void write_trace_csv(std::ostream& out, const PeakTrace& trace, std::string_view y_label, bool y_in_mhz);

using KeyValues = std::vector<std::pair<std::string, std::string>>;
void write_key_values(std::ostream& out, const KeyValues& kv);

}  // namespace rydeit
