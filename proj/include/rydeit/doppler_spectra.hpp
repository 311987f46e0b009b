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

// Thermal averaging of the probe coherence, conversion to susceptibility and
// Beer-law transmission, and 2-D spectrum scans.
//
// Probe and coupling beams counter-propagate. An atom moving at v toward the
// probe source sees
//
//   delta_p' = delta_p - k_p v,   delta_c' = delta_c + k_c v,
//
// and the RF fields are not shifted.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "rydeit/doppler_spec.hpp"
#include "rydeit/field_calculus.hpp"
#include "rydeit/liouvillian.hpp"
#include "rydeit/steady_state.hpp"

namespace rydeit {

/// Wavelength of the probe transition (the scheme's probe pair).
double probe_wavelength(const LevelScheme& scheme);
/// Wavelength of the coupling drive's primary transition.
double coupling_wavelength(const LevelScheme& scheme);

/// Un-averaged rho_21 for the probe pair.
std::complex<double> probe_coherence(const LevelScheme& scheme, const DetuningAssignment& det);

/// Trapezoid average of rho_21 over a Maxwell velocity distribution truncated
/// at +-span*u. With u = 0 this is probe_coherence().
std::complex<double> doppler_average_rho21(const LevelScheme& scheme, const DetuningAssignment& det,
                                           const DopplerSpec& dop);

/// Linear susceptibility of the probe. The sign makes Im(chi) >= 0 for an
/// absorbing medium under the Hamiltonian convention of build_hamiltonian().
/// Throws InvalidInput for probe_rabi <= 0.
std::complex<double> susceptibility(std::complex<double> rho21_d, const LevelScheme& scheme,
                                    const VaporConditions& vapor, double probe_rabi);

/// exp(-2 pi L Im(chi) / lambda_p). Throws NumericalError for Im(chi) < -1e-12.
double transmission(std::complex<double> chi, const VaporConditions& vapor, double lambda_p);

enum class GridQuantity { transmission, im_chi };

struct SpectrumGrid {
  std::vector<double> x_values;  // coupling detuning, rad/s
  std::vector<double> y_values;  // rad/s, mW or dBm depending on the scan
  std::string y_label;           // column name used in CSV output
  ScanSpec scan;
  GridQuantity quantity = GridQuantity::transmission;
  std::vector<double> values;    // row-major: one row per y value
  std::size_t near_degenerate_cells = 0;
  std::string scheme_name;
  VaporConditions vapor;
  DopplerSpec doppler;

  std::size_t rows() const { return y_values.size(); }
  std::size_t cols() const { return x_values.size(); }
  double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
};

struct ScanOptions {
  unsigned workers = 1;
  GridQuantity quantity = GridQuantity::transmission;
};

/// Column label for the y axis of a scan, e.g. "delta_rf2_mhz".
std::string y_axis_label(const ScanSpec& scan);

/// The scheme as configured for one y value of the scan.
LevelScheme scheme_for_row(const LevelScheme& scheme, const ScanSpec& scan, double y);

/// Evaluates the grid. Rows are distributed over `workers` threads and each
/// result lands in its own slot, so the output does not depend on the worker
/// count.
SpectrumGrid run_scan(const LevelScheme& scheme, const ScanSpec& scan, const VaporConditions& vapor,
                      const DopplerSpec& dop, const ScanOptions& options = {});

/// run_scan() on explicit y values instead of the scan's uniform y axis.
SpectrumGrid run_scan_rows(const LevelScheme& scheme, const ScanSpec& scan, std::vector<double> y_values,
                           const VaporConditions& vapor, const DopplerSpec& dop, const ScanOptions& options = {});

}  // namespace rydeit
