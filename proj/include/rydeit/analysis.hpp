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

// Peak tracking on spectrum grids, bell-curve features of RF2-detuning scans
// and the empirical apex/slope formulas with their inversions.

#include <array>
#include <vector>

#include "rydeit/doppler_spectra.hpp"
#include "rydeit/field_calculus.hpp"

namespace rydeit {

struct PeakPoint {
  double scan_param = 0.0;    // y value of the row (rad/s for detuning scans)
  double delta_c_peak = 0.0;  // rad/s
  double height = 0.0;
};

struct PeakTrace {
  std::vector<PeakPoint> points;  // scan_param strictly increasing
  const char* method = "quadratic_interp";
};

/// Closed interval of coupling detuning, rad/s.
struct DetuningWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct PeakOptions {
  double prominence_fraction = 0.05;  // of the row's max - min
};

/// Highest grid sample inside the window for every row, refined by a parabola
/// through it and its two neighbours. Equal maxima resolve to the lowest
/// detuning. A row is dropped when its peak stands less than
/// prominence_fraction * (row max - row min) above the higher of the minima
/// on either side within the window.
PeakTrace extract_peak_trace(const SpectrumGrid& grid, DetuningWindow window, const PeakOptions& options = {});

struct TrackOptions {
  double prominence_fraction = 0.05;  // of the row's max - min
  double max_step = constants::two_pi * 6e6;  // largest accepted jump between rows, rad/s
  double seed_param = 0.0;            // the walk starts at the row nearest this scan value
};

/// Follows one line through the grid instead of taking each row's maximum.
/// The row nearest seed_param contributes its highest prominent peak; every
/// further row, walking outwards in scan order, contributes the prominent
/// local maximum nearest the previous point, refined like
/// extract_peak_trace(). Rows with no candidate within max_step are skipped.
/// Useful when two lines of similar height cross or run side by side.
PeakTrace track_peak_trace(const SpectrumGrid& grid, DetuningWindow window, const TrackOptions& options = {});

struct BellFeatures {
  double apex = 0.0;                       // delta_c_peak at scan_param = 0, rad/s
  std::array<double, 2> zero_crossings{};  // scan_param values, ascending
  std::array<double, 2> slopes{};          // d(delta_c_peak)/d(scan_param) at each crossing
};

/// Apex from the parabola through the three points nearest scan_param = 0;
/// crossings by linear interpolation of the sign changes closest to the apex
/// on either side; slopes from a least-squares parabola through the five
/// points nearest each crossing. Throws AnalysisError when either side lacks
/// a sign change.
BellFeatures bell_features(const PeakTrace& trace);

/// Value at scan_param = 0 of the parabola through the three points nearest 0.
double trace_apex(const PeakTrace& trace);

enum class CrossingSide { below, above };

struct ZeroCrossing {
  double scan_param = 0.0;
  double slope = 0.0;  // d(delta_c_peak)/d(scan_param)
};

/// The sign change of delta_c_peak closest to scan_param = 0 on one side,
/// located and differentiated as in bell_features(). Throws AnalysisError
/// when that side has no sign change.
ZeroCrossing trace_crossing(const PeakTrace& trace, CrossingSide side);

/// Reference splitting of the two RF2 transitions used by the empirical fits.
inline constexpr double kBellSplittingHz = 324.8e6;
inline constexpr double kBellApexCoefficient = 1.55;

/// (Omega_1/2) / (1 + 1.55 Omega_2^2 / (Omega_1 * 2 pi * 324.8 MHz)).
double fit_peak_location(double omega_rf1, double omega_rf2);
/// A * Omega_1^2 / (Omega_1^2 + Omega_2^2).
double fit_slope(double omega_rf1, double omega_rf2, double a);

enum class BellMeasurement { apex, slope };

/// Omega_RF2 >= 0 reproducing the measured apex (rad/s) or slope magnitude.
/// Throws AnalysisError when the value is outside (0, Omega_1/2] for an apex
/// or (0, A] for a slope.
double infer_rf2_field(BellMeasurement kind, double measured, double omega_rf1, double a = 1.0);

struct SplittingPoint {
  double power_mw = 0.0;
  double splitting_mhz = 0.0;
};

struct CellFactorFit {
  double cell_factor = 0.0;
  double rms_residual_mhz = 0.0;
};

/// Least-squares F for splitting = Omega(d, E(P; F)) / 2 pi. The field is
/// linear in F, so the fit is closed-form. `horn.power` and
/// `horn.cell_factor` are ignored.
CellFactorFit calibrate_cell_factor(const std::vector<SplittingPoint>& points, const HornSource& horn,
                                    DipoleMoment d);

}  // namespace rydeit
