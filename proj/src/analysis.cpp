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

#include "rydeit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "rydeit/constants.hpp"
#include "rydeit/error.hpp"

namespace rydeit {

namespace {

// Parabola through three points with distinct abscissae.
struct Parabola {
  double a = 0.0, b = 0.0, c = 0.0;  // a x^2 + b x + c

  static Parabola through(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    Parabola p;
    p.a = (d12 - d01) / (x2 - x0);
    p.b = d01 - p.a * (x0 + x1);
    p.c = y0 - p.a * x0 * x0 - p.b * x0;
    return p;
  }
  double operator()(double x) const { return (a * x + b) * x + c; }
  double slope(double x) const { return 2.0 * a * x + b; }
};

std::string mhz(double rad) {
  std::ostringstream os;
  os << rad_to_mhz(rad) << " MHz";
  return os.str();
}

}  // namespace

namespace {

// Columns inside the window, ordered by detuning.
std::vector<std::size_t> window_columns(const SpectrumGrid& grid, DetuningWindow window) {
  if (!(window.lo <= window.hi)) throw InvalidInput("window lower bound exceeds upper bound");
  if (grid.cols() == 0 || grid.values.size() != grid.rows() * grid.cols()) {
    throw InvalidInput("grid dimensions are inconsistent");
  }
  const auto [xmin, xmax] = std::minmax_element(grid.x_values.begin(), grid.x_values.end());
  if (window.lo < *xmin || window.hi > *xmax) throw InvalidInput("window extends beyond the scanned detuning range");
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < grid.cols(); ++c) {
    if (grid.x_values[c] >= window.lo && grid.x_values[c] <= window.hi) cols.push_back(c);
  }
  if (cols.empty()) throw AnalysisError("no grid columns inside the window");
  std::stable_sort(cols.begin(), cols.end(),
                   [&](std::size_t a, std::size_t b) { return grid.x_values[a] < grid.x_values[b]; });
  return cols;
}

double row_range(const SpectrumGrid& grid, std::size_t r) {
  const double* row = grid.values.data() + r * grid.cols();
  const auto [rmin, rmax] = std::minmax_element(row, row + grid.cols());
  return *rmax - *rmin;
}

// Topographic prominence of window position k: walk outwards until a higher
// sample or the window edge, take the lowest value on each side, and compare
// against the higher of the two.
double prominence(const double* row, const std::vector<std::size_t>& cols, std::size_t k) {
  const double peak = row[cols[k]];
  double left = peak, right = peak;
  for (std::size_t j = k; j-- > 0 && row[cols[j]] <= peak;) left = std::min(left, row[cols[j]]);
  for (std::size_t j = k + 1; j < cols.size() && row[cols[j]] <= peak; ++j) right = std::min(right, row[cols[j]]);
  return peak - std::max(left, right);
}

PeakPoint refine(const SpectrumGrid& grid, std::size_t r, const std::vector<std::size_t>& cols, std::size_t k) {
  const double* row = grid.values.data() + r * grid.cols();
  const double x0 = grid.x_values[cols[k - 1]], x1 = grid.x_values[cols[k]], x2 = grid.x_values[cols[k + 1]];
  const double peak = row[cols[k]];
  const auto p = Parabola::through(x0, row[cols[k - 1]], x1, peak, x2, row[cols[k + 1]]);
  double xv = x1;
  if (p.a < 0.0) xv = std::clamp(-p.b / (2.0 * p.a), x0, x2);
  return {grid.y_values[r], xv, p.a < 0.0 ? p(xv) : peak};
}

void finish(PeakTrace& trace) {
  if (trace.points.empty()) throw AnalysisError("no row has a peak above the prominence threshold");
  std::stable_sort(trace.points.begin(), trace.points.end(),
                   [](const PeakPoint& a, const PeakPoint& b) { return a.scan_param < b.scan_param; });
  for (std::size_t i = 1; i < trace.points.size(); ++i) {
    if (!(trace.points[i].scan_param > trace.points[i - 1].scan_param)) {
      throw AnalysisError("grid rows repeat a scan value");
    }
  }
}

}  // namespace

PeakTrace extract_peak_trace(const SpectrumGrid& grid, DetuningWindow window, const PeakOptions& options) {
  const auto cols = window_columns(grid, window);
  PeakTrace trace;
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    const double* row = grid.values.data() + r * grid.cols();
    const double range = row_range(grid, r);
    if (!(range > 0.0)) continue;
    std::size_t best = 0;
    for (std::size_t k = 1; k < cols.size(); ++k) {
      if (row[cols[k]] > row[cols[best]]) best = k;
    }
    if (best == 0 || best + 1 == cols.size()) continue;  // maximum on the window edge
    if (prominence(row, cols, best) < options.prominence_fraction * range) continue;
    trace.points.push_back(refine(grid, r, cols, best));
  }
  finish(trace);
  return trace;
}

PeakTrace track_peak_trace(const SpectrumGrid& grid, DetuningWindow window, const TrackOptions& options) {
  const auto cols = window_columns(grid, window);
  if (!(options.max_step > 0.0)) throw InvalidInput("tracking step limit must be > 0");
  if (grid.rows() == 0) throw AnalysisError("grid has no rows");

  // Prominent interior local maxima of one row, as window positions.
  auto candidates = [&](std::size_t r) {
    std::vector<std::size_t> out;
    const double* row = grid.values.data() + r * grid.cols();
    const double range = row_range(grid, r);
    if (!(range > 0.0)) return out;
    for (std::size_t k = 1; k + 1 < cols.size(); ++k) {
      const double v = row[cols[k]];
      if (v > row[cols[k - 1]] && v >= row[cols[k + 1]] &&
          prominence(row, cols, k) >= options.prominence_fraction * range) {
        out.push_back(k);
      }
    }
    return out;
  };

  // Rows in scan order.
  std::vector<std::size_t> order(grid.rows());
  for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid.y_values[a] < grid.y_values[b]; });
  std::size_t seed = 0;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (std::abs(grid.y_values[order[i]] - options.seed_param) <
        std::abs(grid.y_values[order[seed]] - options.seed_param)) {
      seed = i;
    }
  }

  // The seed row starts from its highest prominent peak.
  const auto seed_peaks = candidates(order[seed]);
  if (seed_peaks.empty()) throw AnalysisError("seed row has no peak above the prominence threshold");
  const double* seed_row = grid.values.data() + order[seed] * grid.cols();
  const std::size_t start = *std::max_element(seed_peaks.begin(), seed_peaks.end(), [&](std::size_t a, std::size_t b) {
    return seed_row[cols[a]] < seed_row[cols[b]];
  });
  PeakTrace trace;
  trace.points.push_back(refine(grid, order[seed], cols, start));

  auto walk = [&](int dir) {
    double last = trace.points.front().delta_c_peak;
    for (auto i = static_cast<std::ptrdiff_t>(seed) + dir; i >= 0 && i < static_cast<std::ptrdiff_t>(order.size());
         i += dir) {
      const std::size_t r = order[static_cast<std::size_t>(i)];
      std::optional<PeakPoint> best;
      for (std::size_t k : candidates(r)) {
        const PeakPoint p = refine(grid, r, cols, k);
        if (std::abs(p.delta_c_peak - last) > options.max_step) continue;
        // Equal distances resolve to the lower detuning, as candidates are ascending.
        if (!best || std::abs(p.delta_c_peak - last) < std::abs(best->delta_c_peak - last)) best = p;
      }
      if (!best) continue;  // the line fades in this row; keep the last position
      last = best->delta_c_peak;
      trace.points.push_back(*best);
    }
  };
  walk(-1);
  walk(+1);
  finish(trace);
  return trace;
}

namespace {

std::size_t nearest_to_zero(const std::vector<PeakPoint>& pts) {
  std::size_t centre = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (std::abs(pts[i].scan_param) < std::abs(pts[centre].scan_param)) centre = i;
  }
  return centre;
}

std::string span_text(const std::vector<PeakPoint>& pts) {
  return "trace spans " + mhz(pts.front().scan_param) + " to " + mhz(pts.back().scan_param);
}

// d(delta_c_peak)/d(scan_param) at z from a least-squares parabola through
// the five points nearest z.
double local_slope(const std::vector<PeakPoint>& pts, double z) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::partial_sort(idx.begin(), idx.begin() + 5, idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(pts[a].scan_param - z) < std::abs(pts[b].scan_param - z);
  });
  // Centred, scaled variable for conditioning.
  Eigen::Matrix<double, 5, 3> a;
  Eigen::Matrix<double, 5, 1> y;
  double scale = 0.0;
  for (int k = 0; k < 5; ++k) scale = std::max(scale, std::abs(pts[idx[k]].scan_param - z));
  for (int k = 0; k < 5; ++k) {
    const double t = (pts[idx[k]].scan_param - z) / scale;
    a(k, 0) = 1.0;
    a(k, 1) = t;
    a(k, 2) = t * t;
    y(k) = pts[idx[k]].delta_c_peak;
  }
  const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(y);
  return coef(1) / scale;
}

}  // namespace

double trace_apex(const PeakTrace& trace) {
  const auto& pts = trace.points;
  if (pts.size() < 3) throw AnalysisError("trace needs at least 3 points for an apex");
  const std::size_t m = std::clamp<std::size_t>(nearest_to_zero(pts), 1, pts.size() - 2);
  const auto p = Parabola::through(pts[m - 1].scan_param, pts[m - 1].delta_c_peak, pts[m].scan_param,
                                   pts[m].delta_c_peak, pts[m + 1].scan_param, pts[m + 1].delta_c_peak);
  return p(0.0);
}

ZeroCrossing trace_crossing(const PeakTrace& trace, CrossingSide side) {
  const auto& pts = trace.points;
  if (pts.size() < 5) throw AnalysisError("trace needs at least 5 points");
  const std::size_t centre = nearest_to_zero(pts);
  auto changes_sign = [&](std::size_t i) {
    const double a = pts[i].delta_c_peak, b = pts[i + 1].delta_c_peak;
    return (a > 0.0 && b <= 0.0) || (a <= 0.0 && b > 0.0);
  };
  std::optional<std::size_t> hit;
  if (side == CrossingSide::below) {
    for (std::size_t i = centre; i-- > 0;) {
      if (changes_sign(i)) {
        hit = i;
        break;
      }
    }
  } else {
    for (std::size_t i = centre; i + 1 < pts.size(); ++i) {
      if (changes_sign(i)) {
        hit = i;
        break;
      }
    }
  }
  if (!hit) {
    throw AnalysisError(std::string("trace does not cross zero ") +
                        (side == CrossingSide::below ? "below" : "above") + " the apex; " + span_text(pts));
  }
  const auto& a = pts[*hit];
  const auto& b = pts[*hit + 1];
  ZeroCrossing z;
  z.scan_param = a.scan_param - a.delta_c_peak * (b.scan_param - a.scan_param) / (b.delta_c_peak - a.delta_c_peak);
  z.slope = local_slope(pts, z.scan_param);
  return z;
}

BellFeatures bell_features(const PeakTrace& trace) {
  const auto& pts = trace.points;
  if (pts.size() < 5) throw AnalysisError("trace needs at least 5 points");
  BellFeatures f;
  f.apex = trace_apex(trace);
  ZeroCrossing lo, hi;
  try {
    lo = trace_crossing(trace, CrossingSide::below);
    hi = trace_crossing(trace, CrossingSide::above);
  } catch (const AnalysisError&) {
    throw AnalysisError("trace does not cross zero on both sides of the apex; " + span_text(pts));
  }
  f.zero_crossings = {lo.scan_param, hi.scan_param};
  f.slopes = {lo.slope, hi.slope};
  return f;
}

double fit_peak_location(double omega_rf1, double omega_rf2) {
  if (!(omega_rf1 > 0.0)) throw InvalidInput("Omega_RF1 must be > 0");
  const double s = constants::two_pi * kBellSplittingHz;
  return 0.5 * omega_rf1 / (1.0 + kBellApexCoefficient * omega_rf2 * omega_rf2 / (omega_rf1 * s));
}

double fit_slope(double omega_rf1, double omega_rf2, double a) {
  const double den = omega_rf1 * omega_rf1 + omega_rf2 * omega_rf2;
  if (!(den > 0.0)) throw InvalidInput("Omega_RF1 and Omega_RF2 cannot both be zero");
  return a * omega_rf1 * omega_rf1 / den;
}

double infer_rf2_field(BellMeasurement kind, double measured, double omega_rf1, double a) {
  if (!(omega_rf1 > 0.0)) throw InvalidInput("Omega_RF1 must be > 0");
  if (kind == BellMeasurement::apex) {
    const double top = 0.5 * omega_rf1;
    if (!(measured > 0.0 && measured <= top)) {
      throw AnalysisError("apex " + mhz(measured) + " outside the invertible range (0, " + mhz(top) + "]");
    }
    const double s = constants::two_pi * kBellSplittingHz;
    return std::sqrt(std::max(0.0, (top / measured - 1.0) * omega_rf1 * s / kBellApexCoefficient));
  }
  if (!(a > 0.0)) throw InvalidInput("A must be > 0");
  if (!(measured > 0.0 && measured <= a)) {
    std::ostringstream os;
    os << "slope " << measured << " outside the invertible range (0, " << a << "]";
    throw AnalysisError(os.str());
  }
  return omega_rf1 * std::sqrt(std::max(0.0, a / measured - 1.0));
}

CellFactorFit calibrate_cell_factor(const std::vector<SplittingPoint>& points, const HornSource& horn,
                                    DipoleMoment d) {
  if (points.empty()) throw InvalidInput("calibration needs at least one splitting measurement");
  double sg = 0.0, gg = 0.0;
  std::vector<double> g(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.power_mw > 0.0) || !std::isfinite(p.splitting_mhz)) {
      throw InvalidInput("calibration points need power > 0 and a finite splitting");
    }
    HornSource unit = horn;
    unit.power = p.power_mw * 1e-3;
    unit.cell_factor = 1.0;
    g[i] = rad_to_mhz(rabi_frequency(d, rf_field_magnitude(unit)));
    sg += p.splitting_mhz * g[i];
    gg += g[i] * g[i];
  }
  CellFactorFit fit;
  fit.cell_factor = sg / gg;
  if (!(fit.cell_factor > 0.0)) throw AnalysisError("fitted cell factor is not positive");
  double ss = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = points[i].splitting_mhz - fit.cell_factor * g[i];
    ss += r * r;
  }
  fit.rms_residual_mhz = std::sqrt(ss / static_cast<double>(points.size()));
  return fit;
}

}  // namespace rydeit
