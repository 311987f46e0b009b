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

// Python bindings. Frequencies cross the boundary as rad/s, like the C++ API;
// rydeit.mhz() and rydeit.to_mhz() convert.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>

#include "rydeit/analysis.hpp"
#include "rydeit/constants.hpp"
#include "rydeit/doppler_spectra.hpp"
#include "rydeit/error.hpp"
#include "rydeit/field_calculus.hpp"
#include "rydeit/liouvillian.hpp"
#include "rydeit/scheme_config.hpp"
#include "rydeit/steady_state.hpp"
#include "rydeit/version.hpp"

namespace py = pybind11;
using namespace rydeit;

namespace {

DetuningAssignment detunings(const LevelScheme& s, const std::map<std::string, double>& overrides) {
  DetuningAssignment det = DetuningAssignment::defaults(s);
  for (const auto& [id, value] : overrides) det.set(s, id, value);
  return det;
}

ScanAxisKind axis_kind(const std::string& name) {
  if (name == "rf_detuning_sweep") return ScanAxisKind::rf_detuning_sweep;
  if (name == "rf_power_sweep") return ScanAxisKind::rf_power_sweep;
  if (name == "probe_transmission_only") return ScanAxisKind::probe_transmission_only;
  throw InvalidInput("unknown y axis kind '" + name + "'");
}

py::dict grid_dict(const SpectrumGrid& g) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> values(
      g.values.data(), static_cast<Eigen::Index>(g.rows()), static_cast<Eigen::Index>(g.cols()));
  py::dict d;
  d["x"] = Eigen::VectorXd::Map(g.x_values.data(), static_cast<Eigen::Index>(g.cols())).eval();
  d["y"] = Eigen::VectorXd::Map(g.y_values.data(), static_cast<Eigen::Index>(g.rows())).eval();
  d["values"] = Eigen::MatrixXd(values);
  d["y_label"] = g.y_label;
  d["quantity"] = g.quantity == GridQuantity::im_chi ? "im_chi" : "transmission";
  d["near_degenerate_cells"] = g.near_degenerate_cells;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multi-level Rydberg EIT steady states, Doppler-averaged spectra and bell-curve analysis";
  m.attr("__version__") = std::string(kVersion);

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<AnalysisError>(m, "AnalysisError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<LevelScheme>(m, "Scheme")
      .def_static("preset", &config::builtin_preset, py::arg("name"))
      .def_static("parse", [](const std::string& text) { return config::parse_scheme(text); }, py::arg("text"))
      .def("serialize", &config::serialize_scheme)
      .def_readonly("name", &LevelScheme::name)
      .def_property_readonly("size", &LevelScheme::size)
      .def_property_readonly("drives",
                             [](const LevelScheme& s) {
                               std::vector<std::string> ids;
                               for (const auto& d : s.drives) ids.push_back(d.id);
                               return ids;
                             })
      .def("rabi", [](const LevelScheme& s, const std::string& id) { return s.drive(id).rabi; }, py::arg("drive"))
      .def("detuning", [](const LevelScheme& s, const std::string& id) { return s.drive(id).detuning; },
           py::arg("drive"))
      .def("with_rabi", [](const LevelScheme& s, const std::string& id, double r) { return with_drive_rabi(s, id, r); },
           py::arg("drive"), py::arg("rabi"))
      .def("with_detuning",
           [](const LevelScheme& s, const std::string& id, double d) { return with_drive_detuning(s, id, d); },
           py::arg("drive"), py::arg("detuning"))
      .def("__eq__", [](const LevelScheme& a, const LevelScheme& b) { return a == b; })
      .def("__repr__", [](const LevelScheme& s) {
        return "<rydeit.Scheme '" + s.name + "' with " + std::to_string(s.size()) + " levels>";
      });

  m.def("preset_names", &config::preset_names);

  py::class_<SteadyStateReport>(m, "SteadyState")
      .def_readonly("rho", &SteadyStateReport::rho)
      .def_readonly("residual_norm", &SteadyStateReport::residual_norm)
      .def_readonly("generator_norm", &SteadyStateReport::generator_norm)
      .def_readonly("min_eigenvalue", &SteadyStateReport::min_eigenvalue)
      .def_property_readonly("near_degenerate",
                             [](const SteadyStateReport& r) { return r.condition == ConditionFlag::near_degenerate; })
      .def_readonly("diagnostics", &SteadyStateReport::diagnostics);

  m.def(
      "steady_state",
      [](const LevelScheme& s, const std::map<std::string, double>& det) {
        return solve_steady_state(s, detunings(s, det));
      },
      py::arg("scheme"), py::arg("detunings") = std::map<std::string, double>{},
      "Reference steady-state solve. `detunings` overrides drive detunings (rad/s) by drive id.");

  m.def(
      "evolve",
      [](const LevelScheme& s, const std::map<std::string, double>& det, double t_final, std::optional<double> dt) {
        const auto d = detunings(s, det);
        const double step = dt ? *dt : stable_time_step(build_hamiltonian(s, d), build_dissipator(s));
        return evolve_to_steady(s, d, t_final, step);
      },
      py::arg("scheme"), py::arg("detunings") = std::map<std::string, double>{}, py::arg("t_final"),
      py::arg("dt") = py::none(), "RK4 evolution from the ground state; returns rho(t_final).");

  m.def(
      "doppler_rho21",
      [](const LevelScheme& s, const std::map<std::string, double>& det, double u, double span, int points) {
        return doppler_average_rho21(s, detunings(s, det), DopplerSpec{u, span, points});
      },
      py::arg("scheme"), py::arg("detunings") = std::map<std::string, double>{}, py::arg("u") = thermal_speed(300.0),
      py::arg("span") = 3.0, py::arg("points") = 301);

  m.def(
      "spectrum",
      [](const LevelScheme& s, double x_from, double x_to, int x_points, const std::string& y_kind,
         const std::string& y_drive, double y_from, double y_to, int y_points, bool y_dbm, double temperature,
         double cell_length, int doppler_points, unsigned workers, bool im_chi) {
        ScanSpec scan;
        scan.x = {x_from, x_to, x_points};
        scan.y_kind = axis_kind(y_kind);
        scan.y_drive = y_drive;
        scan.y = {y_from, y_to, y_points};
        scan.scale = y_dbm ? PowerScale::log_dbm : PowerScale::linear;
        VaporConditions vapor;
        vapor.temperature = temperature;
        vapor.cell_length = cell_length;
        DopplerSpec dop;
        if (doppler_points > 0) dop = {thermal_speed(temperature), 3.0, doppler_points};
        const ScanOptions opt{workers, im_chi ? GridQuantity::im_chi : GridQuantity::transmission};
        SpectrumGrid g;
        {
          py::gil_scoped_release release;
          g = run_scan(s, scan, vapor, dop, opt);
        }
        return grid_dict(g);
      },
      py::arg("scheme"), py::arg("x_from"), py::arg("x_to"), py::arg("x_points"),
      py::arg("y_kind") = "probe_transmission_only", py::arg("y_drive") = "", py::arg("y_from") = 0.0,
      py::arg("y_to") = 0.0, py::arg("y_points") = 1, py::arg("y_dbm") = false, py::arg("temperature") = 300.0,
      py::arg("cell_length") = 0.075, py::arg("doppler_points") = 301, py::arg("workers") = 1,
      py::arg("im_chi") = false,
      "Coupling-detuning scan. x and detuning y values in rad/s, powers in mW or dBm; doppler_points=0 "
      "disables velocity averaging.");

  m.def(
      "peak_trace",
      [](const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::MatrixXd& values, double lo, double hi,
         double prominence, bool track, double max_step) {
        if (values.rows() != y.size() || values.cols() != x.size()) throw InvalidInput("values must be len(y) x len(x)");
        SpectrumGrid g;
        g.x_values.assign(x.data(), x.data() + x.size());
        g.y_values.assign(y.data(), y.data() + y.size());
        for (Eigen::Index r = 0; r < values.rows(); ++r)
          for (Eigen::Index c = 0; c < values.cols(); ++c) g.values.push_back(values(r, c));
        const auto t = track ? track_peak_trace(g, {lo, hi}, {prominence, max_step})
                             : extract_peak_trace(g, {lo, hi}, {prominence});
        Eigen::MatrixXd out(static_cast<Eigen::Index>(t.points.size()), 3);
        for (std::size_t i = 0; i < t.points.size(); ++i) {
          const auto& p = t.points[i];
          out.row(static_cast<Eigen::Index>(i)) << p.scan_param, p.delta_c_peak, p.height;
        }
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("values"), py::arg("window_lo"), py::arg("window_hi"),
      py::arg("prominence") = 0.05, py::arg("track") = false, py::arg("max_step") = constants::two_pi * 6e6,
      "Rows of (scan_param, delta_c_peak, height). With track=True one line is followed outward from the row\n"
      "nearest y = 0, moving at most max_step (rad/s) between rows.");

  m.def(
      "bell_features",
      [](const Eigen::VectorXd& scan, const Eigen::VectorXd& peak) {
        if (scan.size() != peak.size()) throw InvalidInput("scan and peak arrays differ in length");
        PeakTrace t;
        for (Eigen::Index i = 0; i < scan.size(); ++i) t.points.push_back({scan(i), peak(i), 0.0});
        const auto b = bell_features(t);
        py::dict d;
        d["apex"] = b.apex;
        d["zero_crossings"] = py::make_tuple(b.zero_crossings[0], b.zero_crossings[1]);
        d["slopes"] = py::make_tuple(b.slopes[0], b.slopes[1]);
        return d;
      },
      py::arg("scan_param"), py::arg("delta_c_peak"));

  m.def("fit_peak_location", &fit_peak_location, py::arg("omega_rf1"), py::arg("omega_rf2"));
  m.def("fit_slope", &fit_slope, py::arg("omega_rf1"), py::arg("omega_rf2"), py::arg("a"));
  m.def(
      "infer_rf2_field",
      [](const std::string& measure, double value, double omega_rf1, double a) {
        if (measure != "apex" && measure != "slope") throw InvalidInput("measure must be 'apex' or 'slope'");
        return infer_rf2_field(measure == "apex" ? BellMeasurement::apex : BellMeasurement::slope, value, omega_rf1, a);
      },
      py::arg("measure"), py::arg("value"), py::arg("omega_rf1"), py::arg("a") = 1.0);
  m.def(
      "calibrate_cell_factor",
      [](const std::vector<std::pair<double, double>>& pts, double gain, double distance, double dipole) {
        std::vector<SplittingPoint> points;
        for (const auto& [p, s] : pts) points.push_back({p, s});
        const auto fit = calibrate_cell_factor(points, HornSource{0.0, gain, distance}, DipoleMoment{dipole});
        return py::make_tuple(fit.cell_factor, fit.rms_residual_mhz);
      },
      py::arg("points"), py::arg("gain"), py::arg("distance"), py::arg("dipole"),
      "points: (power_mw, splitting_mhz) pairs. Returns (cell_factor, rms_residual_mhz).");

  m.def(
      "optical_rabi",
      [](double power, double fwhm, double wavelength, double dipole) {
        return rabi_frequency(DipoleMoment{dipole}, optical_field_magnitude(OpticalBeam{power, fwhm, wavelength}));
      },
      py::arg("power"), py::arg("fwhm"), py::arg("wavelength"), py::arg("dipole"));
  m.def(
      "horn_rabi",
      [](double power, double gain, double distance, double cell_factor, double dipole) {
        return rabi_frequency(DipoleMoment{dipole}, rf_field_magnitude(HornSource{power, gain, distance, cell_factor}));
      },
      py::arg("power"), py::arg("gain"), py::arg("distance"), py::arg("cell_factor"), py::arg("dipole"));
  m.def("thermal_speed", [](double t) { return thermal_speed(t); }, py::arg("temperature"));
  m.def(
      "vapor_density",
      [](double t) {
        VaporConditions v;
        v.temperature = t;
        return vapor_density(v);
      },
      py::arg("temperature"));
}
