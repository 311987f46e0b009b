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

#include "rydeit/field_calculus.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rydeit/error.hpp"

namespace rydeit {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate(const OpticalBeam& beam) {
  require(finite(beam.power) && beam.power >= 0.0, "optical beam power must be finite and >= 0");
  require(finite(beam.fwhm) && beam.fwhm > 0.0, "optical beam FWHM must be finite and > 0");
  require(finite(beam.wavelength) && beam.wavelength > 0.0, "optical wavelength must be finite and > 0");
}

void validate(const HornSource& src) {
  require(finite(src.power) && src.power >= 0.0, "horn power must be finite and >= 0");
  require(finite(src.gain) && src.gain > 0.0, "horn gain must be finite and > 0");
  require(finite(src.distance) && src.distance > 0.0, "horn distance must be finite and > 0");
  require(finite(src.cell_factor) && src.cell_factor >= 0.0, "cell factor must be finite and >= 0");
}

void validate(const VaporConditions& cond) {
  require(finite(cond.temperature) && cond.temperature > 0.0, "temperature must be > 0 K");
  require(finite(cond.cell_length) && cond.cell_length > 0.0, "cell length must be > 0");
  require(finite(cond.isotope_fraction) && cond.isotope_fraction > 0.0 && cond.isotope_fraction <= 1.0,
          "isotope fraction must lie in (0, 1]");
}

double optical_field_magnitude(const OpticalBeam& beam) {
  validate(beam);
  using namespace constants;
  const double k = std::sqrt(8.0 * std::numbers::ln2 / (std::numbers::pi * c * epsilon0));
  return k * std::sqrt(beam.power) / beam.fwhm;
}

double rf_field_magnitude(const HornSource& src) {
  validate(src);
  using namespace constants;
  return src.cell_factor * std::sqrt(src.power * src.gain / (two_pi * c * epsilon0)) / src.distance;
}

double rabi_frequency(DipoleMoment d, double field) {
  require(finite(d.normalized_d), "dipole moment must be finite");
  require(finite(field) && field >= 0.0, "field magnitude must be finite and >= 0");
  using namespace constants;
  return d.normalized_d * e * a0 * field / hbar;
}

double field_for_rabi(DipoleMoment d, double rabi) {
  require(finite(d.normalized_d) && d.normalized_d > 0.0, "dipole moment must be > 0");
  require(finite(rabi) && rabi >= 0.0, "Rabi frequency must be finite and >= 0");
  using namespace constants;
  return rabi * hbar / (d.normalized_d * e * a0);
}

double vapor_pressure(double temperature) {
  require(finite(temperature) && temperature > 0.0, "temperature must be > 0 K");
  // Exponent constants as published (5.006 + 4.857), taken literally.
  return std::pow(10.0, 5.006 + 4.857 - 4215.0 / temperature);
}

double vapor_density(const VaporConditions& cond) {
  validate(cond);
  return cond.isotope_fraction * vapor_pressure(cond.temperature) / (constants::k_B * cond.temperature);
}

double hyperfine_coupling_offset(double hf_split_hz, double lambda_p, double lambda_c) {
  require(finite(lambda_c) && lambda_c > 0.0, "coupling wavelength must be > 0");
  require(finite(lambda_p) && finite(hf_split_hz), "inputs must be finite");
  return hf_split_hz * (lambda_p / lambda_c - 1.0);
}

double thermal_speed(double temperature, double mass) {
  require(finite(temperature) && temperature >= 0.0, "temperature must be >= 0 K");
  require(finite(mass) && mass > 0.0, "mass must be > 0");
  return std::sqrt(2.0 * constants::k_B * temperature / mass);
}

double dbm_to_watts(double dbm) {
  require(finite(dbm), "dBm value must be finite");
  return 1e-3 * std::pow(10.0, dbm / 10.0);
}

double watts_to_dbm(double watts) {
  require(finite(watts) && watts > 0.0, "power must be > 0 to express in dBm");
  return 10.0 * std::log10(watts / 1e-3);
}

}  // namespace rydeit
