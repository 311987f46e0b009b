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

// Conversions from laboratory knobs (laser power and waist, horn power and
// geometry) to field amplitudes and Rabi frequencies, plus Rb vapor density.
//
// All angular frequencies are rad/s; fields are V/m; powers are W.

#include "rydeit/constants.hpp"

namespace rydeit {

struct OpticalBeam {
  double power;       // W
  double fwhm;        // m
  double wavelength;  // m
};

struct HornSource {
  double power;            // W, input to the horn
  double gain;             // linear, relative to isotropic
  double distance;         // m, horn aperture to atoms
  double cell_factor = 0.5;  // standing-wave perturbation of the glass cell
};

/// Dipole moment in units of e*a0 (radial and angular parts combined).
struct DipoleMoment {
  double normalized_d;
};

struct VaporConditions {
  double temperature = 300.0;    // K
  double cell_length = 0.075;    // m
  double isotope_fraction = constants::rb85_abundance;
};

double optical_field_magnitude(const OpticalBeam& beam);
double rf_field_magnitude(const HornSource& src);
double rabi_frequency(DipoleMoment d, double field);

/// Inverse of rabi_frequency: the field amplitude that yields `rabi`.
double field_for_rabi(DipoleMoment d, double rabi);

/// Rb saturated vapor pressure in Pa.
double vapor_pressure(double temperature);
/// Number density of the resonant isotope, m^-3.
double vapor_density(const VaporConditions& cond);

/// Apparent offset of a lower-state hyperfine line when the coupling laser is
/// scanned against a fixed probe: split * (lambda_p / lambda_c - 1).
double hyperfine_coupling_offset(double hf_split_hz, double lambda_p, double lambda_c);

/// Most-probable thermal speed sqrt(2 k_B T / m).
double thermal_speed(double temperature, double mass = constants::rb85_mass);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

void validate(const OpticalBeam& beam);
void validate(const HornSource& src);
void validate(const VaporConditions& cond);

}  // namespace rydeit
