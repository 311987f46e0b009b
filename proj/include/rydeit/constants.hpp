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

#include <numbers>

namespace rydeit::constants {

// CODATA 2018 exact / recommended values, SI units.
inline constexpr double c = 299792458.0;               // m/s
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_B = 1.380649e-23;            // J/K
inline constexpr double e = 1.602176634e-19;           // C
inline constexpr double a0 = 5.29177210903e-11;        // m
inline constexpr double amu = 1.66053906660e-27;       // kg

inline constexpr double rb85_mass = 84.9117897379 * amu;
inline constexpr double rb85_abundance = 0.7217;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace rydeit::constants

namespace rydeit {

/// Ordinary frequency in MHz to angular frequency in rad/s.
constexpr double mhz_to_rad(double mhz) { return constants::two_pi * mhz * 1e6; }
constexpr double rad_to_mhz(double rad) { return rad / (constants::two_pi * 1e6); }

}  // namespace rydeit
