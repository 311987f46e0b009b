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

// Level-scheme description: levels, dipole couplings between them, and the
// drive fields (lasers, RF sources) that address those couplings.
//
// Level ids are 1-based and contiguous. Rates and Rabi frequencies are
// angular (rad/s); transition frequencies are ordinary (Hz).

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rydeit {

enum class EnergyDirection { up, down };

struct Level {
  int id = 0;
  std::string label;
  double decay_rate = 0.0;        // Gamma_i, rad/s
  double extra_dephasing = 0.0;   // added to coherence decay, rad/s

  bool operator==(const Level&) const = default;
};

/// Dipole-allowed transition. `direction` says whether `to` lies above or
/// below `from` in energy; it sets the sign of the detuning along the path.
struct Coupling {
  int from = 0;
  int to = 0;
  double dipole_d = 0.0;            // units of e*a0
  double transition_freq_hz = 0.0;
  EnergyDirection direction = EnergyDirection::up;

  bool connects(int a, int b) const { return (from == a && to == b) || (from == b && to == a); }
  double wavelength() const;
  bool operator==(const Coupling&) const = default;
};

struct DriveTarget {
  int from = 0;
  int to = 0;
  double rabi_scale = 1.0;

  bool operator==(const DriveTarget&) const = default;
};

/// Horn geometry for RF drives whose strength is given as a power.
struct HornSetup {
  double gain = 1.0;
  double distance = 0.4;
  double cell_factor = 0.5;

  bool operator==(const HornSetup&) const = default;
};

/// One laser or RF source. `rabi` is the Rabi frequency on the first target;
/// target k gets rabi * rabi_scale_k * d_k / d_0. `detuning` is measured from
/// `reference_hz` (defaults to the first target's transition frequency); each
/// target's own detuning is detuning + 2*pi*(reference_hz - f_target).
struct DriveField {
  std::string id;
  double rabi = 0.0;
  double detuning = 0.0;
  std::optional<double> reference_hz;
  std::vector<DriveTarget> targets;
  std::optional<HornSetup> horn;

  bool operator==(const DriveField&) const = default;
};

class LevelScheme {
 public:
  std::string name;
  std::vector<Level> levels;
  std::vector<Coupling> couplings;
  std::vector<DriveField> drives;
  int ground = 1;
  std::pair<int, int> probe_pair{1, 2};

  std::size_t size() const { return levels.size(); }

  std::optional<std::size_t> find_coupling(int a, int b) const;
  std::optional<std::size_t> find_drive(std::string_view id) const;
  const DriveField& drive(std::string_view id) const;
  DriveField& drive(std::string_view id);
  const Coupling& coupling(int a, int b) const;

  /// Reference frequency a drive's detuning is measured from.
  double reference_hz(const DriveField& d) const;
  /// Rabi frequency the drive produces on one of its targets.
  double target_rabi(const DriveField& d, std::size_t target_index) const;
  /// Detuning the drive produces on one of its targets.
  double target_detuning(const DriveField& d, std::size_t target_index) const;

  bool operator==(const LevelScheme&) const = default;
};

/// Structural validation; throws StructuralError describing the first problem.
void validate(const LevelScheme& scheme);

/// Parent of every level on its excitation path from the ground state
/// (index 0 = level 1). The ground maps to 0. Requires a tree-shaped coupling
/// graph; throws StructuralError otherwise.
std::vector<int> excitation_parents(const LevelScheme& scheme);

/// Returns a copy with the named drive's Rabi frequency replaced.
LevelScheme with_drive_rabi(LevelScheme scheme, std::string_view drive_id, double rabi);
/// Returns a copy with the named drive's detuning replaced.
LevelScheme with_drive_detuning(LevelScheme scheme, std::string_view drive_id, double detuning);

/// Rabi frequency of a horn-fed drive at the given input power (W), on its
/// primary target. Throws InvalidInput when the drive has no horn setup.
double horn_drive_rabi(const LevelScheme& scheme, const DriveField& drive, double power_w);

enum class ScanAxisKind { rf_power_sweep, rf_detuning_sweep, probe_transmission_only };
enum class PowerScale { linear, log_dbm };

struct AxisRange {
  double from = 0.0;
  double to = 0.0;
  int points = 2;

  std::vector<double> values() const;
  bool operator==(const AxisRange&) const = default;
};

/// 2-D scan layout. x is always the coupling-laser detuning (rad/s). The y
/// axis is in rad/s for detuning sweeps, mW for linear power sweeps and dBm
/// for log power sweeps.
struct ScanSpec {
  AxisRange x;
  ScanAxisKind y_kind = ScanAxisKind::probe_transmission_only;
  std::string y_drive;
  AxisRange y;
  PowerScale scale = PowerScale::linear;

  bool operator==(const ScanSpec&) const = default;
};

void validate(const ScanSpec& scan, const LevelScheme& scheme);

std::string_view to_string(ScanAxisKind kind);
std::string_view to_string(PowerScale scale);
std::string_view to_string(EnergyDirection dir);

}  // namespace rydeit
