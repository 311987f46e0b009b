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

#include "rydeit/scheme.hpp"

#include <cmath>
#include <queue>
#include <set>
#include <string>

#include "rydeit/constants.hpp"
#include "rydeit/error.hpp"
#include "rydeit/field_calculus.hpp"

namespace rydeit {

double Coupling::wavelength() const { return constants::c / transition_freq_hz; }

std::optional<std::size_t> LevelScheme::find_coupling(int a, int b) const {
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    if (couplings[i].connects(a, b)) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> LevelScheme::find_drive(std::string_view id) const {
  for (std::size_t i = 0; i < drives.size(); ++i) {
    if (drives[i].id == id) return i;
  }
  return std::nullopt;
}

const DriveField& LevelScheme::drive(std::string_view id) const {
  auto i = find_drive(id);
  if (!i) throw StructuralError("unknown drive '" + std::string(id) + "'");
  return drives[*i];
}

DriveField& LevelScheme::drive(std::string_view id) {
  auto i = find_drive(id);
  if (!i) throw StructuralError("unknown drive '" + std::string(id) + "'");
  return drives[*i];
}

const Coupling& LevelScheme::coupling(int a, int b) const {
  auto i = find_coupling(a, b);
  if (!i) {
    throw StructuralError("no coupling between levels " + std::to_string(a) + " and " + std::to_string(b));
  }
  return couplings[*i];
}

double LevelScheme::reference_hz(const DriveField& d) const {
  if (d.reference_hz) return *d.reference_hz;
  if (d.targets.empty()) throw StructuralError("drive '" + d.id + "' has no targets");
  return coupling(d.targets.front().from, d.targets.front().to).transition_freq_hz;
}

double LevelScheme::target_rabi(const DriveField& d, std::size_t k) const {
  const auto& t = d.targets.at(k);
  const auto& primary = d.targets.front();
  const double d0 = coupling(primary.from, primary.to).dipole_d;
  const double dk = coupling(t.from, t.to).dipole_d;
  return d.rabi * t.rabi_scale * dk / d0;
}

double LevelScheme::target_detuning(const DriveField& d, std::size_t k) const {
  const auto& t = d.targets.at(k);
  const double f = coupling(t.from, t.to).transition_freq_hz;
  return d.detuning + constants::two_pi * (reference_hz(d) - f);
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw StructuralError(msg); }

bool valid_level(const LevelScheme& s, int id) { return id >= 1 && id <= static_cast<int>(s.levels.size()); }

}  // namespace

std::vector<int> excitation_parents(const LevelScheme& s) {
  const int n = static_cast<int>(s.levels.size());
  if (!valid_level(s, s.ground)) fail("ground level " + std::to_string(s.ground) + " does not exist");
  std::vector<std::vector<int>> adj(n + 1);
  for (const auto& c : s.couplings) {
    if (!valid_level(s, c.from) || !valid_level(s, c.to)) fail("coupling references a missing level");
    adj[c.from].push_back(c.to);
    adj[c.to].push_back(c.from);
  }
  std::vector<int> parent(n + 1, -1);
  parent[s.ground] = 0;
  std::queue<int> q;
  q.push(s.ground);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (v == parent[u]) continue;
      if (parent[v] != -1) {
        fail("coupling graph has a cycle through levels " + std::to_string(u) + " and " + std::to_string(v) +
             "; excitation paths are not unique");
      }
      parent[v] = u;
      q.push(v);
    }
  }
  for (int i = 1; i <= n; ++i) {
    if (parent[i] == -1) fail("level " + std::to_string(i) + " is not connected to the ground state");
  }
  return {parent.begin() + 1, parent.end()};
}

void validate(const LevelScheme& s) {
  if (s.levels.empty()) fail("scheme has no levels");
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    const auto& l = s.levels[i];
    if (l.id != static_cast<int>(i) + 1) fail("level ids must be contiguous from 1");
    if (!std::isfinite(l.decay_rate) || l.decay_rate < 0.0) fail("level " + std::to_string(l.id) + " has a negative decay rate");
    if (!std::isfinite(l.extra_dephasing) || l.extra_dephasing < 0.0) fail("level " + std::to_string(l.id) + " has negative dephasing");
  }
  if (!valid_level(s, s.ground)) fail("ground level does not exist");
  if (s.levels[s.ground - 1].decay_rate != 0.0) fail("ground level must have zero decay rate");
  std::set<std::pair<int, int>> pairs;
  for (const auto& c : s.couplings) {
    if (!valid_level(s, c.from) || !valid_level(s, c.to)) {
      fail("coupling " + std::to_string(c.from) + "-" + std::to_string(c.to) + " references an unknown level");
    }
    if (c.from == c.to) fail("coupling connects level " + std::to_string(c.from) + " to itself");
    if (!(c.dipole_d > 0.0) || !std::isfinite(c.dipole_d)) fail("coupling dipole moment must be > 0");
    if (!(c.transition_freq_hz > 0.0) || !std::isfinite(c.transition_freq_hz)) fail("coupling transition frequency must be > 0");
    auto key = std::minmax(c.from, c.to);
    if (!pairs.insert(key).second) {
      fail("duplicate coupling between levels " + std::to_string(key.first) + " and " + std::to_string(key.second));
    }
  }
  excitation_parents(s);

  std::set<std::string> ids;
  for (const auto& d : s.drives) {
    if (d.id.empty()) fail("drive with empty id");
    if (!ids.insert(d.id).second) fail("duplicate drive '" + d.id + "'");
    if (!std::isfinite(d.rabi) || d.rabi < 0.0) fail("drive '" + d.id + "' has a negative Rabi frequency");
    if (!std::isfinite(d.detuning)) fail("drive '" + d.id + "' has a non-finite detuning");
    if (d.targets.empty()) fail("drive '" + d.id + "' has no targets");
    for (const auto& t : d.targets) {
      if (!s.find_coupling(t.from, t.to)) {
        fail("drive '" + d.id + "' targets missing coupling " + std::to_string(t.from) + "-" + std::to_string(t.to));
      }
      if (!(t.rabi_scale > 0.0) || !std::isfinite(t.rabi_scale)) fail("drive '" + d.id + "' has a non-positive rabi scale");
    }
    if (d.horn) {
      if (!(d.horn->gain > 0.0) || !(d.horn->distance > 0.0) || !(d.horn->cell_factor > 0.0)) {
        fail("drive '" + d.id + "' horn parameters must be > 0");
      }
    }
  }
  // A coupling may be addressed by at most one drive.
  std::set<std::pair<int, int>> driven;
  for (const auto& d : s.drives) {
    for (const auto& t : d.targets) {
      if (!driven.insert(std::minmax(t.from, t.to)).second) {
        fail("coupling " + std::to_string(t.from) + "-" + std::to_string(t.to) + " is driven twice");
      }
    }
  }

  auto probe = s.find_drive("probe");
  if (!probe) fail("scheme has no 'probe' drive");
  const auto& pt = s.drives[*probe].targets.front();
  if (!(std::minmax(pt.from, pt.to) == std::minmax(s.probe_pair.first, s.probe_pair.second))) {
    fail("the 'probe' drive must address the probe pair");
  }
  if (!s.find_coupling(s.probe_pair.first, s.probe_pair.second)) fail("probe pair is not a coupling");
}

LevelScheme with_drive_rabi(LevelScheme scheme, std::string_view drive_id, double rabi) {
  if (!std::isfinite(rabi) || rabi < 0.0) throw InvalidInput("Rabi frequency must be finite and >= 0");
  scheme.drive(drive_id).rabi = rabi;
  return scheme;
}

LevelScheme with_drive_detuning(LevelScheme scheme, std::string_view drive_id, double detuning) {
  if (!std::isfinite(detuning)) throw InvalidInput("detuning must be finite");
  scheme.drive(drive_id).detuning = detuning;
  return scheme;
}

double horn_drive_rabi(const LevelScheme& scheme, const DriveField& drive, double power_w) {
  if (!drive.horn) throw InvalidInput("drive '" + drive.id + "' needs gain and distance to convert power");
  if (drive.targets.empty()) throw InvalidInput("drive '" + drive.id + "' has no targets");
  const auto& t = drive.targets.front();
  const auto& c = scheme.coupling(t.from, t.to);
  const double field = rf_field_magnitude({power_w, drive.horn->gain, drive.horn->distance, drive.horn->cell_factor});
  return rabi_frequency({c.dipole_d}, field);
}

std::vector<double> AxisRange::values() const {
  std::vector<double> v(static_cast<std::size_t>(points));
  if (points == 1) {
    v[0] = from;
    return v;
  }
  for (int i = 0; i < points; ++i) {
    // Endpoints exact; symmetric ranges give exactly mirrored samples.
    const double t = static_cast<double>(i) / (points - 1);
    v[i] = (i == points - 1) ? to : from + (to - from) * t;
  }
  if (from == -to) {
    for (int i = 0; i < points / 2; ++i) v[points - 1 - i] = -v[i];
    if (points % 2 == 1) v[points / 2] = 0.0;
  }
  return v;
}

void validate(const ScanSpec& scan, const LevelScheme& scheme) {
  auto finite_range = [](const AxisRange& r) { return std::isfinite(r.from) && std::isfinite(r.to) && r.from < r.to; };
  if (scan.x.points < 2 || !finite_range(scan.x)) throw InvalidInput("scan x axis needs >= 2 points over a finite increasing range");
  if (!scheme.find_drive("coupling")) throw StructuralError("scan requires a 'coupling' drive");
  if (scan.y_kind == ScanAxisKind::probe_transmission_only) return;
  if (scan.y.points < 2 || !finite_range(scan.y)) throw InvalidInput("scan y axis needs >= 2 points over a finite increasing range");
  if (!scheme.find_drive(scan.y_drive)) throw StructuralError("scan references unknown drive '" + scan.y_drive + "'");
  if (scan.y_kind == ScanAxisKind::rf_power_sweep) {
    if (!scheme.drive(scan.y_drive).horn) {
      throw StructuralError("power sweep of drive '" + scan.y_drive + "' needs horn parameters (gain, distance)");
    }
    if (scan.scale == PowerScale::linear && scan.y.from < 0.0) throw InvalidInput("linear power sweep must be >= 0 mW");
  } else if (scan.scale != PowerScale::linear) {
    throw InvalidInput("detuning sweeps must use a linear scale");
  }
}

std::string_view to_string(ScanAxisKind kind) {
  switch (kind) {
    case ScanAxisKind::rf_power_sweep: return "rf_power_sweep";
    case ScanAxisKind::rf_detuning_sweep: return "rf_detuning_sweep";
    case ScanAxisKind::probe_transmission_only: return "probe_transmission_only";
  }
  return "?";
}

std::string_view to_string(PowerScale scale) { return scale == PowerScale::linear ? "linear" : "log-dBm"; }

std::string_view to_string(EnergyDirection dir) { return dir == EnergyDirection::up ? "up" : "down"; }

}  // namespace rydeit
