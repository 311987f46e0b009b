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

#include "rydeit/scheme_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "rydeit/constants.hpp"
#include "rydeit/error.hpp"

namespace rydeit::config {

namespace {

[[noreturn]] void fail_at(const Field& f, const std::string& why) { throw ParseError(f.line, f.value_column, why); }

bool is_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

struct Unit {
  std::string_view name;
  double scale;
};

constexpr std::array<Unit, 5> kFrequencyUnits{{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}}};
constexpr std::array<Unit, 4> kPowerUnits{{{"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"nW", 1e-9}}};
constexpr std::array<Unit, 5> kLengthUnits{{{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}};

template <std::size_t N>
std::optional<double> lookup(const std::array<Unit, N>& units, std::string_view name) {
  for (const auto& u : units) {
    if (u.name == name) return u.scale;
  }
  return std::nullopt;
}

// The one conversion used by both parser and formatter.
double to_si(double value, double scale, Dimension dim) {
  if (dim == Dimension::angular_rate) return constants::two_pi * (value * scale);
  return value * scale;
}

std::string expected_units(Dimension dim) {
  switch (dim) {
    case Dimension::frequency: return "Hz, kHz, MHz, GHz or THz";
    case Dimension::angular_rate: return "Hz, kHz, MHz, GHz, THz (ordinary frequency) or rad/s";
    case Dimension::power: return "W, mW, uW, nW or dBm";
    case Dimension::length: return "m, cm, mm, um or nm";
    case Dimension::temperature: return "K";
    case Dimension::speed: return "m/s";
    case Dimension::dimensionless: return "no unit";
  }
  return "?";
}

std::pair<int, int> parse_pair(const Field& f) {
  const auto dash = f.value.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 == f.value.size()) fail_at(f, "expected a level pair like 2-3");
  int a = 0;
  int b = 0;
  const char* s = f.value.data();
  auto r1 = std::from_chars(s, s + dash, a);
  auto r2 = std::from_chars(s + dash + 1, s + f.value.size(), b);
  if (r1.ec != std::errc() || r1.ptr != s + dash || r2.ec != std::errc() || r2.ptr != s + f.value.size()) {
    fail_at(f, "expected a level pair like 2-3");
  }
  return {a, b};
}

void check_keys(const Record& r, std::initializer_list<std::string_view> allowed) {
  std::set<std::string_view> seen;
  for (const auto& f : r.fields) {
    if (std::find(allowed.begin(), allowed.end(), f.key) == allowed.end()) {
      throw ParseError(f.line, f.column, "unknown key '" + f.key + "'");
    }
    if (!seen.insert(f.key).second) throw ParseError(f.line, f.column, "duplicate key '" + f.key + "'");
  }
}

const Section* find_section(const std::vector<Section>& sections, std::string_view name) {
  const Section* found = nullptr;
  for (const auto& s : sections) {
    if (s.name == name) {
      if (found) throw ParseError(s.line, 1, "duplicate section [" + s.name + "]");
      found = &s;
    }
  }
  return found;
}

constexpr std::array<std::string_view, 9> kKnownSections{"scheme", "levels", "couplings", "drives", "scan",
                                                         "vapor",  "doppler", "run",     "set"};

}  // namespace

const Field* Record::find(std::string_view key) const {
  for (const auto& f : fields) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

const Field& Record::require(std::string_view key) const {
  if (const Field* f = find(key)) return *f;
  throw ParseError(line, 1, "missing required key '" + std::string(key) + "'");
}

std::vector<Section> tokenize(std::string_view text) {
  std::vector<Section> sections;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;

    std::size_t i = 0;
    auto skip_space = [&] {
      while (i < line.size() && is_space(line[i])) ++i;
    };
    skip_space();
    if (i == line.size() || line[i] == '#') {
      if (eol == text.size()) break;
      continue;
    }
    if (line[i] == '[') {
      const auto close = line.find(']', i);
      if (close == std::string_view::npos) throw ParseError(line_no, i + 1, "unterminated section header");
      std::string name(line.substr(i + 1, close - i - 1));
      if (name.empty() || !std::all_of(name.begin(), name.end(), is_key_char)) {
        throw ParseError(line_no, i + 2, "invalid section name");
      }
      if (std::find(kKnownSections.begin(), kKnownSections.end(), name) == kKnownSections.end()) {
        throw ParseError(line_no, i + 2, "unknown section [" + name + "]");
      }
      i = close + 1;
      skip_space();
      if (i < line.size() && line[i] != '#') throw ParseError(line_no, i + 1, "unexpected text after section header");
      sections.push_back(Section{std::move(name), line_no, {}});
      if (eol == text.size()) break;
      continue;
    }
    if (sections.empty()) throw ParseError(line_no, i + 1, "record outside of any [section]");

    Record rec;
    rec.line = line_no;
    while (i < line.size() && line[i] != '#') {
      Field f;
      f.line = line_no;
      f.column = i + 1;
      const auto key_start = i;
      while (i < line.size() && is_key_char(line[i])) ++i;
      if (i == key_start) throw ParseError(line_no, i + 1, "expected a key");
      f.key = std::string(line.substr(key_start, i - key_start));
      skip_space();
      if (i == line.size() || line[i] != '=') throw ParseError(line_no, i + 1, "expected '=' after key '" + f.key + "'");
      ++i;
      skip_space();
      f.value_column = i + 1;
      if (i < line.size() && line[i] == '"') {
        const auto close = line.find('"', i + 1);
        if (close == std::string_view::npos) throw ParseError(line_no, i + 1, "unterminated string");
        f.value = std::string(line.substr(i + 1, close - i - 1));
        i = close + 1;
      } else {
        const auto start = i;
        while (i < line.size() && !is_space(line[i]) && line[i] != '#' && line[i] != '"') ++i;
        if (i == start) throw ParseError(line_no, i + 1, "expected a value for '" + f.key + "'");
        f.value = std::string(line.substr(start, i - start));
      }
      if (i < line.size() && !is_space(line[i]) && line[i] != '#') {
        throw ParseError(line_no, i + 1, "expected whitespace between fields");
      }
      rec.fields.push_back(std::move(f));
      skip_space();
    }
    sections.back().records.push_back(std::move(rec));
    if (eol == text.size()) break;
  }
  return sections;
}

double parse_number(const Field& f) {
  double v = 0.0;
  const char* b = f.value.data();
  const char* e = b + f.value.size();
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e || !std::isfinite(v)) fail_at(f, "expected a number for '" + f.key + "'");
  return v;
}

long parse_integer(const Field& f) {
  long v = 0;
  const char* b = f.value.data();
  const char* e = b + f.value.size();
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) fail_at(f, "expected an integer for '" + f.key + "'");
  return v;
}

double parse_quantity(const Field& f, Dimension dim) {
  double v = 0.0;
  const char* b = f.value.data();
  const char* e = b + f.value.size();
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr == b || !std::isfinite(v)) fail_at(f, "expected a number for '" + f.key + "'");
  const std::string_view unit(r.ptr, static_cast<std::size_t>(e - r.ptr));
  if (dim == Dimension::dimensionless) {
    if (!unit.empty()) fail_at(f, "'" + f.key + "' takes no unit");
    return v;
  }
  if (unit.empty()) fail_at(f, "'" + f.key + "' needs a unit (" + expected_units(dim) + ")");
  std::optional<double> scale;
  switch (dim) {
    case Dimension::frequency: scale = lookup(kFrequencyUnits, unit); break;
    case Dimension::angular_rate:
      if (unit == "rad/s") return v;
      scale = lookup(kFrequencyUnits, unit);
      break;
    case Dimension::power:
      if (unit == "dBm") return dbm_to_watts(v);
      scale = lookup(kPowerUnits, unit);
      break;
    case Dimension::length: scale = lookup(kLengthUnits, unit); break;
    case Dimension::temperature:
      if (unit == "K") scale = 1.0;
      break;
    case Dimension::speed:
      if (unit == "m/s") scale = 1.0;
      break;
    case Dimension::dimensionless: break;
  }
  if (!scale) fail_at(f, "unknown unit '" + std::string(unit) + "' for '" + f.key + "' (expected " + expected_units(dim) + ")");
  return to_si(v, *scale, dim);
}

std::string format_quantity(double si, Dimension dim) {
  auto render = [](double v, int prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return std::string(buf);
  };
  auto exact_in = [&](std::string_view unit, double scale) -> std::optional<std::string> {
    const double base = dim == Dimension::angular_rate ? si / (constants::two_pi * scale) : si / scale;
    for (int prec = 1; prec <= 17; ++prec) {
      const std::string s = render(base, prec);
      if (to_si(std::stod(s), scale, dim) == si) return s + std::string(unit);
    }
    double up = base;
    double down = base;
    for (int k = 0; k < 8; ++k) {
      up = std::nextafter(up, INFINITY);
      down = std::nextafter(down, -INFINITY);
      for (double cand : {up, down}) {
        const std::string s = render(cand, 17);
        if (to_si(std::stod(s), scale, dim) == si) return s + std::string(unit);
      }
    }
    return std::nullopt;
  };
  auto pick = [&](auto const& units, std::string_view preferred, std::string_view fallback, double fallback_scale) {
    if (auto s = exact_in(preferred, *lookup(units, preferred))) return *s;
    return *exact_in(fallback, fallback_scale);
  };
  const double a = std::abs(si);
  switch (dim) {
    case Dimension::frequency:
      return pick(kFrequencyUnits, a >= 1e12 ? "THz" : a >= 1e9 ? "GHz" : a >= 1e6 || a == 0.0 ? "MHz" : "kHz", "Hz", 1.0);
    case Dimension::angular_rate: {
      const double f = a / constants::two_pi;
      auto s = exact_in(f >= 1e6 || f == 0.0 ? "MHz" : "kHz", f >= 1e6 || f == 0.0 ? 1e6 : 1e3);
      if (s) return *s;
      return render(si, 17) + "rad/s";
    }
    case Dimension::power: return pick(kPowerUnits, "mW", "W", 1.0);
    case Dimension::length: return pick(kLengthUnits, a < 1e-6 ? "nm" : a < 1e-3 ? "um" : a < 1.0 ? "mm" : "m", "m", 1.0);
    case Dimension::temperature: return render(si, 17) + "K";
    case Dimension::speed: return render(si, 17) + "m/s";
    case Dimension::dimensionless: {
      for (int prec = 1; prec <= 17; ++prec) {
        const std::string s = render(si, prec);
        if (std::stod(s) == si) return s;
      }
      return render(si, 17);
    }
  }
  return render(si, 17);
}

namespace {

EnergyDirection parse_direction(const Field& f) {
  if (f.value == "up") return EnergyDirection::up;
  if (f.value == "down") return EnergyDirection::down;
  fail_at(f, "dir must be 'up' or 'down'");
}

std::vector<DriveTarget> parse_targets(const Field& f) {
  std::vector<DriveTarget> out;
  std::size_t start = 0;
  while (start <= f.value.size()) {
    auto comma = f.value.find(',', start);
    if (comma == std::string::npos) comma = f.value.size();
    std::string item = f.value.substr(start, comma - start);
    Field sub = f;
    sub.value_column = f.value_column + start;
    DriveTarget t;
    const auto star = item.find('*');
    sub.value = item.substr(0, star);
    std::tie(t.from, t.to) = parse_pair(sub);
    if (star != std::string::npos) {
      Field sf = sub;
      sf.value = item.substr(star + 1);
      sf.value_column = sub.value_column + star + 1;
      t.rabi_scale = parse_number(sf);
      if (!(t.rabi_scale > 0.0)) fail_at(sf, "rabi scale must be > 0");
    }
    out.push_back(t);
    start = comma + 1;
    if (comma == f.value.size()) break;
  }
  return out;
}

bool parse_bool(const Field& f) {
  if (f.value == "true" || f.value == "on" || f.value == "yes") return true;
  if (f.value == "false" || f.value == "off" || f.value == "no") return false;
  fail_at(f, "expected true or false");
}

// Strength of a drive from power settings on its primary coupling.
double rabi_from_power(const LevelScheme& s, const DriveField& d, double power_w, std::optional<double> fwhm) {
  const auto& t = d.targets.front();
  const auto& c = s.coupling(t.from, t.to);
  double field = 0.0;
  if (fwhm) {
    field = optical_field_magnitude({power_w, *fwhm, c.wavelength()});
  } else {
    return horn_drive_rabi(s, d, power_w);
  }
  return rabi_frequency({c.dipole_d}, field);
}

void parse_levels(const Section& sec, LevelScheme& s) {
  for (const auto& r : sec.records) {
    check_keys(r, {"id", "gamma", "dephasing", "label"});
    Level l;
    const Field& idf = r.require("id");
    l.id = static_cast<int>(parse_integer(idf));
    if (l.id != static_cast<int>(s.levels.size()) + 1) fail_at(idf, "level ids must be contiguous from 1");
    l.decay_rate = parse_quantity(r.require("gamma"), Dimension::angular_rate);
    if (l.decay_rate < 0.0) fail_at(r.require("gamma"), "decay rate must be >= 0");
    if (const Field* f = r.find("dephasing")) {
      l.extra_dephasing = parse_quantity(*f, Dimension::angular_rate);
      if (l.extra_dephasing < 0.0) fail_at(*f, "dephasing must be >= 0");
    }
    if (const Field* f = r.find("label")) l.label = f->value;
    s.levels.push_back(std::move(l));
  }
}

void parse_couplings(const Section& sec, LevelScheme& s) {
  const int n = static_cast<int>(s.levels.size());
  for (const auto& r : sec.records) {
    check_keys(r, {"pair", "d", "freq", "wavelength", "dir"});
    Coupling c;
    const Field& pf = r.require("pair");
    std::tie(c.from, c.to) = parse_pair(pf);
    for (int id : {c.from, c.to}) {
      if (id < 1 || id > n) fail_at(pf, "unknown level " + std::to_string(id));
    }
    if (c.from == c.to) fail_at(pf, "a coupling needs two distinct levels");
    if (s.find_coupling(c.from, c.to)) {
      fail_at(pf, "duplicate coupling " + std::to_string(c.from) + "-" + std::to_string(c.to));
    }
    c.dipole_d = parse_quantity(r.require("d"), Dimension::dimensionless);
    if (!(c.dipole_d > 0.0)) fail_at(r.require("d"), "dipole moment must be > 0");
    const Field* ff = r.find("freq");
    const Field* wf = r.find("wavelength");
    if ((ff == nullptr) == (wf == nullptr)) throw ParseError(r.line, 1, "coupling needs exactly one of freq or wavelength");
    if (ff) {
      c.transition_freq_hz = parse_quantity(*ff, Dimension::frequency);
      if (!(c.transition_freq_hz > 0.0)) fail_at(*ff, "frequency must be > 0");
    } else {
      const double lambda = parse_quantity(*wf, Dimension::length);
      if (!(lambda > 0.0)) fail_at(*wf, "wavelength must be > 0");
      c.transition_freq_hz = constants::c / lambda;
    }
    c.direction = parse_direction(r.require("dir"));
    s.couplings.push_back(c);
  }
}

void parse_drives(const Section& sec, LevelScheme& s) {
  const int n = static_cast<int>(s.levels.size());
  std::set<std::pair<int, int>> driven;
  for (const auto& r : sec.records) {
    check_keys(r, {"id", "rabi", "power", "fwhm", "detuning", "frequency", "reference", "targets", "gain", "distance",
                   "cell_factor"});
    DriveField d;
    d.id = r.require("id").value;
    if (s.find_drive(d.id)) fail_at(r.require("id"), "duplicate drive '" + d.id + "'");
    const Field& tf = r.require("targets");
    d.targets = parse_targets(tf);
    for (const auto& t : d.targets) {
      for (int id : {t.from, t.to}) {
        if (id < 1 || id > n) fail_at(tf, "unknown level " + std::to_string(id));
      }
      if (!s.find_coupling(t.from, t.to)) {
        fail_at(tf, "no coupling " + std::to_string(t.from) + "-" + std::to_string(t.to) + " to drive");
      }
      if (!driven.insert(std::minmax(t.from, t.to)).second) {
        fail_at(tf, "coupling " + std::to_string(t.from) + "-" + std::to_string(t.to) + " is driven twice");
      }
    }
    const Field* gain = r.find("gain");
    const Field* dist = r.find("distance");
    if ((gain == nullptr) != (dist == nullptr)) throw ParseError(r.line, 1, "horn needs both gain and distance");
    if (gain) {
      HornSetup h;
      h.gain = parse_quantity(*gain, Dimension::dimensionless);
      h.distance = parse_quantity(*dist, Dimension::length);
      if (const Field* f = r.find("cell_factor")) h.cell_factor = parse_quantity(*f, Dimension::dimensionless);
      if (!(h.gain > 0.0)) fail_at(*gain, "gain must be > 0");
      if (!(h.distance > 0.0)) fail_at(*dist, "distance must be > 0");
      if (!(h.cell_factor > 0.0)) fail_at(*r.find("cell_factor"), "cell factor must be > 0");
      d.horn = h;
    } else if (const Field* f = r.find("cell_factor")) {
      throw ParseError(f->line, f->column, "cell_factor requires gain and distance");
    }
    if (const Field* f = r.find("reference")) {
      d.reference_hz = parse_quantity(*f, Dimension::frequency);
      if (!(*d.reference_hz > 0.0)) fail_at(*f, "reference frequency must be > 0");
    }

    const Field* rabi = r.find("rabi");
    const Field* power = r.find("power");
    const Field* fwhm = r.find("fwhm");
    if ((rabi == nullptr) == (power == nullptr)) throw ParseError(r.line, 1, "drive needs exactly one of rabi or power");
    if (fwhm && !power) throw ParseError(fwhm->line, fwhm->column, "fwhm only applies together with power");
    if (rabi) {
      d.rabi = parse_quantity(*rabi, Dimension::angular_rate);
      if (d.rabi < 0.0) fail_at(*rabi, "Rabi frequency must be >= 0");
    } else {
      const double p = parse_quantity(*power, Dimension::power);
      std::optional<double> w;
      if (fwhm) w = parse_quantity(*fwhm, Dimension::length);
      if (!fwhm && !d.horn) fail_at(*power, "power needs either fwhm (laser) or gain/distance (horn)");
      try {
        d.rabi = rabi_from_power(s, d, p, w);
      } catch (const InvalidInput& e) {
        fail_at(*power, e.what());
      }
    }

    const Field* det = r.find("detuning");
    const Field* freq = r.find("frequency");
    if (det && freq) throw ParseError(r.line, 1, "drive takes detuning or frequency, not both");
    if (det) d.detuning = parse_quantity(*det, Dimension::angular_rate);
    if (freq) d.detuning = constants::two_pi * (parse_quantity(*freq, Dimension::frequency) - s.reference_hz(d));
    s.drives.push_back(std::move(d));
  }
}

void parse_scheme_header(const Section* sec, LevelScheme& s) {
  if (!sec) return;
  for (const auto& r : sec->records) {
    check_keys(r, {"name", "ground", "probe"});
    if (const Field* f = r.find("name")) s.name = f->value;
    if (const Field* f = r.find("ground")) {
      s.ground = static_cast<int>(parse_integer(*f));
    }
    if (const Field* f = r.find("probe")) s.probe_pair = parse_pair(*f);
  }
}

LevelScheme scheme_from_sections(const std::vector<Section>& sections) {
  LevelScheme s;
  const Section* head = find_section(sections, "scheme");
  const Section* levels = find_section(sections, "levels");
  const Section* couplings = find_section(sections, "couplings");
  const Section* drives = find_section(sections, "drives");
  if (!levels || levels->records.empty()) throw ParseError(0, 0, "missing levels");
  parse_scheme_header(head, s);
  parse_levels(*levels, s);
  const int n = static_cast<int>(s.levels.size());
  if (s.ground < 1 || s.ground > n) throw ParseError(head ? head->line : 0, 1, "ground level does not exist");
  for (int id : {s.probe_pair.first, s.probe_pair.second}) {
    if (id < 1 || id > n) throw ParseError(head ? head->line : 0, 1, "probe pair references unknown level " + std::to_string(id));
  }
  if (couplings) parse_couplings(*couplings, s);
  if (drives) parse_drives(*drives, s);
  if (!s.find_drive("probe")) throw ParseError(drives ? drives->line : 0, drives ? 1 : 0, "missing probe drive");
  try {
    validate(s);
  } catch (const StructuralError& e) {
    throw ParseError(0, 0, e.what());
  }
  return s;
}

}  // namespace

void apply_drive_override(LevelScheme& s, const Record& r) {
  check_keys(r, {"drive", "rabi", "power", "detuning", "frequency"});
  const Field& idf = r.require("drive");
  auto idx = s.find_drive(idf.value);
  if (!idx) fail_at(idf, "unknown drive '" + idf.value + "'");
  DriveField& d = s.drives[*idx];
  const Field* rabi = r.find("rabi");
  const Field* power = r.find("power");
  if (rabi && power) throw ParseError(r.line, 1, "override takes rabi or power, not both");
  if (rabi) d.rabi = parse_quantity(*rabi, Dimension::angular_rate);
  if (power) {
    if (!d.horn) fail_at(*power, "drive '" + d.id + "' has no horn parameters for a power override");
    d.rabi = rabi_from_power(s, d, parse_quantity(*power, Dimension::power), std::nullopt);
  }
  if (d.rabi < 0.0) throw ParseError(r.line, 1, "Rabi frequency must be >= 0");
  const Field* det = r.find("detuning");
  const Field* freq = r.find("frequency");
  if (det && freq) throw ParseError(r.line, 1, "override takes detuning or frequency, not both");
  if (det) d.detuning = parse_quantity(*det, Dimension::angular_rate);
  if (freq) d.detuning = constants::two_pi * (parse_quantity(*freq, Dimension::frequency) - s.reference_hz(d));
}

std::optional<ScanSpec> parse_scan_section(const std::vector<Section>& sections) {
  const Section* sec = find_section(sections, "scan");
  if (!sec) return std::nullopt;
  ScanSpec scan;
  bool have_x = false;
  bool have_y = false;
  for (const auto& r : sec->records) {
    check_keys(r, {"axis", "kind", "drive", "from", "to", "points", "scale"});
    const Field& axis = r.require("axis");
    const Field& kind = r.require("kind");
    if (axis.value == "x") {
      if (have_x) fail_at(axis, "duplicate x axis");
      if (kind.value != "coupling_detuning") fail_at(kind, "x axis kind must be coupling_detuning");
      scan.x.from = parse_quantity(r.require("from"), Dimension::angular_rate);
      scan.x.to = parse_quantity(r.require("to"), Dimension::angular_rate);
      scan.x.points = static_cast<int>(parse_integer(r.require("points")));
      if (scan.x.points < 2) fail_at(r.require("points"), "points must be >= 2");
      have_x = true;
    } else if (axis.value == "y") {
      if (have_y) fail_at(axis, "duplicate y axis");
      have_y = true;
      if (kind.value == "probe_transmission_only") {
        scan.y_kind = ScanAxisKind::probe_transmission_only;
        continue;
      }
      if (kind.value == "rf_power_sweep") {
        scan.y_kind = ScanAxisKind::rf_power_sweep;
      } else if (kind.value == "rf_detuning_sweep") {
        scan.y_kind = ScanAxisKind::rf_detuning_sweep;
      } else {
        fail_at(kind, "unknown y axis kind '" + kind.value + "'");
      }
      scan.y_drive = r.require("drive").value;
      if (const Field* f = r.find("scale")) {
        if (f->value == "linear") {
          scan.scale = PowerScale::linear;
        } else if (f->value == "log-dBm") {
          scan.scale = PowerScale::log_dbm;
        } else {
          fail_at(*f, "scale must be linear or log-dBm");
        }
      }
      const Field& from = r.require("from");
      const Field& to = r.require("to");
      if (scan.y_kind == ScanAxisKind::rf_detuning_sweep) {
        if (scan.scale != PowerScale::linear) fail_at(*r.find("scale"), "detuning sweeps are linear");
        scan.y.from = parse_quantity(from, Dimension::angular_rate);
        scan.y.to = parse_quantity(to, Dimension::angular_rate);
      } else if (scan.scale == PowerScale::log_dbm) {
        for (const Field* f : {&from, &to}) {
          if (f->value.size() < 4 || f->value.substr(f->value.size() - 3) != "dBm") fail_at(*f, "log-dBm sweep limits must be in dBm");
        }
        scan.y.from = watts_to_dbm(parse_quantity(from, Dimension::power));
        scan.y.to = watts_to_dbm(parse_quantity(to, Dimension::power));
      } else {
        scan.y.from = parse_quantity(from, Dimension::power) / 1e-3;
        scan.y.to = parse_quantity(to, Dimension::power) / 1e-3;
      }
      scan.y.points = static_cast<int>(parse_integer(r.require("points")));
      if (scan.y.points < 2) fail_at(r.require("points"), "points must be >= 2");
      if (!(scan.y.from < scan.y.to)) fail_at(to, "'to' must exceed 'from'");
    } else {
      fail_at(axis, "axis must be x or y");
    }
  }
  if (!have_x) throw ParseError(sec->line, 1, "scan needs an x axis");
  if (!have_y) scan.y_kind = ScanAxisKind::probe_transmission_only;
  if (scan.y_kind == ScanAxisKind::probe_transmission_only) scan.y = AxisRange{0.0, 0.0, 1};
  if (!(scan.x.from < scan.x.to)) throw ParseError(sec->line, 1, "x axis 'to' must exceed 'from'");
  return scan;
}

std::optional<VaporConditions> parse_vapor_section(const std::vector<Section>& sections) {
  const Section* sec = find_section(sections, "vapor");
  if (!sec) return std::nullopt;
  VaporConditions v;
  for (const auto& r : sec->records) {
    check_keys(r, {"temperature", "cell_length", "isotope_fraction"});
    if (const Field* f = r.find("temperature")) v.temperature = parse_quantity(*f, Dimension::temperature);
    if (const Field* f = r.find("cell_length")) v.cell_length = parse_quantity(*f, Dimension::length);
    if (const Field* f = r.find("isotope_fraction")) v.isotope_fraction = parse_quantity(*f, Dimension::dimensionless);
  }
  try {
    validate(v);
  } catch (const InvalidInput& e) {
    throw ParseError(sec->line, 1, e.what());
  }
  return v;
}

std::optional<DopplerSettings> parse_doppler_section(const std::vector<Section>& sections) {
  const Section* sec = find_section(sections, "doppler");
  if (!sec) return std::nullopt;
  DopplerSettings d;
  for (const auto& r : sec->records) {
    check_keys(r, {"enabled", "points", "span", "u"});
    if (const Field* f = r.find("enabled")) d.enabled = parse_bool(*f);
    if (const Field* f = r.find("points")) {
      d.points = static_cast<int>(parse_integer(*f));
      if (d.points < 3 || d.points % 2 == 0) fail_at(*f, "points must be odd and >= 3");
    }
    if (const Field* f = r.find("span")) {
      d.span = parse_quantity(*f, Dimension::dimensionless);
      if (!(d.span > 0.0)) fail_at(*f, "span must be > 0");
    }
    if (const Field* f = r.find("u")) {
      d.u = parse_quantity(*f, Dimension::speed);
      if (*d.u < 0.0) fail_at(*f, "u must be >= 0");
    }
  }
  return d;
}

DopplerSpec DopplerSettings::resolve(const VaporConditions& vapor) const {
  DopplerSpec spec;
  spec.points = points;
  spec.span = span;
  spec.u = enabled ? (u ? *u : thermal_speed(vapor.temperature)) : 0.0;
  return spec;
}

LevelScheme parse_scheme(std::string_view text) { return scheme_from_sections(tokenize(text)); }

SchemeDocument parse_document(std::string_view text) {
  const auto sections = tokenize(text);
  SchemeDocument doc{scheme_from_sections(sections), parse_scan_section(sections), parse_vapor_section(sections),
                     parse_doppler_section(sections)};
  if (doc.scan) {
    try {
      validate(*doc.scan, doc.scheme);
    } catch (const Error& e) {
      throw ParseError(find_section(sections, "scan")->line, 1, e.what());
    }
  }
  return doc;
}

std::string serialize_scheme(const LevelScheme& s) {
  std::ostringstream out;
  auto quoted = [](const std::string& v) { return "\"" + v + "\""; };
  out << "[scheme]\n";
  if (!s.name.empty()) out << "name=" << quoted(s.name) << "\n";
  out << "ground=" << s.ground << "\n";
  out << "probe=" << s.probe_pair.first << "-" << s.probe_pair.second << "\n";
  out << "\n[levels]\n";
  for (const auto& l : s.levels) {
    out << "id=" << l.id << " gamma=" << format_quantity(l.decay_rate, Dimension::angular_rate);
    if (l.extra_dephasing != 0.0) out << " dephasing=" << format_quantity(l.extra_dephasing, Dimension::angular_rate);
    if (!l.label.empty()) out << " label=" << quoted(l.label);
    out << "\n";
  }
  out << "\n[couplings]\n";
  for (const auto& c : s.couplings) {
    out << "pair=" << c.from << "-" << c.to << " d=" << format_quantity(c.dipole_d, Dimension::dimensionless)
        << " freq=" << format_quantity(c.transition_freq_hz, Dimension::frequency) << " dir=" << to_string(c.direction)
        << "\n";
  }
  out << "\n[drives]\n";
  for (const auto& d : s.drives) {
    out << "id=" << quoted(d.id) << " rabi=" << format_quantity(d.rabi, Dimension::angular_rate)
        << " detuning=" << format_quantity(d.detuning, Dimension::angular_rate);
    if (d.reference_hz) out << " reference=" << format_quantity(*d.reference_hz, Dimension::frequency);
    out << " targets=";
    for (std::size_t k = 0; k < d.targets.size(); ++k) {
      const auto& t = d.targets[k];
      out << (k ? "," : "") << t.from << "-" << t.to;
      if (t.rabi_scale != 1.0) out << "*" << format_quantity(t.rabi_scale, Dimension::dimensionless);
    }
    if (d.horn) {
      out << " gain=" << format_quantity(d.horn->gain, Dimension::dimensionless)
          << " distance=" << format_quantity(d.horn->distance, Dimension::length)
          << " cell_factor=" << format_quantity(d.horn->cell_factor, Dimension::dimensionless);
    }
    out << "\n";
  }
  return out.str();
}

std::string serialize_scan(const ScanSpec& scan) {
  std::ostringstream out;
  out << "[scan]\n";
  out << "axis=x kind=coupling_detuning from=" << format_quantity(scan.x.from, Dimension::angular_rate)
      << " to=" << format_quantity(scan.x.to, Dimension::angular_rate) << " points=" << scan.x.points << "\n";
  out << "axis=y kind=" << to_string(scan.y_kind);
  if (scan.y_kind == ScanAxisKind::rf_detuning_sweep) {
    out << " drive=" << scan.y_drive << " from=" << format_quantity(scan.y.from, Dimension::angular_rate)
        << " to=" << format_quantity(scan.y.to, Dimension::angular_rate) << " points=" << scan.y.points;
  } else if (scan.y_kind == ScanAxisKind::rf_power_sweep) {
    auto p = [&](double v) {
      return scan.scale == PowerScale::log_dbm ? format_quantity(v, Dimension::dimensionless) + "dBm"
                                                : format_quantity(v, Dimension::dimensionless) + "mW";
    };
    out << " drive=" << scan.y_drive << " from=" << p(scan.y.from) << " to=" << p(scan.y.to)
        << " points=" << scan.y.points << " scale=" << to_string(scan.scale);
  }
  out << "\n";
  return out.str();
}

std::string serialize_vapor(const VaporConditions& v) {
  std::ostringstream out;
  out << "[vapor]\ntemperature=" << format_quantity(v.temperature, Dimension::temperature)
      << " cell_length=" << format_quantity(v.cell_length, Dimension::length)
      << " isotope_fraction=" << format_quantity(v.isotope_fraction, Dimension::dimensionless) << "\n";
  return out.str();
}

std::string serialize_doppler(const DopplerSettings& d) {
  std::ostringstream out;
  out << "[doppler]\nenabled=" << (d.enabled ? "true" : "false") << " points=" << d.points
      << " span=" << format_quantity(d.span, Dimension::dimensionless);
  if (d.u) out << " u=" << format_quantity(*d.u, Dimension::speed);
  out << "\n";
  return out.str();
}

}  // namespace rydeit::config
