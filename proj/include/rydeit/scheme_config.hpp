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

// Text format for level schemes and scan descriptions.
//
// A document is a list of [sections]; each non-blank line inside a section is
// a record of whitespace-separated key=value fields. Values may be quoted.
// '#' starts a comment. Dimensional values need an explicit unit suffix.
// See docs/scheme-format.md for the grammar.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rydeit/doppler_spec.hpp"
#include "rydeit/field_calculus.hpp"
#include "rydeit/scheme.hpp"

namespace rydeit::config {

struct Field {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;        // of the key
  std::size_t value_column = 0;  // of the value
};

struct Record {
  std::size_t line = 0;
  std::vector<Field> fields;

  const Field* find(std::string_view key) const;
  const Field& require(std::string_view key) const;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Record> records;
};

/// Splits text into sections and records. Throws ParseError on bad syntax.
std::vector<Section> tokenize(std::string_view text);

enum class Dimension { frequency, angular_rate, power, length, temperature, speed, dimensionless };

/// Parses "12.5MHz", "-3dBm", "75mm", ... into SI (Hz, rad/s, W, m, K, m/s).
double parse_quantity(const Field& f, Dimension dim);
double parse_number(const Field& f);
long parse_integer(const Field& f);

/// Doppler options as written in a document; u is derived from the vapor
/// temperature unless given explicitly.
struct DopplerSettings {
  bool enabled = true;
  int points = 301;
  double span = 3.0;
  std::optional<double> u;

  DopplerSpec resolve(const VaporConditions& vapor) const;
  bool operator==(const DopplerSettings&) const = default;
};

struct SchemeDocument {
  LevelScheme scheme;
  std::optional<ScanSpec> scan;
  std::optional<VaporConditions> vapor;
  std::optional<DopplerSettings> doppler;
};

LevelScheme parse_scheme(std::string_view text);
SchemeDocument parse_document(std::string_view text);

/// Interprets the scan/vapor/doppler sections of an already tokenized document.
std::optional<ScanSpec> parse_scan_section(const std::vector<Section>& sections);
std::optional<VaporConditions> parse_vapor_section(const std::vector<Section>& sections);
std::optional<DopplerSettings> parse_doppler_section(const std::vector<Section>& sections);

/// Applies "key=value" style overrides to one drive (rabi, detuning,
/// frequency, power).
void apply_drive_override(LevelScheme& scheme, const Record& record);

/// Canonical text; parse_scheme(serialize_scheme(s)) == s.
std::string serialize_scheme(const LevelScheme& scheme);
std::string serialize_scan(const ScanSpec& scan);
std::string serialize_vapor(const VaporConditions& vapor);
std::string serialize_doppler(const DopplerSettings& doppler);

/// Shortest decimal rendering of `si_value / unit_scale` that maps back to
/// exactly `si_value` under the parser's conversion.
std::string format_quantity(double si_value, Dimension dim);

std::vector<std::string> preset_names();
/// Source text of a built-in preset; throws InvalidInput for unknown names.
std::string preset_text(std::string_view name);
LevelScheme builtin_preset(std::string_view name);

}  // namespace rydeit::config
