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

#include <string>
#include <string_view>
#include <vector>

#include "rydeit/error.hpp"
#include "rydeit/scheme_config.hpp"

namespace rydeit::config {

namespace {

// 85Rb: 5S1/2 -> 5P3/2 -> 50D5/2 -> 51P3/2 -> {51S1/2, 52S1/2}.
// The two P->S lines sit 324.8 MHz apart, centred on 29.08 GHz.
constexpr std::string_view kSixLevel = R"(# 85Rb ladder with one RF source addressing two Rydberg transitions.
[scheme]
name="six_level_rb85"
ground=1
probe=1-2

[levels]
id=1 gamma=0MHz label="5S1/2 F=3"
id=2 gamma=6MHz label="5P3/2 F=4"
id=3 gamma=3kHz label="50D5/2"
id=4 gamma=2kHz label="51P3/2"
id=5 gamma=2kHz label="51S1/2"
id=6 gamma=2kHz label="52S1/2"

[couplings]
pair=1-2 d=1.93 wavelength=780.24nm dir=up
pair=2-3 d=0.0099 wavelength=480.1nm dir=up
pair=3-4 d=1430.4 freq=17.04GHz dir=up
pair=4-5 d=1282.4 freq=28.9176GHz dir=down
pair=4-6 d=1250.77 freq=29.2424GHz dir=up

[drives]
id=probe rabi=4.8MHz detuning=0MHz targets=1-2
id=coupling rabi=8.5MHz detuning=0MHz targets=2-3
id=RF1 rabi=40MHz detuning=0MHz targets=3-4 gain=50.1 distance=0.4m cell_factor=0.5
id=RF2 rabi=138MHz detuning=0MHz reference=29.08GHz targets=4-5,4-6 gain=79.4 distance=0.4m cell_factor=0.5
)";

// Six-level scheme plus the mJ=3/2 ladder (levels 7, 8) that the P->S RF
// transitions cannot reach. 0.82 = 0.4 / 0.48989, ratio of angular parts.
constexpr std::string_view kEightLevel = R"(# 85Rb six-level ladder plus the uncoupled mJ=3/2 pathway.
[scheme]
name="eight_level_rb85"
ground=1
probe=1-2

[levels]
id=1 gamma=0MHz label="5S1/2 F=3"
id=2 gamma=6MHz label="5P3/2 F=4"
id=3 gamma=3kHz label="50D5/2 mJ=1/2"
id=4 gamma=2kHz label="51P3/2 mJ=1/2"
id=5 gamma=2kHz label="51S1/2"
id=6 gamma=2kHz label="52S1/2"
id=7 gamma=3kHz label="50D5/2 mJ=3/2"
id=8 gamma=2kHz label="51P3/2 mJ=3/2"

[couplings]
pair=1-2 d=1.93 wavelength=780.24nm dir=up
pair=2-3 d=0.0099 wavelength=480.1nm dir=up
pair=3-4 d=1430.4 freq=17.04GHz dir=up
pair=4-5 d=1282.4 freq=28.9176GHz dir=down
pair=4-6 d=1250.77 freq=29.2424GHz dir=up
pair=2-7 d=0.0099 wavelength=480.1nm dir=up
pair=7-8 d=1430.4 freq=17.04GHz dir=up

[drives]
id=probe rabi=4.8MHz detuning=0MHz targets=1-2
id=coupling rabi=8.5MHz detuning=0MHz targets=2-3,2-7*0.82
id=RF1 rabi=40MHz detuning=0MHz targets=3-4,7-8*0.82 gain=50.1 distance=0.4m cell_factor=0.5
id=RF2 rabi=138MHz detuning=0MHz reference=29.08GHz targets=4-5,4-6 gain=79.4 distance=0.4m cell_factor=0.5
)";

constexpr std::string_view kFourLevel = R"(# Standard four-level ladder: probe, coupling and RF1 only.
[scheme]
name="four_level_rb85"
ground=1
probe=1-2

[levels]
id=1 gamma=0MHz label="5S1/2 F=3"
id=2 gamma=6MHz label="5P3/2 F=4"
id=3 gamma=3kHz label="50D5/2"
id=4 gamma=2kHz label="51P3/2"

[couplings]
pair=1-2 d=1.93 wavelength=780.24nm dir=up
pair=2-3 d=0.0099 wavelength=480.1nm dir=up
pair=3-4 d=1430.4 freq=17.04GHz dir=up

[drives]
id=probe rabi=4.8MHz detuning=0MHz targets=1-2
id=coupling rabi=8.5MHz detuning=0MHz targets=2-3
id=RF1 rabi=40MHz detuning=0MHz targets=3-4 gain=50.1 distance=0.4m cell_factor=0.5
)";

}  // namespace

std::vector<std::string> preset_names() { return {"four_level_rb85", "six_level_rb85", "eight_level_rb85"}; }

std::string preset_text(std::string_view name) {
  if (name == "six_level_rb85") return std::string(kSixLevel);
  if (name == "eight_level_rb85") return std::string(kEightLevel);
  if (name == "four_level_rb85") return std::string(kFourLevel);
  throw InvalidInput("unknown preset '" + std::string(name) +
                     "' (available: four_level_rb85, six_level_rb85, eight_level_rb85)");
}

LevelScheme builtin_preset(std::string_view name) { return parse_scheme(preset_text(name)); }

}  // namespace rydeit::config
