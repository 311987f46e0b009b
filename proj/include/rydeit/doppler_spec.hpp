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

namespace rydeit {

/// Velocity quadrature for Doppler averaging. u = 0 disables averaging.
struct DopplerSpec {
  double u = 0.0;      // most-probable speed sqrt(2 k_B T / m), m/s
  double span = 3.0;   // integration half-width in units of u
  int points = 301;    // odd, >= 3

  bool enabled() const { return u > 0.0; }
  bool operator==(const DopplerSpec&) const = default;
};

void validate(const DopplerSpec& spec);

}  // namespace rydeit
