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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>

#include "rydeit/constants.hpp"
#include "rydeit/error.hpp"
#include "rydeit/grid_io.hpp"

using namespace rydeit;

namespace {

SpectrumGrid sample_grid(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SpectrumGrid g;
  g.y_label = "delta_rf2_mhz";
  for (int i = 0; i < 13; ++i) g.x_values.push_back(mhz_to_rad(-30.0 + 5.0 * i));
  for (int j = 0; j < 4; ++j) g.y_values.push_back(mhz_to_rad(-300.0 + 200.0 * j));
  for (std::size_t k = 0; k < g.rows() * g.cols(); ++k) g.values.push_back(u(rng) * std::pow(10.0, -8.0 * u(rng)));
  return g;
}

}  // namespace

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-30.0) == "-30");
  CHECK(format_double(1e-300) == "1e-300");
  for (double v : {1.0 / 3.0, 2.0 / 7.0, 6.02214076e23, -4.9e-324}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  // Axis values go through rad/s and back, which leaves float noise.
  CHECK(format_axis(rad_to_mhz(mhz_to_rad(0.3))) == "0.3");
  CHECK(format_axis(rad_to_mhz(mhz_to_rad(-162.2))) == "-162.2");
}

TEST_CASE("grid CSV layout") {
  SpectrumGrid g;
  g.y_label = "row";
  g.x_values = {mhz_to_rad(-1.0), mhz_to_rad(1.0)};
  g.y_values = {0.0};
  g.values = {0.25, 0.5};
  CHECK(grid_to_csv(g) == "delta_c_mhz,row,transmission\n-1,0,0.25\n1,0,0.5\n");
  g.quantity = GridQuantity::im_chi;
  CHECK(grid_to_csv(g).rfind("delta_c_mhz,row,im_chi\n", 0) == 0);
}

TEST_CASE("grid CSV round-trips values exactly and axes to 1e-9") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const auto g = sample_grid(rng);
    const auto back = parse_grid_csv(grid_to_csv(g));
    REQUIRE(back.rows() == g.rows());
    REQUIRE(back.cols() == g.cols());
    CHECK(back.y_label == g.y_label);
    CHECK(back.values == g.values);
    for (std::size_t i = 0; i < g.cols(); ++i) CHECK(std::abs(back.x_values[i] - g.x_values[i]) < 1e-9 * std::abs(mhz_to_rad(30.0)));
    for (std::size_t j = 0; j < g.rows(); ++j) CHECK(std::abs(back.y_values[j] - g.y_values[j]) < 1e-9 * std::abs(mhz_to_rad(300.0)));
    CHECK(grid_to_csv(back) == grid_to_csv(g));
  }
}

TEST_CASE("power axes are not unit-converted") {
  const auto g = parse_grid_csv("delta_c_mhz,p_rf2_dbm,transmission\n0,-10,0.5\n1,-10,0.6\n0,0,0.7\n1,0,0.8\n");
  CHECK(g.y_values == std::vector<double>{-10.0, 0.0});
  CHECK(g.at(1, 1) == 0.8);
}

TEST_CASE("malformed grid CSV reports the location") {
  const auto line_of = [](std::string_view text) {
    try {
      parse_grid_csv(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.line());
    }
    return -1L;
  };
  CHECK(line_of("") == 1);
  CHECK(line_of("a,b\n") == 1);
  CHECK(line_of("delta_c_mhz,row,transmission\n0,0,0.5\n1,0,abc\n") == 3);
  CHECK(line_of("delta_c_mhz,row,transmission\n0,0,0.5\n1,0\n") == 3);
  // Second row lacks a column.
  CHECK(line_of("delta_c_mhz,y_mhz,transmission\n0,0,1\n1,0,1\n0,1,1\n") > 0);
  // Rows must share the x axis.
  CHECK(line_of("delta_c_mhz,y_mhz,transmission\n0,0,1\n1,0,1\n0,1,1\n2,1,1\n") > 0);
}

TEST_CASE("trace CSV and key-value output") {
  PeakTrace t;
  t.points = {{mhz_to_rad(-10.0), mhz_to_rad(2.5), 0.75}};
  std::ostringstream os;
  write_trace_csv(os, t, "delta_rf2_mhz", true);
  CHECK(os.str() == "delta_rf2_mhz,delta_c_peak_mhz,peak_height\n-10,2.5,0.75\n");
  std::ostringstream kv;
  write_key_values(kv, {{"apex_mhz", "6.1"}, {"slope", "0.07"}});
  CHECK(kv.str() == "apex_mhz=6.1\nslope=0.07\n");
}
