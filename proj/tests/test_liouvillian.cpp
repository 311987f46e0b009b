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
#include <complex>
#include <numbers>
#include <random>

#include "rydeit/constants.hpp"
#include "rydeit/error.hpp"
#include "rydeit/liouvillian.hpp"
#include "rydeit/scheme_config.hpp"

using namespace rydeit;
using cd = std::complex<double>;

namespace {

const cd I(0.0, 1.0);

ComplexMatrix random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cd(g(rng), g(rng));
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

// Six-level preset with both RF2 lines placed at the RF2 reference, so a zero
// RF2 detuning leaves every coupling resonant.
LevelScheme six_level_degenerate_rf2() {
  LevelScheme s = config::builtin_preset("six_level_rb85");
  for (auto& c : s.couplings) {
    if (c.connects(4, 5) || c.connects(4, 6)) c.transition_freq_hz = *s.drive("RF2").reference_hz;
  }
  return s;
}

LevelScheme two_level(double rabi, double detuning) {
  LevelScheme s = config::parse_scheme(R"([scheme]
name=two_level
[levels]
id=1 gamma=0Hz
id=2 gamma=6MHz
[couplings]
pair=1-2 d=1.93 wavelength=780.24nm dir=up
[drives]
id=probe rabi=1MHz detuning=0Hz targets=1-2
)");
  s = with_drive_rabi(s, "probe", rabi);
  return with_drive_detuning(s, "probe", detuning);
}

}  // namespace

TEST_CASE("zero detunings give a zero diagonal") {
  const LevelScheme s = six_level_degenerate_rf2();
  for (double v : cumulative_detunings(s, DetuningAssignment::defaults(s))) CHECK(v == 0.0);
}

TEST_CASE("coupling detuning propagates to every level above the intermediate state") {
  const LevelScheme s = six_level_degenerate_rf2();
  DetuningAssignment det = DetuningAssignment::defaults(s);
  det.set(s, "coupling", mhz_to_rad(10.0));
  const auto diag = cumulative_detunings(s, det);
  CHECK(diag[0] == 0.0);
  CHECK(diag[1] == 0.0);
  for (int i = 2; i < 6; ++i) CHECK(diag[i] == doctest::Approx(-2.0 * mhz_to_rad(10.0)));
}

TEST_CASE("RF2 on the 4-5 line shifts level 6 by twice the line spacing") {
  const LevelScheme s = config::builtin_preset("six_level_rb85");
  DetuningAssignment det = DetuningAssignment::defaults(s);
  // f_RF2 = f45 expressed as a detuning from the drive's reference frequency.
  const double f45 = s.coupling(4, 5).transition_freq_hz;
  det.set(s, "RF2", constants::two_pi * (f45 - *s.drive("RF2").reference_hz));
  det.set(s, "coupling", mhz_to_rad(3.0));
  const auto delta = coupling_detunings(s, det);
  CHECK(std::abs(delta[*s.find_coupling(4, 5)]) < 1e-3);
  CHECK(delta[*s.find_coupling(4, 6)] == doctest::Approx(-mhz_to_rad(324.8)));
  const auto diag = cumulative_detunings(s, det);
  CHECK(diag[4] == doctest::Approx(diag[3]).epsilon(1e-9));
  CHECK(diag[5] - diag[3] == doctest::Approx(mhz_to_rad(649.6)));
}

TEST_CASE("RF2 line detunings differ by the fixed line spacing") {
  const LevelScheme s = config::builtin_preset("six_level_rb85");
  for (double mhz : {-400.0, -162.4, 0.0, 37.0, 500.0}) {
    DetuningAssignment det = DetuningAssignment::defaults(s);
    det.set(s, "RF2", mhz_to_rad(mhz));
    const auto delta = coupling_detunings(s, det);
    CHECK(delta[*s.find_coupling(4, 5)] - delta[*s.find_coupling(4, 6)] == doctest::Approx(mhz_to_rad(324.8)));
  }
}

TEST_CASE("the level reached by a downward step flips the sign of that detuning") {
  const LevelScheme s = config::builtin_preset("six_level_rb85");
  DetuningAssignment det = DetuningAssignment::defaults(s);
  det.set(s, "probe", mhz_to_rad(1.0));
  det.set(s, "coupling", mhz_to_rad(2.0));
  det.set(s, "RF1", mhz_to_rad(4.0));
  det.set(s, "RF2", mhz_to_rad(8.0));
  const auto delta = coupling_detunings(s, det);
  const double path4 = mhz_to_rad(7.0);
  const auto diag = cumulative_detunings(s, det);
  CHECK(diag[1] == doctest::Approx(-2.0 * mhz_to_rad(1.0)));
  CHECK(diag[3] == doctest::Approx(-2.0 * path4));
  CHECK(diag[4] == doctest::Approx(-2.0 * (path4 - delta[*s.find_coupling(4, 5)])));
  CHECK(diag[5] == doctest::Approx(-2.0 * (path4 + delta[*s.find_coupling(4, 6)])));
}

TEST_CASE("detuning sensitivity matches finite changes") {
  const LevelScheme s = config::builtin_preset("eight_level_rb85");
  DetuningAssignment det = DetuningAssignment::defaults(s);
  det.set(s, "RF2", mhz_to_rad(-13.0));
  const auto base = cumulative_detunings(s, det);
  for (const char* id : {"probe", "coupling", "RF1", "RF2"}) {
    DetuningAssignment moved = det;
    moved.set(s, id, det.get(s, id) + mhz_to_rad(5.0));
    const auto after = cumulative_detunings(s, moved);
    const auto sens = detuning_sensitivity(s, id);
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(after[i] - base[i] == doctest::Approx(sens[i] * mhz_to_rad(5.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("cyclic coupling graphs are rejected") {
  LevelScheme s = config::builtin_preset("four_level_rb85");
  s.couplings.push_back({1, 4, 1.0, 1e9, EnergyDirection::up});
  CHECK_THROWS_AS(cumulative_detunings(s, DetuningAssignment::defaults(s)), StructuralError);
}

TEST_CASE("Hamiltonian structure") {
  {
    LevelScheme s = six_level_degenerate_rf2();
    for (auto& d : s.drives) d.rabi = 0.0;
    CHECK(build_hamiltonian(s, DetuningAssignment::defaults(s)).m.isZero(0.0));
  }
  {
    const LevelScheme s = config::builtin_preset("eight_level_rb85");
    const auto h = build_hamiltonian(s, DetuningAssignment::defaults(s));
    const double omega_c = s.drive("coupling").rabi;
    CHECK(h.m(1, 6).real() == doctest::Approx(0.82 * omega_c));
    CHECK(h.over_hbar()(1, 6).real() == doctest::Approx(0.82 * omega_c / 2.0));
    CHECK(h.m(6, 7).real() == doctest::Approx(0.82 * s.drive("RF1").rabi));
    CHECK((h.m - h.m.adjoint()).norm() == 0.0);
  }
  {
    const LevelScheme s = config::builtin_preset("six_level_rb85");
    const auto h = build_hamiltonian(s, DetuningAssignment::defaults(s));
    const double omega = s.drive("RF2").rabi;
    CHECK(h.m(3, 4).real() == omega);
    CHECK(h.m(3, 5).real() == doctest::Approx(omega * 1250.77 / 1282.4));
    CHECK(h.m(4, 5) == cd(0.0));
    CHECK((h.m - h.m.adjoint()).norm() == 0.0);
  }
}

TEST_CASE("dissipator rates and trace preservation") {
  const LevelScheme s = config::builtin_preset("six_level_rb85");
  const auto d = build_dissipator(s);
  CHECK(d.dephasing(0, 1) == doctest::Approx(std::numbers::pi * 6e6));
  CHECK(d.dephasing(1, 0) == d.dephasing(0, 1));
  CHECK(d.feeds_into[4] == 3);
  CHECK(d.feeds_into[5] == 3);
  CHECK(d.feeds_into[1] == 0);
  CHECK(d.feeds_into[0] == -1);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const ComplexMatrix rho = random_density(6, rng);
    CHECK(std::abs(apply_dissipator(d, rho).trace()) < 1e-12 * apply_dissipator(d, rho).norm());
  }

  const LevelScheme e = config::builtin_preset("eight_level_rb85");
  const auto d8 = build_dissipator(e);
  CHECK(d8.feeds_into[6] == 1);
  CHECK(d8.feeds_into[7] == 6);

  LevelScheme quiet = s;
  for (auto& l : quiet.levels) l.decay_rate = 0.0;
  const ComplexMatrix rho = random_density(6, rng);
  CHECK(apply_dissipator(build_dissipator(quiet), rho).isZero(0.0));
}

TEST_CASE("generator basics") {
  std::mt19937_64 rng(11);
  LevelScheme s = config::builtin_preset("six_level_rb85");
  {
    LevelScheme idle = six_level_degenerate_rf2();
    for (auto& d : idle.drives) d.rabi = 0.0;
    for (auto& l : idle.levels) l.decay_rate = 0.0;
    const auto h = build_hamiltonian(idle, DetuningAssignment::defaults(idle));
    const auto d = build_dissipator(idle);
    CHECK(apply_generator(h, d, random_density(6, rng)).isZero(0.0));
  }
  {
    LevelScheme off = s;
    for (auto& d : off.drives) d.rabi = 0.0;
    ComplexMatrix ground = ComplexMatrix::Zero(6, 6);
    ground(0, 0) = 1.0;
    const auto h = build_hamiltonian(off, DetuningAssignment::defaults(off));
    CHECK(apply_generator(h, build_dissipator(off), ground).isZero(0.0));
  }
  const auto h = build_hamiltonian(s, DetuningAssignment::defaults(s));
  const auto d = build_dissipator(s);
  CHECK_THROWS_AS(apply_generator(h, d, ComplexMatrix::Zero(5, 5)), InvalidInput);
}

TEST_CASE("two-level generator matches the optical Bloch equations") {
  std::mt19937_64 rng(5);
  const double omega = mhz_to_rad(4.8), delta = mhz_to_rad(-1.3);
  const LevelScheme s = two_level(omega, delta);
  const auto h = build_hamiltonian(s, DetuningAssignment::defaults(s));
  const auto d = build_dissipator(s);
  const double gamma2 = mhz_to_rad(6.0), gamma12 = gamma2 / 2.0;
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix rho = random_density(2, rng);
    const ComplexMatrix dot = apply_generator(h, d, rho);
    const cd r11 = rho(0, 0), r22 = rho(1, 1), r21 = rho(1, 0);
    const cd expect21 = -I * omega / 2.0 * (r11 - r22) + (I * delta - gamma12) * r21;
    const double expect11 = omega * r21.imag() + gamma2 * r22.real();
    CHECK(std::abs(dot(1, 0) - expect21) < 1e-9 * std::abs(expect21) + 1e-6);
    CHECK(std::abs(dot(0, 0).real() - expect11) < 1e-9 * std::abs(expect11) + 1e-6);
  }
  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  CHECK(apply_generator(h, d, ground)(0, 0).real() == 0.0);
}

TEST_CASE("generator preserves Hermiticity and trace, and is linear") {
  std::mt19937_64 rng(2024);
  const LevelScheme s = config::builtin_preset("eight_level_rb85");
  DetuningAssignment det = DetuningAssignment::defaults(s);
  det.set(s, "coupling", mhz_to_rad(4.0));
  det.set(s, "RF2", mhz_to_rad(-70.0));
  const auto h = build_hamiltonian(s, det);
  const auto d = build_dissipator(s);
  for (int k = 0; k < 1000; ++k) {
    const ComplexMatrix rho = random_density(8, rng);
    const ComplexMatrix dot = apply_generator(h, d, rho);
    CHECK(std::abs(dot.trace()) < 1e-12 * dot.norm());
    CHECK((dot - dot.adjoint()).norm() < 1e-12 * dot.norm());
  }
  const ComplexMatrix a = random_density(8, rng), b = random_density(8, rng);
  const ComplexMatrix lhs = apply_generator(h, d, 2.5 * a - 0.75 * b);
  const ComplexMatrix rhs = 2.5 * apply_generator(h, d, a) - 0.75 * apply_generator(h, d, b);
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("superoperator and real coordinates agree with the generator") {
  std::mt19937_64 rng(9);
  const LevelScheme s = config::builtin_preset("six_level_rb85");
  const auto h = build_hamiltonian(s, DetuningAssignment::defaults(s));
  const auto d = build_dissipator(s);
  const ComplexMatrix sup = superoperator(h, d);
  const HermitianCoordinates coords(6);
  const RealMatrix real = coords.represent([&](const ComplexMatrix& x) { return apply_generator(h, d, x); });
  for (int k = 0; k < 10; ++k) {
    const ComplexMatrix rho = random_density(6, rng);
    const ComplexMatrix dot = apply_generator(h, d, rho);
    const Eigen::VectorXcd v = sup * rho.reshaped();
    CHECK((v.reshaped(6, 6) - dot).norm() < 1e-12 * dot.norm());
    CHECK((coords.from_real(real * coords.to_real(rho)) - dot).norm() < 1e-12 * dot.norm());
    CHECK((coords.from_real(coords.to_real(rho)) - rho).norm() < 1e-15);
  }
}
