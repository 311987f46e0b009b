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

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "rydeit/liouvillian.hpp"

namespace rydeit {

enum class ConditionFlag { ok, near_degenerate };

struct SteadyStateReport {
  ComplexMatrix rho;
  double residual_norm = 0.0;   // ||generator(rho)||_F, rad/s
  double generator_norm = 0.0;  // largest singular value of the vectorized generator
  double min_eigenvalue = 0.0;
  ConditionFlag condition = ConditionFlag::ok;
  std::vector<std::string> diagnostics;
};

/// Null vector of the vectorized generator with the trace row appended,
/// solved in the least-squares sense, then made exactly Hermitian with unit
/// trace. Two singular values below 1e-10 * sigma_max mark the result
/// near_degenerate (the trace-normalized minimizer is still returned).
SteadyStateReport solve_steady_state(const HamiltonianMatrix& h, const DissipatorSpec& d);
SteadyStateReport solve_steady_state(const LevelScheme& scheme, const DetuningAssignment& det);

/// Step size bound used by evolve_to_steady: 0.05 / max(||H/hbar||_2, max Gamma).
double stable_time_step(const HamiltonianMatrix& h, const DissipatorSpec& d);

/// Classical RK4 integration of the master equation from `rho0` over
/// [0, t_final] with steps no larger than dt. Throws NumericalError when the
/// trace drifts by more than 1e-9 or the state blows up.
ComplexMatrix evolve(const HamiltonianMatrix& h, const DissipatorSpec& d, ComplexMatrix rho0, double t_final, double dt);

/// evolve() starting from the ground-state projector.
ComplexMatrix evolve_to_steady(const LevelScheme& scheme, const DetuningAssignment& det, double t_final, double dt);

/// Repeated steady-state solves for one scheme where only the level energies
/// (the diagonal of H/hbar) change between calls, as in detuning scans and
/// Doppler averaging. Works in real Hermitian coordinates and solves the
/// generator bordered by the trace row with partial-pivot LU; points whose LU
/// pivots look singular are re-checked by SVD and solved by least squares
/// instead. Immutable after
/// construction; solve() may be called concurrently.
class SteadyStateKernel {
 public:
  /// Uses the scheme's Rabi frequencies; detunings come in through solve().
  explicit SteadyStateKernel(const LevelScheme& scheme);

  struct Result {
    std::complex<double> probe_coherence;  // rho_ba for probe pair (a, b)
    bool near_degenerate = false;
  };

  /// `level_energies` is the diagonal of H/hbar in rad/s.
  Result solve(std::span<const double> level_energies) const;
  ComplexMatrix solve_full(std::span<const double> level_energies, bool* near_degenerate = nullptr) const;

  int levels() const { return coords_.levels(); }

 private:
  Eigen::VectorXd solve_real(std::span<const double> level_energies, bool* near_degenerate) const;

  HermitianCoordinates coords_;
  RealMatrix static_part_;
  double border_scale_ = 1.0;
  std::vector<std::array<int, 3>> pairs_;  // (i, j, coordinate of Re rho_ij)
  int probe_upper_ = 1;
  int probe_lower_ = 0;
};

}  // namespace rydeit
