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

// Rotating-frame Hamiltonian and Lindblad dissipator of a LevelScheme.
//
//   d(rho)/dt = -(i/hbar) [H, rho] + L(rho),   H = (hbar/2) * M
//
// M holds the cumulative detunings on its diagonal and the Rabi frequencies
// of every driven coupling off the diagonal. L damps each coherence rho_ij at
// gamma_ij = (Gamma_i + Gamma_j)/2 and moves population from each level to
// its predecessor on the excitation path at rate Gamma_i.

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rydeit/scheme.hpp"

namespace rydeit {

using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Detuning of every drive (rad/s), indexed like LevelScheme::drives.
struct DetuningAssignment {
  std::vector<double> per_drive;

  /// The detunings stored in the scheme's drive fields.
  static DetuningAssignment defaults(const LevelScheme& scheme);

  double get(const LevelScheme& scheme, std::string_view drive_id) const;
  void set(const LevelScheme& scheme, std::string_view drive_id, double detuning);
};

/// Detuning seen by each coupling (0 for couplings no drive addresses).
std::vector<double> coupling_detunings(const LevelScheme& scheme, const DetuningAssignment& det);

/// Diagonal of M: -2 * (signed sum of detunings along each level's excitation
/// path); a step that goes down in energy contributes with a minus sign.
std::vector<double> cumulative_detunings(const LevelScheme& scheme, const DetuningAssignment& det);

/// Derivative of cumulative_detunings() with respect to one drive's detuning.
/// The diagonal is affine in every drive detuning, so
/// diag(det + x * e_drive) = diag(det) + x * sensitivity.
std::vector<double> detuning_sensitivity(const LevelScheme& scheme, std::string_view drive_id);

struct HamiltonianMatrix {
  ComplexMatrix m;  // H = (hbar/2) * m, rad/s

  ComplexMatrix over_hbar() const { return 0.5 * m; }
  Eigen::Index size() const { return m.rows(); }
};

HamiltonianMatrix build_hamiltonian(const LevelScheme& scheme, const DetuningAssignment& det);

struct DissipatorSpec {
  std::vector<double> decay;   // Gamma_i, rad/s
  RealMatrix dephasing;        // gamma_ij, symmetric, zero diagonal
  std::vector<int> feeds_into; // 0-based index each level decays into; -1 for the ground

  Eigen::Index size() const { return dephasing.rows(); }
};

DissipatorSpec build_dissipator(const LevelScheme& scheme);

/// L(rho) alone.
ComplexMatrix apply_dissipator(const DissipatorSpec& d, const ComplexMatrix& rho);

/// -(i/hbar)[H, rho] + L(rho). Throws InvalidInput on a dimension mismatch.
ComplexMatrix apply_generator(const HamiltonianMatrix& h, const DissipatorSpec& d, const ComplexMatrix& rho);

/// The generator as a linear map on column-stacked vec(rho), n^2 x n^2.
ComplexMatrix superoperator(const HamiltonianMatrix& h, const DissipatorSpec& d);

/// Generator restricted to Hermitian matrices, in real coordinates
/// (populations, then Re/Im of each upper coherence, interleaved).
class HermitianCoordinates {
 public:
  explicit HermitianCoordinates(int n);

  int levels() const { return n_; }
  int dimension() const { return n_ * n_; }
  /// Coordinate index of Re(rho_ij), i < j; Im follows at +1.
  int coherence_index(int i, int j) const { return index_(i, j); }

  Eigen::VectorXd to_real(const ComplexMatrix& rho) const;
  ComplexMatrix from_real(const Eigen::VectorXd& x) const;
  /// Real matrix of a Hermiticity-preserving linear map given as a callable.
  template <class Map>
  RealMatrix represent(Map&& map) const;

 private:
  int n_;
  Eigen::MatrixXi index_;
};

template <class Map>
RealMatrix HermitianCoordinates::represent(Map&& map) const {
  const int dim = dimension();
  RealMatrix r(dim, dim);
  const std::complex<double> I(0.0, 1.0);
  int col = 0;
  for (int i = 0; i < n_; ++i) {
    ComplexMatrix b = ComplexMatrix::Zero(n_, n_);
    b(i, i) = 1.0;
    r.col(col++) = to_real(map(b));
  }
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      ComplexMatrix b = ComplexMatrix::Zero(n_, n_);
      b(i, j) = 1.0;
      b(j, i) = 1.0;
      r.col(index_(i, j)) = to_real(map(b));
      b(i, j) = I;
      b(j, i) = -I;
      r.col(index_(i, j) + 1) = to_real(map(b));
    }
  }
  return r;
}

}  // namespace rydeit
