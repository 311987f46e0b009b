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

#include "rydeit/liouvillian.hpp"

#include <complex>
#include <string>

#include "rydeit/error.hpp"

namespace rydeit {

DetuningAssignment DetuningAssignment::defaults(const LevelScheme& scheme) {
  DetuningAssignment det;
  det.per_drive.reserve(scheme.drives.size());
  for (const auto& d : scheme.drives) det.per_drive.push_back(d.detuning);
  return det;
}

double DetuningAssignment::get(const LevelScheme& scheme, std::string_view drive_id) const {
  auto i = scheme.find_drive(drive_id);
  if (!i) throw StructuralError("unknown drive '" + std::string(drive_id) + "'");
  return per_drive.at(*i);
}

void DetuningAssignment::set(const LevelScheme& scheme, std::string_view drive_id, double detuning) {
  auto i = scheme.find_drive(drive_id);
  if (!i) throw StructuralError("unknown drive '" + std::string(drive_id) + "'");
  per_drive.at(*i) = detuning;
}

namespace {

void check_assignment(const LevelScheme& scheme, const DetuningAssignment& det) {
  if (det.per_drive.size() != scheme.drives.size()) {
    throw InvalidInput("detuning assignment has " + std::to_string(det.per_drive.size()) + " entries for " +
                       std::to_string(scheme.drives.size()) + " drives");
  }
}

}  // namespace

std::vector<double> coupling_detunings(const LevelScheme& scheme, const DetuningAssignment& det) {
  check_assignment(scheme, det);
  std::vector<double> out(scheme.couplings.size(), 0.0);
  for (std::size_t di = 0; di < scheme.drives.size(); ++di) {
    DriveField drive = scheme.drives[di];
    drive.detuning = det.per_drive[di];
    for (std::size_t k = 0; k < drive.targets.size(); ++k) {
      const auto& t = drive.targets[k];
      auto ci = scheme.find_coupling(t.from, t.to);
      if (!ci) throw StructuralError("drive '" + drive.id + "' targets a nonexistent coupling");
      out[*ci] = scheme.target_detuning(drive, k);
    }
  }
  return out;
}

namespace {

std::vector<double> path_diagonal(const LevelScheme& scheme, const std::vector<double>& delta) {
  const auto parents = excitation_parents(scheme);
  const int n = static_cast<int>(scheme.size());

  // Signed path sums, filled in parent-before-child order.
  std::vector<double> path(n, 0.0);
  std::vector<bool> done(n, false);
  done[scheme.ground - 1] = true;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int lvl = 1; lvl <= n; ++lvl) {
      const int p = parents[lvl - 1];
      if (done[lvl - 1] || p == 0 || !done[p - 1]) continue;
      const auto ci = *scheme.find_coupling(p, lvl);
      const auto& c = scheme.couplings[ci];
      // `direction` describes c.to relative to c.from; walking it backwards flips it.
      const bool up = (c.direction == EnergyDirection::up) == (c.from == p);
      path[lvl - 1] = path[p - 1] + (up ? delta[ci] : -delta[ci]);
      done[lvl - 1] = true;
      progress = true;
    }
  }
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = -2.0 * path[i];
  return diag;
}

}  // namespace

std::vector<double> cumulative_detunings(const LevelScheme& scheme, const DetuningAssignment& det) {
  return path_diagonal(scheme, coupling_detunings(scheme, det));
}

std::vector<double> detuning_sensitivity(const LevelScheme& scheme, std::string_view drive_id) {
  const auto& drive = scheme.drive(drive_id);
  std::vector<double> unit(scheme.couplings.size(), 0.0);
  for (const auto& t : drive.targets) {
    auto ci = scheme.find_coupling(t.from, t.to);
    if (!ci) throw StructuralError("drive '" + drive.id + "' targets a nonexistent coupling");
    unit[*ci] = 1.0;
  }
  return path_diagonal(scheme, unit);
}

HamiltonianMatrix build_hamiltonian(const LevelScheme& scheme, const DetuningAssignment& det) {
  const int n = static_cast<int>(scheme.size());
  HamiltonianMatrix h{ComplexMatrix::Zero(n, n)};
  const auto diag = cumulative_detunings(scheme, det);
  for (int i = 0; i < n; ++i) h.m(i, i) = diag[i];
  for (const auto& drive : scheme.drives) {
    for (std::size_t k = 0; k < drive.targets.size(); ++k) {
      const auto& t = drive.targets[k];
      if (!scheme.find_coupling(t.from, t.to)) {
        throw StructuralError("drive '" + drive.id + "' targets a nonexistent coupling");
      }
      const double omega = scheme.target_rabi(drive, k);
      h.m(t.from - 1, t.to - 1) = omega;
      h.m(t.to - 1, t.from - 1) = omega;
    }
  }
  return h;
}

DissipatorSpec build_dissipator(const LevelScheme& scheme) {
  const int n = static_cast<int>(scheme.size());
  const auto parents = excitation_parents(scheme);
  DissipatorSpec d;
  d.decay.resize(n);
  d.feeds_into.resize(n);
  d.dephasing = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    d.decay[i] = scheme.levels[i].decay_rate;
    d.feeds_into[i] = parents[i] - 1;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& li = scheme.levels[i];
      const auto& lj = scheme.levels[j];
      d.dephasing(i, j) = 0.5 * (li.decay_rate + lj.decay_rate) + 0.5 * (li.extra_dephasing + lj.extra_dephasing);
    }
  }
  return d;
}

ComplexMatrix apply_dissipator(const DissipatorSpec& d, const ComplexMatrix& rho) {
  const auto n = d.size();
  if (rho.rows() != n || rho.cols() != n) throw InvalidInput("density matrix does not match the dissipator size");
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) out(i, j) = -d.dephasing(i, j) * rho(i, j);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) out(i, i) = -d.decay[i] * rho(i, i);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int target = d.feeds_into[i];
    if (target >= 0) out(target, target) += d.decay[i] * rho(i, i);
  }
  return out;
}

ComplexMatrix apply_generator(const HamiltonianMatrix& h, const DissipatorSpec& d, const ComplexMatrix& rho) {
  const auto n = h.size();
  if (d.size() != n || rho.rows() != n || rho.cols() != n) {
    throw InvalidInput("dimension mismatch between Hamiltonian, dissipator and density matrix");
  }
  const std::complex<double> minus_i(0.0, -1.0);
  const ComplexMatrix hh = h.over_hbar();
  ComplexMatrix out = minus_i * (hh * rho - rho * hh);
  out += apply_dissipator(d, rho);
  return out;
}

ComplexMatrix superoperator(const HamiltonianMatrix& h, const DissipatorSpec& d) {
  const auto n = h.size();
  const auto dim = n * n;
  ComplexMatrix s(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    ComplexMatrix b = ComplexMatrix::Zero(n, n);
    b(col % n, col / n) = 1.0;
    const ComplexMatrix g = apply_generator(h, d, b);
    s.col(col) = g.reshaped();
  }
  return s;
}

HermitianCoordinates::HermitianCoordinates(int n) : n_(n), index_(Eigen::MatrixXi::Constant(n, n, -1)) {
  int next = n;
  for (int i = 0; i < n; ++i) {
    index_(i, i) = i;
    for (int j = i + 1; j < n; ++j) {
      index_(i, j) = next;
      index_(j, i) = next;
      next += 2;
    }
  }
}

Eigen::VectorXd HermitianCoordinates::to_real(const ComplexMatrix& rho) const {
  Eigen::VectorXd x(dimension());
  for (int i = 0; i < n_; ++i) {
    x(i) = rho(i, i).real();
    for (int j = i + 1; j < n_; ++j) {
      x(index_(i, j)) = rho(i, j).real();
      x(index_(i, j) + 1) = rho(i, j).imag();
    }
  }
  return x;
}

ComplexMatrix HermitianCoordinates::from_real(const Eigen::VectorXd& x) const {
  ComplexMatrix rho(n_, n_);
  for (int i = 0; i < n_; ++i) {
    rho(i, i) = x(i);
    for (int j = i + 1; j < n_; ++j) {
      const std::complex<double> z(x(index_(i, j)), x(index_(i, j) + 1));
      rho(i, j) = z;
      rho(j, i) = std::conj(z);
    }
  }
  return rho;
}

}  // namespace rydeit
