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

#include "rydeit/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rydeit/error.hpp"

namespace rydeit {

namespace {

constexpr double kDegeneracyThreshold = 1e-10;
constexpr double kPsdTolerance = -1e-8;
constexpr double kPivotScreen = 1e-8;

ComplexMatrix finalize(ComplexMatrix rho) {
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (tr != 0.0 && std::isfinite(tr)) rho /= tr;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) rho(i, i) = rho(i, i).real();
  return rho;
}

}  // namespace

SteadyStateReport solve_steady_state(const HamiltonianMatrix& h, const DissipatorSpec& d) {
  const auto n = h.size();
  if (d.size() != n) throw InvalidInput("Hamiltonian and dissipator sizes differ");
  const auto dim = n * n;
  const ComplexMatrix s = superoperator(h, d);

  ComplexMatrix a(dim + 1, dim);
  a.topRows(dim) = s;
  a.row(dim).setZero();
  for (Eigen::Index i = 0; i < n; ++i) a(dim, i + i * n) = 1.0;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim + 1);
  b(dim) = 1.0;

  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(a);
  const Eigen::VectorXcd x = qr.solve(b);

  SteadyStateReport report;
  report.rho = finalize(x.reshaped(n, n));

  Eigen::JacobiSVD<ComplexMatrix> svd(s);
  const auto& sv = svd.singularValues();
  report.generator_norm = sv(0);
  if (dim >= 2 && sv(dim - 2) <= kDegeneracyThreshold * sv(0)) report.condition = ConditionFlag::near_degenerate;

  report.residual_norm = apply_generator(h, d, report.rho).norm();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(report.rho, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  if (report.min_eigenvalue < kPsdTolerance) {
    report.diagnostics.push_back("steady state has eigenvalue " + std::to_string(report.min_eigenvalue) +
                                 " below -1e-8; the generator is not a valid Lindbladian");
  }
  if (report.residual_norm > kDegeneracyThreshold * report.generator_norm) {
    report.diagnostics.push_back("residual " + std::to_string(report.residual_norm) + " exceeds 1e-10 * ||M||");
  }
  return report;
}

SteadyStateReport solve_steady_state(const LevelScheme& scheme, const DetuningAssignment& det) {
  return solve_steady_state(build_hamiltonian(scheme, det), build_dissipator(scheme));
}

double stable_time_step(const HamiltonianMatrix& h, const DissipatorSpec& d) {
  Eigen::JacobiSVD<ComplexMatrix> svd(h.over_hbar());
  double scale = svd.singularValues()(0);
  for (double g : d.decay) scale = std::max(scale, g);
  if (!(scale > 0.0)) return INFINITY;
  return 0.05 / scale;
}

ComplexMatrix evolve(const HamiltonianMatrix& h, const DissipatorSpec& d, ComplexMatrix rho, double t_final, double dt) {
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw InvalidInput("t_final must be finite and >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("dt must be finite and > 0");
  if (t_final == 0.0) return rho;
  const auto steps = static_cast<long long>(std::ceil(t_final / dt));
  const double step = t_final / static_cast<double>(steps);
  const std::complex<double> tr0 = rho.trace();
  auto f = [&](const ComplexMatrix& r) { return apply_generator(h, d, r); };
  for (long long k = 0; k < steps; ++k) {
    const ComplexMatrix k1 = f(rho);
    const ComplexMatrix k2 = f(rho + 0.5 * step * k1);
    const ComplexMatrix k3 = f(rho + 0.5 * step * k2);
    const ComplexMatrix k4 = f(rho + step * k3);
    rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((k & 1023) == 0 || k + 1 == steps) {
      const double drift = std::abs(rho.trace() - tr0);
      const double size = rho.norm();
      if (!std::isfinite(size) || drift > 1e-9 || size > 10.0 * std::max(1.0, std::abs(tr0))) {
        throw NumericalError("time integration became unstable at step " + std::to_string(k) +
                             " (trace drift " + std::to_string(drift) + "); use dt <= " +
                             std::to_string(stable_time_step(h, d)) + " s");
      }
    }
  }
  return rho;
}

ComplexMatrix evolve_to_steady(const LevelScheme& scheme, const DetuningAssignment& det, double t_final, double dt) {
  const auto n = static_cast<Eigen::Index>(scheme.size());
  ComplexMatrix rho0 = ComplexMatrix::Zero(n, n);
  rho0(scheme.ground - 1, scheme.ground - 1) = 1.0;
  return evolve(build_hamiltonian(scheme, det), build_dissipator(scheme), std::move(rho0), t_final, dt);
}

SteadyStateKernel::SteadyStateKernel(const LevelScheme& scheme) : coords_(static_cast<int>(scheme.size())) {
  // Rabi couplings and dissipation only; level energies are added per solve.
  DetuningAssignment det = DetuningAssignment::defaults(scheme);
  HamiltonianMatrix h = build_hamiltonian(scheme, det);
  h.m.diagonal().setZero();
  const DissipatorSpec d = build_dissipator(scheme);
  static_part_ = coords_.represent([&](const ComplexMatrix& b) { return apply_generator(h, d, b); });

  const int n = coords_.levels();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs_.push_back({i, j, coords_.coherence_index(i, j)});
  }
  border_scale_ = static_part_.cwiseAbs().maxCoeff();
  probe_lower_ = scheme.probe_pair.first - 1;
  probe_upper_ = scheme.probe_pair.second - 1;
}

Eigen::VectorXd SteadyStateKernel::solve_real(std::span<const double> e, bool* near_degenerate) const {
  const int n = coords_.levels();
  const int dim = coords_.dimension();
  if (static_cast<int>(e.size()) != n) throw InvalidInput("level energy vector has the wrong size");

  // Bordered system [[M, s t], [s t^T, 0]] [x; lambda] = [0; s]. The trace
  // row t is a left null vector of M, so lambda = 0 and t^T x = 1 whenever
  // the null space of M is one-dimensional.
  RealMatrix a(dim + 1, dim + 1);
  a.topLeftCorner(dim, dim) = static_part_;
  for (const auto& [i, j, k] : pairs_) {
    // -i (e_i - e_j) rho_ij in (Re, Im) coordinates.
    const double w = e[i] - e[j];
    a(k, k + 1) += w;
    a(k + 1, k) -= w;
  }
  double s = std::max(border_scale_, a.topLeftCorner(dim, dim).cwiseAbs().maxCoeff());
  if (!(s > 0.0)) s = 1.0;  // nothing drives or damps the system
  a.col(dim).setZero();
  a.row(dim).setZero();
  a.col(dim).head(n).setConstant(s);
  a.row(dim).head(n).setConstant(s);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim + 1);
  b(dim) = s;

  const RealMatrix generator = a.topLeftCorner(dim, dim);
  Eigen::PartialPivLU<Eigen::Ref<RealMatrix>> lu(a);
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  bool degenerate = false;
  Eigen::VectorXd x;
  if (pivots.minCoeff() <= kPivotScreen * pivots.maxCoeff()) {
    // Suspicious pivots: confirm with singular values and fall back to the
    // least-squares formulation.
    Eigen::JacobiSVD<RealMatrix> svd(generator);
    const auto& sv = svd.singularValues();
    degenerate = sv(dim - 2) <= kDegeneracyThreshold * sv(0);
    RealMatrix ls(dim + 1, dim);
    ls.topRows(dim) = generator;
    ls.row(dim).setZero();
    ls.row(dim).head(n).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim + 1);
    rhs(dim) = 1.0;
    x = ls.colPivHouseholderQr().solve(rhs);
  } else {
    x = lu.solve(b).head(dim);
  }
  if (near_degenerate) *near_degenerate = degenerate;
  const double tr = x.head(n).sum();
  if (tr != 0.0 && std::isfinite(tr)) x /= tr;
  return x;
}

SteadyStateKernel::Result SteadyStateKernel::solve(std::span<const double> e) const {
  Result r;
  const Eigen::VectorXd x = solve_real(e, &r.near_degenerate);
  const int lo = std::min(probe_lower_, probe_upper_);
  const int hi = std::max(probe_lower_, probe_upper_);
  const int k = coords_.coherence_index(lo, hi);
  const std::complex<double> upper_entry(x(k), x(k + 1));  // rho_{lo,hi}
  r.probe_coherence = probe_upper_ > probe_lower_ ? std::conj(upper_entry) : upper_entry;
  return r;
}

ComplexMatrix SteadyStateKernel::solve_full(std::span<const double> e, bool* near_degenerate) const {
  return finalize(coords_.from_real(solve_real(e, near_degenerate)));
}

}  // namespace rydeit
