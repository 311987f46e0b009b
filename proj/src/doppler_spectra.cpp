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

#include "rydeit/doppler_spectra.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "rydeit/constants.hpp"
#include "rydeit/error.hpp"

namespace rydeit {

namespace {

constexpr const char* kProbe = "probe";
constexpr const char* kCoupling = "coupling";

// Level energies (diagonal of H/hbar) as an affine function of the coupling
// detuning and the atom velocity, all other detunings held fixed.
struct EnergyModel {
  std::vector<double> base;
  std::vector<double> per_coupling_detuning;
  std::vector<double> per_velocity;

  void eval(double delta_c, double v, std::vector<double>& out) const {
    for (std::size_t i = 0; i < base.size(); ++i) {
      out[i] = base[i] + delta_c * per_coupling_detuning[i] + v * per_velocity[i];
    }
  }
};

// `det` supplies every detuning; delta_c passed to eval() adds to the
// coupling detuning stored there.
EnergyModel energy_model(const LevelScheme& scheme, const DetuningAssignment& det) {
  const std::size_t n = scheme.size();
  EnergyModel m;
  m.base = cumulative_detunings(scheme, det);
  for (double& x : m.base) x *= 0.5;
  m.per_coupling_detuning.assign(n, 0.0);
  m.per_velocity.assign(n, 0.0);
  const double kp = constants::two_pi / probe_wavelength(scheme);
  const auto sp = detuning_sensitivity(scheme, kProbe);
  for (std::size_t i = 0; i < n; ++i) m.per_velocity[i] = -kp * 0.5 * sp[i];
  if (scheme.find_drive(kCoupling)) {
    const auto sc = detuning_sensitivity(scheme, kCoupling);
    const double kc = constants::two_pi / coupling_wavelength(scheme);
    for (std::size_t i = 0; i < n; ++i) {
      m.per_coupling_detuning[i] = 0.5 * sc[i];
      m.per_velocity[i] += kc * 0.5 * sc[i];
    }
  }
  return m;
}

struct VelocityQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

VelocityQuadrature velocity_quadrature(const DopplerSpec& dop) {
  VelocityQuadrature q;
  if (!dop.enabled()) {
    q.nodes = {0.0};
    q.weights = {1.0};
    return q;
  }
  const int n = dop.points;
  const double half = dop.span * dop.u;
  const double h = 2.0 * half / (n - 1);
  const double norm = 1.0 / (std::sqrt(std::numbers::pi) * dop.u);
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    // Mirror the nodes exactly about v = 0.
    const double v = k < n / 2 ? -half + k * h : (k == n / 2 ? 0.0 : half - (n - 1 - k) * h);
    const double end = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    q.nodes[k] = v;
    q.weights[k] = end * h * norm * std::exp(-(v * v) / (dop.u * dop.u));
  }
  return q;
}

struct AveragedCoherence {
  std::complex<double> value;
  bool near_degenerate = false;
};

AveragedCoherence average(const SteadyStateKernel& kernel, const EnergyModel& model, const VelocityQuadrature& q,
                          double delta_c, std::vector<double>& scratch) {
  AveragedCoherence out;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    model.eval(delta_c, q.nodes[k], scratch);
    const auto r = kernel.solve(scratch);
    out.value += q.weights[k] * r.probe_coherence;
    out.near_degenerate = out.near_degenerate || r.near_degenerate;
  }
  return out;
}

double probe_rabi_of(const LevelScheme& scheme) { return scheme.target_rabi(scheme.drive(kProbe), 0); }

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

void validate(const DopplerSpec& spec) {
  if (!(spec.u >= 0.0) || !std::isfinite(spec.u)) throw InvalidInput("Doppler u must be finite and >= 0");
  if (!(spec.span > 0.0) || !std::isfinite(spec.span)) throw InvalidInput("Doppler span must be > 0");
  if (spec.points < 3 || spec.points % 2 == 0) throw InvalidInput("Doppler points must be odd and >= 3");
}

double probe_wavelength(const LevelScheme& scheme) {
  return scheme.coupling(scheme.probe_pair.first, scheme.probe_pair.second).wavelength();
}

double coupling_wavelength(const LevelScheme& scheme) {
  const auto& d = scheme.drive(kCoupling);
  if (d.targets.empty()) throw StructuralError("coupling drive has no targets");
  return scheme.coupling(d.targets.front().from, d.targets.front().to).wavelength();
}

std::complex<double> probe_coherence(const LevelScheme& scheme, const DetuningAssignment& det) {
  const SteadyStateKernel kernel(scheme);
  auto e = cumulative_detunings(scheme, det);
  for (double& x : e) x *= 0.5;
  return kernel.solve(e).probe_coherence;
}

std::complex<double> doppler_average_rho21(const LevelScheme& scheme, const DetuningAssignment& det,
                                           const DopplerSpec& dop) {
  validate(dop);
  const SteadyStateKernel kernel(scheme);
  const EnergyModel model = energy_model(scheme, det);
  std::vector<double> scratch(scheme.size());
  return average(kernel, model, velocity_quadrature(dop), 0.0, scratch).value;
}

std::complex<double> susceptibility(std::complex<double> rho21_d, const LevelScheme& scheme,
                                    const VaporConditions& vapor, double probe_rabi) {
  if (!(probe_rabi > 0.0)) throw InvalidInput("susceptibility needs a probe Rabi frequency > 0");
  const double d = scheme.coupling(scheme.probe_pair.first, scheme.probe_pair.second).dipole_d;
  const double mu = d * constants::e * constants::a0;
  const double n0 = vapor_density(vapor);
  // rho_21 of an absorbing transition has Im < 0 with H = +(hbar/2) Omega
  // off-diagonals; the leading minus maps absorption onto Im(chi) > 0.
  return -(2.0 * n0 / (constants::epsilon0 * constants::hbar)) * mu * mu / probe_rabi * rho21_d;
}

double transmission(std::complex<double> chi, const VaporConditions& vapor, double lambda_p) {
  if (chi.imag() < -1e-12) {
    throw NumericalError("Im(chi) = " + std::to_string(chi.imag()) + " < 0 implies probe gain");
  }
  return std::exp(-constants::two_pi * vapor.cell_length * chi.imag() / lambda_p);
}

std::string y_axis_label(const ScanSpec& scan) {
  switch (scan.y_kind) {
    case ScanAxisKind::rf_detuning_sweep: return "delta_" + lower(scan.y_drive) + "_mhz";
    case ScanAxisKind::rf_power_sweep:
      return "p_" + lower(scan.y_drive) + (scan.scale == PowerScale::log_dbm ? "_dbm" : "_mw");
    case ScanAxisKind::probe_transmission_only: return "row";
  }
  return "y";
}

LevelScheme scheme_for_row(const LevelScheme& scheme, const ScanSpec& scan, double y) {
  switch (scan.y_kind) {
    case ScanAxisKind::rf_detuning_sweep: return with_drive_detuning(scheme, scan.y_drive, y);
    case ScanAxisKind::rf_power_sweep: {
      const double watts = scan.scale == PowerScale::log_dbm ? dbm_to_watts(y) : y * 1e-3;
      return with_drive_rabi(scheme, scan.y_drive, horn_drive_rabi(scheme, scheme.drive(scan.y_drive), watts));
    }
    case ScanAxisKind::probe_transmission_only: return scheme;
  }
  return scheme;
}

SpectrumGrid run_scan(const LevelScheme& scheme, const ScanSpec& scan, const VaporConditions& vapor,
                      const DopplerSpec& dop, const ScanOptions& options) {
  auto y = scan.y_kind == ScanAxisKind::probe_transmission_only ? std::vector<double>{0.0} : scan.y.values();
  return run_scan_rows(scheme, scan, std::move(y), vapor, dop, options);
}

SpectrumGrid run_scan_rows(const LevelScheme& scheme, const ScanSpec& scan, std::vector<double> y_values,
                           const VaporConditions& vapor, const DopplerSpec& dop, const ScanOptions& options) {
  validate(scheme);
  validate(scan, scheme);
  validate(vapor);
  validate(dop);
  for (double y : y_values) {
    if (!std::isfinite(y)) throw InvalidInput("scan values must be finite");
  }

  SpectrumGrid grid;
  grid.x_values = scan.x.values();
  grid.y_values = std::move(y_values);
  grid.y_label = y_axis_label(scan);
  grid.scan = scan;
  grid.quantity = options.quantity;
  grid.scheme_name = scheme.name;
  grid.vapor = vapor;
  grid.doppler = dop;
  grid.values.assign(grid.rows() * grid.cols(), 0.0);

  const VelocityQuadrature q = velocity_quadrature(dop);
  const double lambda_p = probe_wavelength(scheme);
  std::vector<unsigned char> degenerate(grid.values.size(), 0);

  auto compute_row = [&](std::size_t row) {
    LevelScheme s = scheme_for_row(scheme, scan, grid.y_values[row]);
    DetuningAssignment det = DetuningAssignment::defaults(s);
    det.set(s, kCoupling, 0.0);
    const SteadyStateKernel kernel(s);
    const EnergyModel model = energy_model(s, det);
    const double omega_p = probe_rabi_of(s);
    std::vector<double> scratch(s.size());
    for (std::size_t col = 0; col < grid.cols(); ++col) {
      const auto avg = average(kernel, model, q, grid.x_values[col], scratch);
      const auto chi = susceptibility(avg.value, s, vapor, omega_p);
      const std::size_t slot = row * grid.cols() + col;
      grid.values[slot] = options.quantity == GridQuantity::im_chi ? chi.imag() : transmission(chi, vapor, lambda_p);
      degenerate[slot] = avg.near_degenerate ? 1 : 0;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(grid.rows())));
  if (workers == 1) {
    for (std::size_t r = 0; r < grid.rows(); ++r) compute_row(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (std::size_t r = next++; r < grid.rows(); r = next++) {
        try {
          compute_row(r);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = grid.rows();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  grid.near_degenerate_cells = static_cast<std::size_t>(std::count(degenerate.begin(), degenerate.end(), 1));
  return grid;
}

}  // namespace rydeit
