// Copyright 2026 The paraqst Authors
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

#include "paraqst/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "paraqst/coupling.hpp"
#include "paraqst/units.hpp"

namespace paraqst::model {

namespace {

bool finite(double v) { return std::isfinite(v); }

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::string qubit_label(int index) {
  return index < 0 ? std::string("qubit") : "qubit " + std::to_string(index);
}

}  // namespace

// ---------------------------------------------------------------------------
// QubitParams / ChainConfig

void QubitParams::validate(int index) const {
  const std::string who = qubit_label(index);
  auto fail = [&](const std::string& msg) { throw ValidationError(who + ": " + msg); };
  if (!finite(sweet_spot_freq) || sweet_spot_freq <= 0.0)
    fail("sweet_spot_freq must be positive (GHz)");
  if (!finite(operating_freq) || operating_freq <= 0.0)
    fail("operating_freq must be positive (GHz)");
  if (operating_freq > sweet_spot_freq * (1.0 + 1e-12))
    fail("operating_freq exceeds sweet_spot_freq; flux bias only tunes down");
  if (!finite(t1) || t1 <= 0.0) fail("t1 must be positive (us)");
  if (!finite(t2_star) || t2_star <= 0.0) fail("t2_star must be positive (us)");
  if (t2_star > 2.0 * t1 * (1.0 + 1e-12)) fail("t2_star must not exceed 2 * t1");
  for (auto [name, fid] : {std::pair{"readout_fid_g", readout_fid_g},
                           std::pair{"readout_fid_e", readout_fid_e}}) {
    if (!finite(fid) || fid <= 0.5 || fid > 1.0)
      fail(std::string(name) + " must lie in (0.5, 1]");
  }
  if (!finite(thermal_pop) || thermal_pop < 0.0 || thermal_pop > 0.5)
    fail("thermal_pop must lie in [0, 0.5]");
}

double ChainConfig::detuning_mhz(int link) const {
  if (link < 1 || link > links())
    throw ValidationError("link index " + std::to_string(link) + " out of range [1, " +
                          std::to_string(links()) + "]");
  return (qubits[link].operating_freq - qubits[link - 1].operating_freq) * 1e3;
}

void ChainConfig::validate() const {
  if (size() < 2) throw ValidationError("chain needs at least two qubits");
  if (links() != size() - 1)
    throw ValidationError("chain with " + std::to_string(size()) + " qubits needs " +
                          std::to_string(size() - 1) + " static couplings, got " +
                          std::to_string(links()));
  for (int q = 0; q < size(); ++q) qubits[q].validate(q);
  for (int j = 0; j < links(); ++j) {
    if (!finite(static_couplings[j]) || static_couplings[j] <= 0.0)
      throw ValidationError("static coupling g_" + std::to_string(j + 1) +
                            " must be positive (MHz)");
  }
}

void ChainConfig::require_alternating_detunings() const {
  validate();
  for (int j = 1; j <= links(); ++j) {
    const double d = detuning_mhz(j);
    if (d == 0.0)
      throw ValidationError("link " + std::to_string(j) +
                            ": zero static detuning; sideband selection needs detuned neighbours");
    if (j > 1 && d * detuning_mhz(j - 1) > 0.0)
      throw ValidationError("links " + std::to_string(j - 1) + " and " + std::to_string(j) +
                            ": static detunings must alternate in sign along the chain");
  }
}

// ---------------------------------------------------------------------------
// ModulationSpec / TransferSchedule / ModulationProgram

void ModulationSpec::validate(int index) const {
  const std::string who = index < 0 ? std::string("modulation") : "modulation of qubit " +
                                                                      std::to_string(index);
  if (!finite(amplitude) || amplitude < 0.0)
    throw ValidationError(who + ": amplitude must be >= 0 (MHz)");
  if (!finite(frequency) || frequency <= 0.0)
    throw ValidationError(who + ": frequency must be > 0 (MHz)");
  if (!finite(phase)) throw ValidationError(who + ": phase must be finite (rad)");
}

void TransferSchedule::validate(const ChainConfig& chain) const {
  chain.validate();
  const int n_links = chain.links();
  if (links() != n_links)
    throw ValidationError("schedule has " + std::to_string(links()) + " modulations, chain has " +
                          std::to_string(n_links) + " links");
  if (static_cast<int>(effective_couplings.size()) != n_links)
    throw ValidationError("schedule caches " + std::to_string(effective_couplings.size()) +
                          " effective couplings, expected " + std::to_string(n_links));
  if (!finite(duration) || duration <= 0.0)
    throw ValidationError("schedule duration must be positive (ns)");
  for (int j = 1; j <= n_links; ++j) modulations[j - 1].validate(j);
  for (int j = 1; j <= n_links; ++j) {
    const Complex fresh = coupling::effective_coupling(chain, modulations, j);
    const double scale = std::max(std::abs(fresh), std::abs(effective_couplings[j - 1]));
    if (std::abs(fresh - effective_couplings[j - 1]) > 1e-12 * std::max(1.0, scale)) {
      std::ostringstream msg;
      msg << "cached effective coupling of link " << j << " is stale: cached ("
          << effective_couplings[j - 1].real() << ", " << effective_couplings[j - 1].imag()
          << "), recomputed (" << fresh.real() << ", " << fresh.imag() << ") MHz";
      throw ValidationError(msg.str());
    }
  }
}

bool TransferSchedule::mirror_symmetric(double rel_tol) const {
  const int n = links();
  for (int j = 1; j <= n; ++j) {
    const double a = std::abs(effective_couplings[j - 1]);
    const double b = std::abs(effective_couplings[n - j]);
    if (std::abs(a - b) > rel_tol * std::max({1e-12, a, b})) return false;
  }
  return true;
}

ModulationProgram ModulationProgram::from_schedule(const TransferSchedule& schedule,
                                                   int num_qubits) {
  if (schedule.links() != num_qubits - 1)
    throw ValidationError("schedule links do not match qubit count");
  ModulationProgram p;
  p.per_qubit.resize(num_qubits);
  p.per_qubit[0] = ModulationSpec{};  // parked
  for (int q = 1; q < num_qubits; ++q) p.per_qubit[q] = schedule.modulations[q - 1];
  return p;
}

ModulationProgram ModulationProgram::none(int num_qubits) {
  ModulationProgram p;
  p.per_qubit.assign(num_qubits, ModulationSpec{});
  return p;
}

void ModulationProgram::validate(const ChainConfig& chain) const {
  if (size() != chain.size())
    throw ValidationError("modulation program covers " + std::to_string(size()) +
                          " qubits, chain has " + std::to_string(chain.size()));
  for (int q = 0; q < size(); ++q) per_qubit[q].validate(q);
}

// ---------------------------------------------------------------------------
// QuantumState

int sector_index(int qubit) { return qubit + 1; }
int full_index_of_excitation(int qubit) { return 1 << qubit; }

namespace {

int expected_dim(StateSpace space, int num_qubits) {
  return space == StateSpace::Full ? (1 << num_qubits) : num_qubits + 1;
}

void check_qubit_count(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 20)
    throw ValidationError("qubit count " + std::to_string(num_qubits) + " out of range [1, 20]");
}

}  // namespace

QuantumState QuantumState::pure(StateSpace space, int num_qubits, Eigen::VectorXcd amplitudes) {
  check_qubit_count(num_qubits);
  QuantumState s;
  s.space_ = space;
  s.num_qubits_ = num_qubits;
  s.pure_ = true;
  s.amps_ = std::move(amplitudes);
  s.validate();
  return s;
}

QuantumState QuantumState::mixed(StateSpace space, int num_qubits, Eigen::MatrixXcd density) {
  check_qubit_count(num_qubits);
  QuantumState s;
  s.space_ = space;
  s.num_qubits_ = num_qubits;
  s.pure_ = false;
  s.rho_ = std::move(density);
  s.validate();
  return s;
}

QuantumState QuantumState::unchecked_pure(StateSpace space, int num_qubits,
                                          Eigen::VectorXcd amps) {
  check_qubit_count(num_qubits);
  QuantumState s;
  s.space_ = space;
  s.num_qubits_ = num_qubits;
  s.pure_ = true;
  s.amps_ = std::move(amps);
  if (s.amps_.size() != s.dim()) throw ValidationError("state vector dimension mismatch");
  return s;
}

QuantumState QuantumState::unchecked_mixed(StateSpace space, int num_qubits,
                                           Eigen::MatrixXcd rho) {
  check_qubit_count(num_qubits);
  QuantumState s;
  s.space_ = space;
  s.num_qubits_ = num_qubits;
  s.pure_ = false;
  s.rho_ = std::move(rho);
  if (s.rho_.rows() != s.dim() || s.rho_.cols() != s.dim())
    throw ValidationError("density matrix dimension mismatch");
  return s;
}

QuantumState QuantumState::all_ground(StateSpace space, int num_qubits) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(expected_dim(space, num_qubits));
  a(0) = 1.0;
  return pure(space, num_qubits, std::move(a));
}

QuantumState QuantumState::single_excitation(StateSpace space, int num_qubits, int qubit) {
  if (qubit < 0 || qubit >= num_qubits)
    throw ValidationError("excited qubit index out of range");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(expected_dim(space, num_qubits));
  a(space == StateSpace::Full ? full_index_of_excitation(qubit) : sector_index(qubit)) = 1.0;
  return pure(space, num_qubits, std::move(a));
}

QuantumState QuantumState::qubit_superposition(StateSpace space, int num_qubits, int qubit,
                                               Complex amp_g, Complex amp_e) {
  if (qubit < 0 || qubit >= num_qubits)
    throw ValidationError("excited qubit index out of range");
  const double norm = std::sqrt(std::norm(amp_g) + std::norm(amp_e));
  if (norm < 1e-12) throw ValidationError("superposition amplitudes are both ~0");
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(expected_dim(space, num_qubits));
  a(0) = amp_g / norm;
  a(space == StateSpace::Full ? full_index_of_excitation(qubit) : sector_index(qubit)) =
      amp_e / norm;
  return pure(space, num_qubits, std::move(a));
}

int QuantumState::dim() const { return expected_dim(space_, num_qubits_); }

const Eigen::VectorXcd& QuantumState::amplitudes() const {
  if (!pure_) throw ValidationError("amplitudes() called on a mixed state");
  return amps_;
}

const Eigen::MatrixXcd& QuantumState::density() const {
  if (pure_) throw ValidationError("density() called on a pure state; use to_density()");
  return rho_;
}

Eigen::MatrixXcd QuantumState::to_density() const {
  if (pure_) return amps_ * amps_.adjoint();
  return rho_;
}

QuantumState QuantumState::to_full_space() const {
  if (space_ == StateSpace::Full) return *this;
  const int full_dim = 1 << num_qubits_;
  // Sector slot -> full-space index.
  std::vector<int> map(dim());
  map[0] = 0;
  for (int q = 0; q < num_qubits_; ++q) map[sector_index(q)] = full_index_of_excitation(q);
  if (pure_) {
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(full_dim);
    for (int s = 0; s < dim(); ++s) a(map[s]) = amps_(s);
    return pure(StateSpace::Full, num_qubits_, std::move(a));
  }
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(full_dim, full_dim);
  for (int s = 0; s < dim(); ++s)
    for (int t = 0; t < dim(); ++t) r(map[s], map[t]) = rho_(s, t);
  return mixed(StateSpace::Full, num_qubits_, std::move(r));
}

double QuantumState::excited_population(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) throw ValidationError("qubit index out of range");
  if (space_ == StateSpace::Sector) {
    const int s = sector_index(qubit);
    return pure_ ? std::norm(amps_(s)) : rho_(s, s).real();
  }
  const int bit = 1 << qubit;
  double p = 0.0;
  if (pure_) {
    for (int i = 0; i < dim(); ++i)
      if (i & bit) p += std::norm(amps_(i));
  } else {
    for (int i = 0; i < dim(); ++i)
      if (i & bit) p += rho_(i, i).real();
  }
  return p;
}

Eigen::VectorXd QuantumState::populations() const {
  Eigen::VectorXd p(num_qubits_);
  for (int q = 0; q < num_qubits_; ++q) p(q) = excited_population(q);
  return p;
}

Eigen::Matrix2cd QuantumState::reduced_qubit(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) throw ValidationError("qubit index out of range");
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  if (space_ == StateSpace::Sector) {
    const int s = sector_index(qubit);
    if (pure_) {
      const Complex beta = amps_(s);
      r(1, 1) = std::norm(beta);
      r(0, 0) = 1.0 - r(1, 1).real();
      r(0, 1) = amps_(0) * std::conj(beta);
      // Coherences between distinct single-excitation states trace out.
    } else {
      r(1, 1) = rho_(s, s);
      r(0, 0) = 1.0 - r(1, 1).real();
      r(0, 1) = rho_(0, s);
    }
    r(1, 0) = std::conj(r(0, 1));
    return r;
  }
  const int bit = 1 << qubit;
  if (pure_) {
    for (int i = 0; i < dim(); ++i) {
      if (i & bit) continue;
      const int j = i | bit;
      r(0, 0) += std::norm(amps_(i));
      r(1, 1) += std::norm(amps_(j));
      r(0, 1) += amps_(i) * std::conj(amps_(j));
    }
  } else {
    for (int i = 0; i < dim(); ++i) {
      if (i & bit) continue;
      const int j = i | bit;
      r(0, 0) += rho_(i, i);
      r(1, 1) += rho_(j, j);
      r(0, 1) += rho_(i, j);
    }
  }
  r(1, 0) = std::conj(r(0, 1));
  return r;
}

double QuantumState::norm_or_trace() const {
  return pure_ ? amps_.norm() : rho_.trace().real();
}

void QuantumState::validate() const {
  const int d = dim();
  if (pure_) {
    if (amps_.size() != d)
      throw ValidationError("state vector has dimension " + std::to_string(amps_.size()) +
                            ", expected " + std::to_string(d));
    if (!amps_.allFinite()) throw ValidationError("state vector has non-finite amplitudes");
    if (std::abs(amps_.norm() - 1.0) > 1e-9)
      throw ValidationError("pure state norm deviates from 1 by more than 1e-9");
    return;
  }
  if (rho_.rows() != d || rho_.cols() != d)
    throw ValidationError("density matrix has shape " + std::to_string(rho_.rows()) + "x" +
                          std::to_string(rho_.cols()) + ", expected " + std::to_string(d));
  if (!rho_.allFinite()) throw ValidationError("density matrix has non-finite entries");
  const double scale = std::max(1.0, max_abs(rho_));
  if (hermiticity_defect(rho_) > 1e-12 * scale)
    throw ValidationError("density matrix is not Hermitian (tolerance 1e-12)");
  if (std::abs(rho_.trace().real() - 1.0) > 1e-9 || std::abs(rho_.trace().imag()) > 1e-9)
    throw ValidationError("density matrix trace deviates from 1 by more than 1e-9");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw ValidationError("density matrix has an eigenvalue below -1e-9");
}

// ---------------------------------------------------------------------------
// HamiltonianFn

Eigen::MatrixXcd HamiltonianFn::operator()(double t_ns) const {
  Eigen::MatrixXcd h;
  evaluate(t_ns, h);
  return h;
}

ConstantHamiltonian::ConstantHamiltonian(Eigen::MatrixXcd h) : h_(std::move(h)) {
  if (h_.rows() != h_.cols()) throw ValidationError("Hamiltonian must be square");
  const double scale = std::max(1.0, max_abs(h_));
  if (hermiticity_defect(h_) > 1e-12 * scale)
    throw ValidationError("Hamiltonian is not Hermitian (tolerance 1e-12)");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_, Eigen::EigenvaluesOnly);
  norm_ = es.eigenvalues().cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// LabHamiltonian

LabHamiltonian::LabHamiltonian(ChainConfig chain, ModulationProgram program, Frame frame,
                               bool counter_rotating, StateSpace space)
    : chain_(std::move(chain)),
      program_(std::move(program)),
      frame_(frame),
      counter_rotating_(counter_rotating),
      space_(space) {
  chain_.validate();
  program_.validate(chain_);
  if (space_ == StateSpace::Sector && counter_rotating_)
    throw ValidationError(
        "sector-restricted evolution requires counter_rotating = false: "
        "counter-rotating terms leave the single-excitation sector");
  precompute();
}

void LabHamiltonian::precompute() {
  const int n = chain_.size();
  dim_ = space_ == StateSpace::Full ? (1 << n) : n + 1;

  omega_op_.resize(n);
  eps_.resize(n);
  nu_.resize(n);
  phi_.resize(n);
  for (int q = 0; q < n; ++q) {
    omega_op_[q] = units::rad_per_ns_from_ghz(chain_.qubits[q].operating_freq);
    eps_[q] = units::rad_per_ns_from_mhz(program_.per_qubit[q].amplitude);
    nu_[q] = units::rad_per_ns_from_mhz(program_.per_qubit[q].frequency);
    phi_[q] = program_.per_qubit[q].phase;
  }

  g_rad_.resize(chain_.links());
  for (int j = 1; j <= chain_.links(); ++j)
    g_rad_[j - 1] = units::rad_per_ns_from_mhz(chain_.static_couplings[j - 1]);

  xy_entries_.clear();
  cr_entries_.clear();
  xy_link_of_entry_.clear();
  cr_link_of_entry_.clear();
  if (space_ == StateSpace::Sector) {
    for (int j = 1; j <= chain_.links(); ++j) {
      // <e_{j-1}| H |e_j>: row = slot of qubit j-1, col = slot of qubit j.
      xy_entries_.emplace_back(sector_index(j - 1), sector_index(j));
      xy_link_of_entry_.push_back(j - 1);
    }
  } else {
    for (int j = 1; j <= chain_.links(); ++j) {
      const int lo = 1 << (j - 1), hi = 1 << j;
      for (int i = 0; i < dim_; ++i) {
        if ((i & lo) && !(i & hi)) {
          xy_entries_.emplace_back(i, (i & ~lo) | hi);
          xy_link_of_entry_.push_back(j - 1);
        }
        if (counter_rotating_ && (i & lo) && (i & hi)) {
          cr_entries_.emplace_back(i, i & ~(lo | hi));
          cr_link_of_entry_.push_back(j - 1);
        }
      }
    }
  }

  double diag_bound = 0.0;
  for (int q = 0; q < n; ++q)
    diag_bound += (frame_ == Frame::LabAbsolute ? omega_op_[q] + eps_[q] : eps_[q]);
  double coupling_bound = 0.0;
  for (double g : g_rad_) coupling_bound += 2.0 * g;
  norm_bound_ = diag_bound + coupling_bound;

  max_phase_rate_ = 0.0;
  if (frame_ == Frame::RotatingOperating) {
    for (int q = 0; q < n; ++q)
      if (eps_[q] > 0.0) max_phase_rate_ = std::max(max_phase_rate_, nu_[q]);
    for (int j = 1; j <= chain_.links(); ++j) {
      const double delta = std::abs(omega_op_[j] - omega_op_[j - 1]);
      max_phase_rate_ = std::max(max_phase_rate_, delta);
      if (counter_rotating_)
        max_phase_rate_ = std::max(max_phase_rate_, omega_op_[j] + omega_op_[j - 1]);
    }
  }
}

void LabHamiltonian::evaluate(double t_ns, Eigen::MatrixXcd& out) const {
  const int n = chain_.size();
  out.resize(dim_, dim_);
  out.setZero();

  // Per-qubit instantaneous diagonal contribution (rad/ns).
  double dw[32];
  for (int q = 0; q < n; ++q) {
    const double mod = eps_[q] > 0.0 ? eps_[q] * std::sin(nu_[q] * t_ns + phi_[q]) : 0.0;
    dw[q] = (frame_ == Frame::LabAbsolute ? omega_op_[q] : 0.0) + mod;
  }
  if (space_ == StateSpace::Sector) {
    for (int q = 0; q < n; ++q) out(sector_index(q), sector_index(q)) = dw[q];
  } else {
    for (int i = 0; i < dim_; ++i) {
      double d = 0.0;
      for (int q = 0; q < n; ++q)
        if (i & (1 << q)) d += dw[q];
      out(i, i) = d;
    }
  }

  // Per-link coupling phases.
  Complex xy_phase[32], cr_phase[32];
  for (int j = 1; j <= chain_.links(); ++j) {
    if (frame_ == Frame::LabAbsolute) {
      xy_phase[j - 1] = g_rad_[j - 1];
      cr_phase[j - 1] = g_rad_[j - 1];
      continue;
    }
    const double delta = omega_op_[j] - omega_op_[j - 1];
    xy_phase[j - 1] = g_rad_[j - 1] * std::polar(1.0, -delta * t_ns);
    if (counter_rotating_)
      cr_phase[j - 1] = g_rad_[j - 1] * std::polar(1.0, (omega_op_[j] + omega_op_[j - 1]) * t_ns);
  }

  for (std::size_t k = 0; k < xy_entries_.size(); ++k) {
    const auto [r, c] = xy_entries_[k];
    const Complex v = xy_phase[xy_link_of_entry_[k]];
    out(r, c) += v;
    out(c, r) += std::conj(v);
  }
  for (std::size_t k = 0; k < cr_entries_.size(); ++k) {
    const auto [r, c] = cr_entries_[k];
    const Complex v = cr_phase[cr_link_of_entry_[k]];
    out(r, c) += v;
    out(c, r) += std::conj(v);
  }
}

// ---------------------------------------------------------------------------
// Builders

Eigen::MatrixXcd build_lab_hamiltonian(const ChainConfig& chain, const TransferSchedule& schedule,
                                       double t_ns, Frame frame, bool counter_rotating) {
  schedule.validate(chain);
  const LabHamiltonian h(chain, ModulationProgram::from_schedule(schedule, chain.size()), frame,
                         counter_rotating, StateSpace::Full);
  Eigen::MatrixXcd m = h(t_ns);
  const double scale = std::max(1.0, max_abs(m));
  if (hermiticity_defect(m) > 1e-14 * scale)
    throw NumericalError("lab Hamiltonian failed its Hermiticity self-check");
  return m;
}

namespace {

// Validates + collects the per-link g' in rad/ns, enforcing the resonance
// precondition on every modulated link.
std::vector<Complex> effective_links_rad(const ChainConfig& chain,
                                         const TransferSchedule& schedule,
                                         double resonance_tol_mhz) {
  schedule.validate(chain);
  std::vector<int> violations;
  for (int j = 1; j <= chain.links(); ++j) {
    const ModulationSpec& m = schedule.modulations[j - 1];
    if (m.amplitude == 0.0) continue;  // contributes nothing; no resonance needed
    if (std::abs(m.frequency - std::abs(chain.detuning_mhz(j))) > resonance_tol_mhz)
      violations.push_back(j);
  }
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "effective model requires nu_j = |Delta_j| within " << resonance_tol_mhz
        << " MHz; violated by link(s)";
    for (int j : violations)
      msg << " " << j << " (nu = " << schedule.modulations[j - 1].frequency
          << " MHz, |Delta| = " << std::abs(chain.detuning_mhz(j)) << " MHz)";
    throw ValidationError(msg.str());
  }
  std::vector<Complex> g(chain.links());
  for (int j = 1; j <= chain.links(); ++j)
    g[j - 1] = units::rad_per_ns_from_mhz(1.0) * schedule.effective_couplings[j - 1];
  return g;
}

}  // namespace

Eigen::MatrixXcd build_effective_hamiltonian(const ChainConfig& chain,
                                             const TransferSchedule& schedule,
                                             double resonance_tol_mhz) {
  const auto g = effective_links_rad(chain, schedule, resonance_tol_mhz);
  const int n = chain.size();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int j = 1; j <= chain.links(); ++j) {
    h(sector_index(j - 1), sector_index(j)) = g[j - 1];
    h(sector_index(j), sector_index(j - 1)) = std::conj(g[j - 1]);
  }
  return h;
}

Eigen::MatrixXcd build_effective_hamiltonian_full(const ChainConfig& chain,
                                                  const TransferSchedule& schedule,
                                                  double resonance_tol_mhz) {
  const auto g = effective_links_rad(chain, schedule, resonance_tol_mhz);
  const int n = chain.size();
  const int d = 1 << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 1; j <= chain.links(); ++j) {
    const int lo = 1 << (j - 1), hi = 1 << j;
    for (int i = 0; i < d; ++i) {
      if ((i & lo) && !(i & hi)) {
        const int k = (i & ~lo) | hi;
        h(i, k) += g[j - 1];
        h(k, i) += std::conj(g[j - 1]);
      }
    }
  }
  return h;
}

Eigen::MatrixXcd project_to_sector(const Eigen::MatrixXcd& full_operator, int num_qubits) {
  const int d = 1 << num_qubits;
  if (full_operator.rows() != d || full_operator.cols() != d)
    throw ValidationError("operator dimension does not match 2^num_qubits");
  std::vector<int> map(num_qubits + 1);
  map[0] = 0;
  for (int q = 0; q < num_qubits; ++q) map[sector_index(q)] = full_index_of_excitation(q);
  const double scale = std::max(1e-300, max_abs(full_operator));
  for (int s = 0; s < num_qubits + 1; ++s) {
    for (int r = 0; r < d; ++r) {
      if (std::find(map.begin(), map.end(), r) != map.end()) continue;
      if (std::abs(full_operator(r, map[s])) > 1e-12 * scale)
        throw ValidationError(
            "operator couples the single-excitation sector to its complement; "
            "sector restriction would not commute with evolution");
    }
  }
  Eigen::MatrixXcd h(num_qubits + 1, num_qubits + 1);
  for (int s = 0; s < num_qubits + 1; ++s)
    for (int t = 0; t < num_qubits + 1; ++t) h(s, t) = full_operator(map[s], map[t]);
  return h;
}

}  // namespace paraqst::model
