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

#include "paraqst/dynamics.hpp"

#include <cmath>

#include "paraqst/report.hpp"
#include "paraqst/units.hpp"

namespace paraqst::dynamics {

using model::Complex;
using model::QuantumState;
using model::StateSpace;

// ---------------------------------------------------------------------------
// Noise channels

std::vector<NoiseChannel> noise_from_chain(const model::ChainConfig& chain,
                                           std::optional<double> t2_star_override,
                                           bool include_thermal) {
  chain.validate();
  std::vector<NoiseChannel> channels(chain.size());
  for (int q = 0; q < chain.size(); ++q) {
    const auto& p = chain.qubits[q];
    const double t2s = t2_star_override.value_or(p.t2_star);
    if (!(t2s > 0.0)) throw ValidationError("t2_star override must be positive");
    if (t2s > 2.0 * p.t1 * (1.0 + 1e-12))
      throw ValidationError("qubit " + std::to_string(q) +
                            ": t2_star exceeds 2 * t1; no physical dephasing channel exists");
    NoiseChannel c;
    c.t1_us = p.t1;
    // 1/T2* = 1/(2 T1) + 1/Tphi.
    const double phi_rate = 1.0 / t2s - 0.5 / p.t1;
    c.t_phi_us = phi_rate > 1e-12 ? 1.0 / phi_rate : std::numeric_limits<double>::infinity();
    c.thermal_pop = include_thermal ? p.thermal_pop : 0.0;
    channels[q] = c;
  }
  return channels;
}

// ---------------------------------------------------------------------------
// Step control

double StepControl::step_for(const model::HamiltonianFn& h) const {
  double dt = max_dt_ns;
  if (h.norm_bound() > 0.0) dt = std::min(dt, norm_factor / h.norm_bound());
  if (h.max_phase_rate() > 0.0) dt = std::min(dt, phase_factor / h.max_phase_rate());
  return std::max(dt, min_dt_ns);
}

StepControl coarse_step_control() {
  StepControl s;
  s.phase_factor = 0.05;
  return s;
}

// ---------------------------------------------------------------------------
// Trajectory

int Trajectory::num_qubits() const { return static_cast<int>(populations.cols()); }

int Trajectory::peak_index(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits()) throw ValidationError("qubit index out of range");
  int best = 0;
  for (int i = 1; i < populations.rows(); ++i)
    if (populations(i, qubit) > populations(best, qubit)) best = i;
  return best;
}

double Trajectory::max_norm_drift() const {
  double d = 0.0;
  for (double v : norm_or_trace) d = std::max(d, std::abs(v - 1.0));
  return d;
}

void Trajectory::write_csv(const std::filesystem::path& path) const {
  std::vector<std::string> header{"time_ns"};
  for (int q = 0; q < num_qubits(); ++q) header.push_back("p_e_q" + std::to_string(q));
  header.push_back("norm_or_trace");
  std::vector<std::vector<double>> rows;
  rows.reserve(times_ns.size());
  for (std::size_t i = 0; i < times_ns.size(); ++i) {
    std::vector<double> row{times_ns[i]};
    for (int q = 0; q < num_qubits(); ++q) row.push_back(populations(i, q));
    row.push_back(norm_or_trace[i]);
    rows.push_back(std::move(row));
  }
  report::write_csv(path, header, rows);
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

void check_time_grid(std::span<const double> times) {
  if (times.empty()) throw ValidationError("time grid must not be empty");
  if (std::abs(times[0]) > 1e-12) throw ValidationError("time grid must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("time grid must be strictly increasing");
}

void record(Trajectory& out, std::size_t slot, double t, QuantumState state) {
  out.times_ns[slot] = t;
  const Eigen::VectorXd p = state.populations();
  for (int q = 0; q < p.size(); ++q) out.populations(slot, q) = p(q);
  out.norm_or_trace[slot] = state.norm_or_trace();
  out.states[slot] = std::move(state);
}

Trajectory make_empty(std::size_t n_times, int n_qubits) {
  Trajectory out;
  out.times_ns.resize(n_times);
  out.states.resize(n_times);
  out.populations.resize(n_times, n_qubits);
  out.norm_or_trace.resize(n_times);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Unitary evolution

Trajectory evolve_unitary(const model::HamiltonianFn& h, const QuantumState& initial,
                          std::span<const double> times_ns, const StepControl& step) {
  check_time_grid(times_ns);
  initial.validate();
  if (!initial.is_pure())
    throw ValidationError("evolve_unitary expects a pure state; use evolve_lindblad for mixed");
  if (h.dim() != initial.dim())
    throw ValidationError("Hamiltonian dimension does not match the state");

  const double dt = step.step_for(h);
  const Complex mi(0.0, -1.0);
  Eigen::VectorXcd psi = initial.amplitudes();
  Eigen::MatrixXcd hm(h.dim(), h.dim());
  Eigen::VectorXcd k1(h.dim()), k2(h.dim()), k3(h.dim()), k4(h.dim()), tmp(h.dim());

  Trajectory out = make_empty(times_ns.size(), initial.num_qubits());
  record(out, 0, times_ns[0],
         QuantumState::unchecked_pure(initial.space(), initial.num_qubits(), psi));

  double t = times_ns[0];
  for (std::size_t seg = 1; seg < times_ns.size(); ++seg) {
    const double span = times_ns[seg] - t;
    const long long n_sub = std::max(1LL, static_cast<long long>(std::ceil(span / dt)));
    const double hstep = span / static_cast<double>(n_sub);
    for (long long s = 0; s < n_sub; ++s) {
      const double ts = t + hstep * static_cast<double>(s);
      h.evaluate(ts, hm);
      k1.noalias() = mi * (hm * psi);
      tmp.noalias() = psi + 0.5 * hstep * k1;
      h.evaluate(ts + 0.5 * hstep, hm);
      k2.noalias() = mi * (hm * tmp);
      tmp.noalias() = psi + 0.5 * hstep * k2;
      k3.noalias() = mi * (hm * tmp);
      tmp.noalias() = psi + hstep * k3;
      h.evaluate(ts + hstep, hm);
      k4.noalias() = mi * (hm * tmp);
      psi.noalias() += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = times_ns[seg];
    record(out, seg, t,
           QuantumState::unchecked_pure(initial.space(), initial.num_qubits(), psi));
    if (std::abs(psi.norm() - 1.0) > 1e-6)
      throw NumericalError("unitary integration lost more than 1e-6 of norm; step too coarse");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact evolution under a constant Hamiltonian

QuantumState evolve_exact(const Eigen::MatrixXcd& h_rad_ns, const QuantumState& initial,
                          double t_ns) {
  initial.validate();
  if (h_rad_ns.rows() != h_rad_ns.cols() || h_rad_ns.rows() != initial.dim())
    throw ValidationError("Hamiltonian dimension does not match the state");
  const double scale = std::max(1.0, h_rad_ns.cwiseAbs().maxCoeff());
  if ((h_rad_ns - h_rad_ns.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ValidationError("evolve_exact: Hamiltonian is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_rad_ns);
  if (es.info() != Eigen::Success)
    throw NumericalError("evolve_exact: eigendecomposition failed");
  const Eigen::VectorXcd phases =
      (Complex(0.0, -1.0) * t_ns * es.eigenvalues().cast<Complex>()).array().exp();
  const Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() *
                             es.eigenvectors().adjoint();
  if (initial.is_pure())
    return QuantumState::unchecked_pure(initial.space(), initial.num_qubits(),
                                        u * initial.amplitudes());
  return QuantumState::unchecked_mixed(initial.space(), initial.num_qubits(),
                                       u * initial.density() * u.adjoint());
}

// ---------------------------------------------------------------------------
// Lindblad evolution

namespace {

struct QubitRates {
  int bit = 0;
  double down = 0.0;  // relaxation, 1/ns
  double up = 0.0;    // thermal excitation, 1/ns
  double phi = 0.0;   // sigma_z dissipator rate, 1/ns
};

std::vector<QubitRates> rates_from_channels(const std::vector<NoiseChannel>& noise) {
  std::vector<QubitRates> rates(noise.size());
  for (std::size_t q = 0; q < noise.size(); ++q) {
    const auto& c = noise[q];
    QubitRates r;
    r.bit = 1 << q;
    if (std::isfinite(c.t1_us)) {
      if (!(c.t1_us > 0.0)) throw ValidationError("noise channel t1 must be positive");
      const double t1_ns = units::ns_from_us(c.t1_us);
      r.down = 1.0 / t1_ns;
      if (c.thermal_pop > 0.0) {
        if (c.thermal_pop >= 1.0) throw ValidationError("thermal_pop must be < 1");
        r.up = c.thermal_pop / (1.0 - c.thermal_pop) / t1_ns;
      }
    }
    if (std::isfinite(c.t_phi_us)) {
      if (!(c.t_phi_us > 0.0)) throw ValidationError("noise channel t_phi must be positive");
      // D[sqrt(gamma) sigma_z] decays coherences at 2 gamma = 1/T_phi.
      r.phi = 0.5 / units::ns_from_us(c.t_phi_us);
    }
    rates[q] = r;
  }
  return rates;
}

// Adds the dissipators for one qubit to drho, using bit-index maps instead
// of operator matrices.
void add_dissipators(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& drho, const QubitRates& r) {
  const int d = static_cast<int>(rho.rows());
  const int bit = r.bit;
  for (int i = 0; i < d; ++i) {
    const bool ei = i & bit;
    for (int j = 0; j < d; ++j) {
      const bool ej = j & bit;
      Complex acc(0.0, 0.0);
      if (r.down > 0.0) {
        // sigma- rho sigma+ : populates the (g, g) block from (e, e).
        if (!ei && !ej) acc += r.down * rho(i | bit, j | bit);
        acc -= r.down * 0.5 * (static_cast<double>(ei) + static_cast<double>(ej)) * rho(i, j);
      }
      if (r.up > 0.0) {
        if (ei && ej) acc += r.up * rho(i & ~bit, j & ~bit);
        acc -= r.up * 0.5 * (static_cast<double>(!ei) + static_cast<double>(!ej)) * rho(i, j);
      }
      if (r.phi > 0.0) {
        const double si = ei ? -1.0 : 1.0;
        const double sj = ej ? -1.0 : 1.0;
        acc += r.phi * (si * sj - 1.0) * rho(i, j);
      }
      drho(i, j) += acc;
    }
  }
}

}  // namespace

Trajectory evolve_lindblad(const model::HamiltonianFn& h, const QuantumState& initial,
                           const std::vector<NoiseChannel>& noise,
                           std::span<const double> times_ns, const StepControl& step) {
  check_time_grid(times_ns);
  initial.validate();
  QuantumState start = initial;
  if (start.space() == StateSpace::Sector && !noise.empty())
    start = start.to_full_space();  // dissipators act in the product space
  if (h.dim() != start.dim())
    throw ValidationError("Hamiltonian dimension does not match the state");
  if (!noise.empty() && static_cast<int>(noise.size()) != start.num_qubits())
    throw ValidationError("need one noise channel per qubit");

  const auto rates = rates_from_channels(noise);
  const int d = h.dim();
  const Complex mi(0.0, -1.0);
  Eigen::MatrixXcd rho = start.to_density();
  Eigen::MatrixXcd hm(d, d), k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);

  auto rhs = [&](double t, const Eigen::MatrixXcd& r, Eigen::MatrixXcd& out, bool fresh_h) {
    if (fresh_h) h.evaluate(t, hm);
    out.noalias() = mi * (hm * r - r * hm);
    for (const auto& qr : rates) add_dissipators(r, out, qr);
  };

  Trajectory out = make_empty(times_ns.size(), start.num_qubits());
  record(out, 0, times_ns[0],
         QuantumState::unchecked_mixed(start.space(), start.num_qubits(), rho));

  const double dt = step.step_for(h);
  double t = times_ns[0];
  for (std::size_t seg = 1; seg < times_ns.size(); ++seg) {
    const double span = times_ns[seg] - t;
    const long long n_sub = std::max(1LL, static_cast<long long>(std::ceil(span / dt)));
    const double hstep = span / static_cast<double>(n_sub);
    for (long long s = 0; s < n_sub; ++s) {
      const double ts = t + hstep * static_cast<double>(s);
      rhs(ts, rho, k1, true);
      tmp = rho + 0.5 * hstep * k1;
      rhs(ts + 0.5 * hstep, tmp, k2, true);
      tmp = rho + 0.5 * hstep * k2;
      rhs(ts + 0.5 * hstep, tmp, k3, false);
      tmp = rho + hstep * k3;
      rhs(ts + hstep, tmp, k4, true);
      rho += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = times_ns[seg];
    record(out, seg, t,
           QuantumState::unchecked_mixed(start.space(), start.num_qubits(), rho));
    if (std::abs(rho.trace().real() - 1.0) > 1e-6)
      throw NumericalError("Lindblad integration lost more than 1e-6 of trace; step too coarse");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Request dispatcher

void EvolutionRequest::validate() const {
  check_time_grid(times_ns);
  initial.validate();
  switch (source) {
    case Source::Lab:
    case Source::Effective:
      chain.validate();
      schedule.validate(chain);
      if (initial.num_qubits() != chain.size())
        throw ValidationError("initial state qubit count does not match the chain");
      break;
    case Source::Explicit:
      if (!explicit_hamiltonian)
        throw ValidationError("explicit evolution requested without a Hamiltonian");
      break;
  }
  if (noise && static_cast<int>(noise->size()) != initial.num_qubits())
    throw ValidationError("need one noise channel per qubit");
}

Trajectory evolve(const EvolutionRequest& request) {
  request.validate();
  const bool open_system = request.noise.has_value() || !request.initial.is_pure();

  QuantumState initial = request.initial;
  if (open_system && initial.space() == StateSpace::Sector)
    initial = initial.to_full_space();

  std::shared_ptr<const model::HamiltonianFn> h;
  switch (request.source) {
    case EvolutionRequest::Source::Lab:
      h = std::make_shared<model::LabHamiltonian>(
          request.chain,
          model::ModulationProgram::from_schedule(request.schedule, request.chain.size()),
          request.frame, request.counter_rotating, initial.space());
      break;
    case EvolutionRequest::Source::Effective: {
      const Eigen::MatrixXcd m =
          initial.space() == StateSpace::Sector
              ? model::build_effective_hamiltonian(request.chain, request.schedule)
              : model::build_effective_hamiltonian_full(request.chain, request.schedule);
      h = std::make_shared<model::ConstantHamiltonian>(m);
      break;
    }
    case EvolutionRequest::Source::Explicit:
      h = request.explicit_hamiltonian;
      break;
  }

  if (open_system)
    return evolve_lindblad(*h, initial, request.noise.value_or(std::vector<NoiseChannel>{}),
                           request.times_ns, request.step);
  return evolve_unitary(*h, initial, request.times_ns, request.step);
}

}  // namespace paraqst::dynamics
