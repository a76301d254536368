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

#pragma once

#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "paraqst/model.hpp"

namespace paraqst::dynamics {

/// Open-system channel parameters for one qubit.
struct NoiseChannel {
  double t1_us = std::numeric_limits<double>::infinity();     ///< Relaxation time.
  double t_phi_us = std::numeric_limits<double>::infinity();  ///< Pure-dephasing time.
  double thermal_pop = 0.0;  ///< Steady-state excited population of the bath.
};

/// Channels derived from the chain's coherence table.  `t2_star_override`
/// replaces every qubit's T2* with a common value; `include_thermal` keeps
/// the configured thermal populations (otherwise they are zeroed).
std::vector<NoiseChannel> noise_from_chain(const model::ChainConfig& chain,
                                           std::optional<double> t2_star_override = {},
                                           bool include_thermal = false);

/// Integrator step control.  The step satisfies both
/// norm_factor / ||H||  and  phase_factor / max_phase_rate, capped by max_dt.
struct StepControl {
  double norm_factor = 0.05;
  double phase_factor = 0.0125;
  double max_dt_ns = 0.25;
  double min_dt_ns = 1e-9;

  double step_for(const model::HamiltonianFn& h) const;
};

/// Looser control for optimization inner loops where 1e-4 population
/// accuracy suffices.
StepControl coarse_step_control();

/// Time-resolved result of an evolution.
struct Trajectory {
  std::vector<double> times_ns;
  std::vector<model::QuantumState> states;
  Eigen::MatrixXd populations;        ///< times x num_qubits, excited population.
  std::vector<double> norm_or_trace;  ///< Per sample point.

  int num_qubits() const;
  /// Index of the first maximum of qubit `qubit`'s population.
  int peak_index(int qubit) const;
  double max_norm_drift() const;

  /// Columns: time_ns, p_e_q0..p_e_q{N-1}, norm_or_trace.
  void write_csv(const std::filesystem::path& path) const;
};

/// Declarative description of one evolution run.
struct EvolutionRequest {
  enum class Source {
    Lab,        ///< Time-dependent chain model (frame + counter-rotating flags).
    Effective,  ///< Static effective XY model from the schedule.
    Explicit,   ///< Caller-supplied HamiltonianFn.
  };

  Source source = Source::Effective;
  model::ChainConfig chain;
  model::TransferSchedule schedule;
  model::Frame frame = model::Frame::RotatingOperating;
  bool counter_rotating = true;
  std::shared_ptr<const model::HamiltonianFn> explicit_hamiltonian;

  model::QuantumState initial;
  std::vector<double> times_ns;  ///< Strictly increasing, starting at 0.
  std::optional<std::vector<NoiseChannel>> noise;  ///< Forces density evolution.
  StepControl step;

  void validate() const;
};

/// Dispatches to the unitary or Lindblad integrator per the request.
Trajectory evolve(const EvolutionRequest& request);

/// Fixed-step RK4 Schrodinger integration recording at `times_ns`
/// (strictly increasing, starting at 0).
Trajectory evolve_unitary(const model::HamiltonianFn& h, const model::QuantumState& initial,
                          std::span<const double> times_ns, const StepControl& step = {});

/// Exact propagation under a constant Hamiltonian via eigendecomposition.
/// Serves as the oracle for the integrators.  Throws on non-Hermitian input.
model::QuantumState evolve_exact(const Eigen::MatrixXcd& h_rad_ns,
                                 const model::QuantumState& initial, double t_ns);

/// Fixed-step RK4 Lindblad master-equation integration.  `noise` holds one
/// channel per qubit; relaxation, pure dephasing, and thermal excitation
/// collapse operators are included per channel.  Pure initial states are
/// promoted to density matrices (sector states to the full space first).
Trajectory evolve_lindblad(const model::HamiltonianFn& h, const model::QuantumState& initial,
                           const std::vector<NoiseChannel>& noise,
                           std::span<const double> times_ns, const StepControl& step = {});

}  // namespace paraqst::dynamics
