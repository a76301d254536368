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

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "paraqst/errors.hpp"

namespace paraqst::model {

using Complex = std::complex<double>;

/// Calibrated parameters of one transmon in the chain.
struct QubitParams {
  double sweet_spot_freq = 0.0;  ///< Maximum (sweet-spot) frequency, GHz.
  double operating_freq = 0.0;   ///< Static operating-point frequency, GHz.
  double t1 = 0.0;               ///< Energy relaxation time at the operating point, us.
  double t2_star = 0.0;          ///< Ramsey dephasing time at the operating point, us.
  double readout_fid_g = 1.0;    ///< P(read g | prepared g).
  double readout_fid_e = 1.0;    ///< P(read e | prepared e).
  double thermal_pop = 0.0;      ///< Residual excited-state population.

  /// Throws ValidationError on unphysical values; `index` labels messages.
  void validate(int index = -1) const;
};

/// A linear chain of qubits with static nearest-neighbour couplings.
struct ChainConfig {
  std::vector<QubitParams> qubits;
  /// g_j for links j = 1..N-1 (MHz); entry j-1 couples qubits j-1 and j.
  std::vector<double> static_couplings;

  int size() const { return static_cast<int>(qubits.size()); }
  int links() const { return static_cast<int>(static_couplings.size()); }

  /// Static detuning Delta_j = operating_freq[j] - operating_freq[j-1] in MHz,
  /// for link j in [1, N-1].
  double detuning_mhz(int link) const;

  /// Structural and per-qubit validation (N >= 2, couplings > 0, ...).
  void validate() const;

  /// Throws unless successive detunings alternate in sign, which the
  /// sideband-selection scheme requires.  Checked at synthesis time.
  void require_alternating_detunings() const;
};

/// Sinusoidal frequency modulation of one qubit:
/// omega(t) = omega_op + eps * sin(nu t + phase).
struct ModulationSpec {
  double amplitude = 0.0;  ///< eps, MHz.  Zero means "not modulated".
  double frequency = 1.0;  ///< nu, MHz.  Must stay positive.
  double phase = 0.0;      ///< radians.

  /// Modulation index alpha = eps / nu (dimensionless).
  double index() const { return amplitude / frequency; }

  void validate(int index = -1) const;
};

/// A complete transfer schedule: one modulation per qubit j = 1..N-1
/// (qubit 0 stays parked) plus the transfer duration and the cached
/// effective couplings the schedule realizes.
struct TransferSchedule {
  std::vector<ModulationSpec> modulations;  ///< For qubits 1..N-1, in order.
  double duration = 0.0;                    ///< tau, ns.
  /// Cached g'_j for links j = 1..N-1 (MHz, complex: magnitude and phase).
  std::vector<Complex> effective_couplings;

  int links() const { return static_cast<int>(modulations.size()); }

  /// Structural checks plus a recomputation of every cached effective
  /// coupling (1e-12 relative tolerance).
  void validate(const ChainConfig& chain) const;

  /// True when |g'_j| = |g'_{N-j}| for all links within `rel_tol`.
  bool mirror_symmetric(double rel_tol = 1e-10) const;
};

/// Per-qubit modulation program covering every qubit in the chain,
/// including qubit 0.  Generalizes TransferSchedule for experiments that
/// modulate the first qubit (e.g. two-tone chevron scans).
struct ModulationProgram {
  std::vector<ModulationSpec> per_qubit;  ///< One entry per qubit.

  static ModulationProgram from_schedule(const TransferSchedule& schedule, int num_qubits);
  /// All qubits parked (no modulation).
  static ModulationProgram none(int num_qubits);

  int size() const { return static_cast<int>(per_qubit.size()); }
  void validate(const ChainConfig& chain) const;
};

/// Reference frame for lab-model Hamiltonians.
enum class Frame {
  /// Absolute lab frame: full diagonal omega_j(t)/2 retained.  Intended for
  /// cross-validation at modest precision; phase rates are ~GHz.
  LabAbsolute,
  /// Frame rotating at every qubit's operating frequency: the diagonal keeps
  /// only the modulation part, excitation-conserving couplings carry
  /// exp(-i Delta_j t) phases, and counter-rotating terms (when enabled)
  /// carry exp(+i Sigma_j t) phases.
  RotatingOperating,
};

/// State-vector and operator representation.
enum class StateSpace {
  Full,    ///< Full 2^N tensor-product space, little-endian bit order.
  Sector,  ///< Vacuum + single-excitation subspace, dimension N + 1.
};

/// A pure or mixed quantum state over either representation.
class QuantumState {
 public:
  QuantumState() = default;

  static QuantumState pure(StateSpace space, int num_qubits, Eigen::VectorXcd amplitudes);
  static QuantumState mixed(StateSpace space, int num_qubits, Eigen::MatrixXcd density);
  static QuantumState all_ground(StateSpace space, int num_qubits);
  /// Product state with qubit `qubit` excited and the rest in ground.
  static QuantumState single_excitation(StateSpace space, int num_qubits, int qubit);
  /// amp_g |vac> + amp_e |e_qubit>; normalized on construction.
  static QuantumState qubit_superposition(StateSpace space, int num_qubits, int qubit,
                                          Complex amp_g, Complex amp_e);

  /// Integrator-internal factories: shape checks only.  Records along a
  /// trajectory are validated collectively through Trajectory invariants
  /// (norm/trace drift, positivity), not per sample.
  static QuantumState unchecked_pure(StateSpace space, int num_qubits, Eigen::VectorXcd amps);
  static QuantumState unchecked_mixed(StateSpace space, int num_qubits, Eigen::MatrixXcd rho);

  StateSpace space() const { return space_; }
  int num_qubits() const { return num_qubits_; }
  bool is_pure() const { return pure_; }
  int dim() const;

  const Eigen::VectorXcd& amplitudes() const;  ///< Throws for mixed states.
  const Eigen::MatrixXcd& density() const;     ///< Throws for pure states.
  /// Density-matrix view regardless of purity.
  Eigen::MatrixXcd to_density() const;
  /// Pure sector state promoted to the full 2^N space (identity for Full).
  QuantumState to_full_space() const;

  /// Excited-state population of one qubit.
  double excited_population(int qubit) const;
  /// Populations of all qubits, in qubit order.
  Eigen::VectorXd populations() const;
  /// Reduced single-qubit density matrix, basis order (g, e).
  Eigen::Matrix2cd reduced_qubit(int qubit) const;
  /// Norm (pure) or trace real part (mixed).
  double norm_or_trace() const;

  /// Norm/trace/Hermiticity/positivity invariants; throws ValidationError.
  void validate() const;

 private:
  StateSpace space_ = StateSpace::Full;
  int num_qubits_ = 0;
  bool pure_ = true;
  Eigen::VectorXcd amps_;
  Eigen::MatrixXcd rho_;
};

/// Index of the sector basis state with qubit `qubit` excited (slot 0 is
/// the vacuum), and its counterpart in the full space.
int sector_index(int qubit);
int full_index_of_excitation(int qubit);

/// Abstract time-dependent Hermitian generator in rad/ns.
class HamiltonianFn {
 public:
  virtual ~HamiltonianFn() = default;
  virtual int dim() const = 0;
  /// Writes H(t) into `out` (resized as needed).
  virtual void evaluate(double t_ns, Eigen::MatrixXcd& out) const = 0;
  /// Upper bound on ||H(t)|| (rad/ns) over all t, used for step control.
  virtual double norm_bound() const = 0;
  /// Upper bound on the fastest phase rate present (rad/ns); 0 if static.
  virtual double max_phase_rate() const { return 0.0; }

  Eigen::MatrixXcd operator()(double t_ns) const;
};

/// Constant Hamiltonian wrapper; validates Hermiticity on construction.
class ConstantHamiltonian final : public HamiltonianFn {
 public:
  explicit ConstantHamiltonian(Eigen::MatrixXcd h);
  int dim() const override { return static_cast<int>(h_.rows()); }
  void evaluate(double, Eigen::MatrixXcd& out) const override { out = h_; }
  double norm_bound() const override { return norm_; }
  const Eigen::MatrixXcd& matrix() const { return h_; }

 private:
  Eigen::MatrixXcd h_;
  double norm_ = 0.0;
};

/// Time-dependent chain Hamiltonian with sinusoidally modulated qubit
/// frequencies and static transverse couplings.
///
/// In Frame::RotatingOperating the diagonal keeps eps_j sin(nu_j t + phi_j)/2
/// terms, excitation-conserving couplings oscillate at the static detunings,
/// and (optionally) counter-rotating couplings oscillate at the frequency
/// sums.  In Frame::LabAbsolute the full diagonal is kept and couplings are
/// static.  StateSpace::Sector restricts to the single-excitation subspace
/// and requires counter_rotating == false (those terms leave the sector).
class LabHamiltonian final : public HamiltonianFn {
 public:
  LabHamiltonian(ChainConfig chain, ModulationProgram program, Frame frame,
                 bool counter_rotating, StateSpace space = StateSpace::Full);

  int dim() const override { return dim_; }
  void evaluate(double t_ns, Eigen::MatrixXcd& out) const override;
  double norm_bound() const override { return norm_bound_; }
  double max_phase_rate() const override { return max_phase_rate_; }

  Frame frame() const { return frame_; }
  bool counter_rotating() const { return counter_rotating_; }
  StateSpace space() const { return space_; }

 private:
  struct CouplingTerm {
    int row = 0, col = 0;       // matrix entry (row > col filled, then mirrored)
    double g = 0.0;             // rad/ns
    double static_rate = 0.0;   // rad/ns phase rate (detuning or sum)
    int diff_a = -1, diff_b = -1;  // modulated-phase bookkeeping, see source
    int sign_a = 0, sign_b = 0;
  };

  ChainConfig chain_;
  ModulationProgram program_;
  Frame frame_;
  bool counter_rotating_;
  StateSpace space_;
  int dim_ = 0;

  // Precomputed structure.
  std::vector<double> omega_op_;   // rad/ns
  std::vector<double> eps_;        // rad/ns
  std::vector<double> nu_;         // rad/ns
  std::vector<double> phi_;        // rad
  std::vector<std::pair<int, int>> xy_entries_;   // (row, col) per link, row>col
  std::vector<std::pair<int, int>> cr_entries_;   // counter-rotating entries
  std::vector<int> xy_link_of_entry_;
  std::vector<int> cr_link_of_entry_;
  std::vector<double> g_rad_;      // rad/ns per link
  double norm_bound_ = 0.0;
  double max_phase_rate_ = 0.0;

  void precompute();
};

/// H(t) of the chain under `schedule` at time `t_ns` (rad/ns).  Hermitian by
/// construction; an internal symmetry check enforces 1e-14.
Eigen::MatrixXcd build_lab_hamiltonian(const ChainConfig& chain, const TransferSchedule& schedule,
                                       double t_ns, Frame frame = Frame::RotatingOperating,
                                       bool counter_rotating = true);

/// Static effective XY Hamiltonian on the single-excitation sector
/// (dimension N+1, slot 0 = vacuum), rad/ns.  Preconditions: every modulated
/// link must satisfy |nu_j - |Delta_j|| <= resonance_tol_mhz; violations
/// throw ValidationError naming the offending links.  Links with zero
/// modulation amplitude contribute nothing and skip the resonance check.
Eigen::MatrixXcd build_effective_hamiltonian(const ChainConfig& chain,
                                             const TransferSchedule& schedule,
                                             double resonance_tol_mhz = 1e-3);

/// Same effective generator embedded in the full 2^N space (for open-system
/// evolution, where leakage out of the sector matters).
Eigen::MatrixXcd build_effective_hamiltonian_full(const ChainConfig& chain,
                                                  const TransferSchedule& schedule,
                                                  double resonance_tol_mhz = 1e-3);

/// Restriction of a full-space excitation-conserving operator to the
/// vacuum + single-excitation sector.  Throws if the operator couples the
/// sector to its complement beyond 1e-12 of its largest entry.
Eigen::MatrixXcd project_to_sector(const Eigen::MatrixXcd& full_operator, int num_qubits);

}  // namespace paraqst::model
