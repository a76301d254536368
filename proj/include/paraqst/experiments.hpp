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
#include <filesystem>
#include <optional>
#include <vector>

#include "paraqst/coupling.hpp"
#include "paraqst/dynamics.hpp"
#include "paraqst/fitting.hpp"
#include "paraqst/model.hpp"

namespace paraqst::experiments {

using model::ChainConfig;
using model::Complex;
using model::ModulationSpec;
using model::TransferSchedule;

/// How a population trace or scan models the chain.
enum class SimulationModel {
  LabCounterRotating,  ///< Rotating frame, counter-rotating terms kept.
  LabRotatingWave,     ///< Rotating frame, counter-rotating terms dropped.
  Effective,           ///< Static effective XY model (single-excitation sector).
};

// ---------------------------------------------------------------------------
// Chevron scans

struct ChevronOptions {
  int link = 1;                ///< Link j under study (qubit j is modulated).
  double amplitude_mhz = 0.0;  ///< eps_j of the scanned modulation.
  std::vector<double> nu_grid_mhz;  ///< Modulation frequencies to scan.
  std::vector<double> times_ns;     ///< Evolution-time grid (from 0).
  /// Modulation applied to the upstream qubit j-1 while scanning (two-tone
  /// variant); nullopt leaves qubit j-1 parked.
  std::optional<ModulationSpec> upstream;
  bool counter_rotating = true;
  dynamics::StepControl step;
  int workers = 1;
};

/// Excitation-exchange map P_e(qubit j-1) over (nu, t), plus the fitted
/// resonance frequency and coupling magnitude.
struct ChevronMap {
  int link = 1;
  double amplitude_mhz = 0.0;
  std::vector<double> nu_mhz;        ///< Scanned frequencies.
  std::vector<double> times_ns;      ///< Time grid.
  Eigen::MatrixXd populations;       ///< nu x t, upstream-qubit population.
  double resonance_mhz = 0.0;        ///< Fitted resonance frequency.
  double coupling_mhz = 0.0;         ///< Fitted |g'_j|.
  double oscillation_span = 0.0;     ///< Fitted population swing at resonance.
  fitting::OscillationFit resonance_fit;

  /// Columns: nu_mhz, then one population column per time sample.
  void write_csv(const std::filesystem::path& path) const;
};

/// Simulates the chevron experiment on the two qubits of `link`: the
/// upstream qubit starts excited, the link's qubit is modulated at each grid
/// frequency, and the upstream population is recorded over `times_ns`.
/// Each column's exchange frequency is fitted and the near-resonance
/// parabola Omega^2 = g'^2 + c (nu - nu0)^2 regressed through them with the
/// curvature free (sideband processes shift it a few percent off the
/// two-level value 1/4), giving the resonance nu0 (including any sideband
/// pulling) and |g'_j|. Time grids should sample well below the carrier
/// period or its micromotion aliases into the fits.
ChevronMap chevron_scan(const ChainConfig& chain, const ChevronOptions& options);

/// Convenience time grid for a chevron at expected coupling `gprime_mhz`:
/// covers `periods` population periods at `step_ns` spacing. The default
/// step sits far below typical modulation carrier periods (3-5 ns), so the
/// carrier micromotion averages out of the column fits instead of aliasing
/// into the extracted frequencies.
std::vector<double> chevron_time_grid(double gprime_mhz, double periods = 2.5,
                                      double step_ns = 0.25);

/// Convenience nu grid centred on the link's static detuning magnitude.
std::vector<double> chevron_nu_grid(const ChainConfig& chain, int link, double span_mhz = 24.0,
                                    double step_mhz = 0.75);

// ---------------------------------------------------------------------------
// State-transfer traces

struct TraceOptions {
  SimulationModel model = SimulationModel::LabCounterRotating;
  std::optional<std::vector<dynamics::NoiseChannel>> noise;
  dynamics::StepControl step;
};

/// A transfer trace plus the detected transfer event.
struct TransferTrace {
  dynamics::Trajectory trajectory;
  int peak_index = 0;        ///< First maximum of the last qubit's population.
  double transfer_time_ns = 0.0;
  double peak_population = 0.0;
};

/// Evolves amp_g |vac> + amp_e |e_Q0> under the schedule and records all
/// qubit populations over `times_ns`.
TransferTrace qst_population_trace(const ChainConfig& chain, const TransferSchedule& schedule,
                                   Complex amp_g, Complex amp_e,
                                   const std::vector<double>& times_ns,
                                   const TraceOptions& options = {});

// ---------------------------------------------------------------------------
// Transferred-state phase

/// The transfer amplitude <e_{N-1}| U(tau) |e_0> of the effective model and
/// the phase imprinted on a transferred superposition's coherence,
/// phi_s = -arg <e_{N-1}| U(tau) |e_0>  (the advance of <sigma^+>).
struct TransferAmplitude {
  Complex amplitude;
  double phi_s = 0.0;
};

/// Throws NumericalError when |amplitude| < 1e-6 (phase undefined).
TransferAmplitude transferred_phase(const ChainConfig& chain, const TransferSchedule& schedule);

/// phi_s predicted directly from the schedule's effective coupling phases:
/// sum_j arg(g'_j) plus the (N-1) pi/2 mirror constant, wrapped to [0, 2 pi).
double predicted_phase(const ChainConfig& chain, const TransferSchedule& schedule);

struct PhaseScan {
  int varied_link = 1;
  std::vector<double> phi;    ///< Scanned modulation phase of the varied link.
  std::vector<double> phi_s;  ///< Unwrapped transferred phase.
  double slope = 0.0;         ///< Linear-fit slope d(phi_s)/d(phi).
  double intercept = 0.0;
  double residual = 0.0;      ///< RMS residual of the linear fit.
};

/// Scans the modulation phase of one link over `phi_grid` (effective model),
/// recording phi_s; the slope is +1 for the first link and -1 for the
/// second under the sideband phase map.
PhaseScan phase_scan(const ChainConfig& chain, const TransferSchedule& schedule, int varied_link,
                     const std::vector<double>& phi_grid);

// ---------------------------------------------------------------------------
// Repeated transfers and decay

struct RepeatedTransferOptions {
  std::optional<double> t2_star_override_us;
  bool include_thermal = false;
  bool noiseless = false;      ///< Skip Lindblad terms entirely.
  long long shots = 0;         ///< 0 = exact tomography (no sampling).
  std::uint64_t seed = 0;
  dynamics::StepControl step;
};

/// Process-fidelity decay over repeated transfers.
struct FidelityDecay {
  std::vector<int> transfer_counts;  ///< The scanned m (odd, m = 4n+1).
  std::vector<double> fidelity;      ///< F(m) vs the identity process.
  fitting::PowerDecayFit fit;        ///< F = A * P^m + 0.25.
  double phase_correction = 0.0;     ///< phi_s applied as a virtual Rz.
};

/// Runs m sequential transfers (m in `transfer_counts`, each 4n+1 so the
/// state returns to the far qubit) under the effective model with the
/// chain's noise, performs single-qubit process tomography on the far qubit
/// (with the schedule's phase correction applied), and fits the decay.
FidelityDecay repeated_transfer(const ChainConfig& chain, const TransferSchedule& schedule,
                                const std::vector<int>& transfer_counts,
                                const RepeatedTransferOptions& options = {});

enum class DecayProbe {
  Excited,        ///< Track the transferred excited population.
  Superposition,  ///< Track the transferred coherence magnitude.
};

struct TransferredStateDecay {
  DecayProbe probe = DecayProbe::Excited;
  std::vector<double> times_us;   ///< m * tau for each scanned m.
  std::vector<double> signal;     ///< Population or 2|rho_ge|.
  fitting::ExponentialDecayFit fit;
};

/// Decay of a transferred |e> or |+> probe over repeated transfers.
TransferredStateDecay transferred_state_decay(const ChainConfig& chain,
                                              const TransferSchedule& schedule, DecayProbe probe,
                                              const std::vector<int>& transfer_counts,
                                              const RepeatedTransferOptions& options = {});

// ---------------------------------------------------------------------------
// In-situ schedule calibration

struct CalibrationOptions {
  coupling::RefineOptions refine;
  dynamics::StepControl objective_step;  ///< Step control of the inner simulations.
  CalibrationOptions();
};

struct CalibratedSchedule {
  TransferSchedule schedule;
  double initial_infidelity = 0.0;  ///< 1 - P_e(last qubit)(tau) before refinement.
  double final_infidelity = 0.0;
  coupling::RefineResult refine;
};

/// Refines a synthesized schedule against the time-dependent chain dynamics
/// (rotating frame, excitation-conserving), compensating the static
/// frequency shifts induced by off-resonant sidebands.  The objective is the
/// transfer infidelity at the schedule's duration.
CalibratedSchedule calibrate_schedule(const ChainConfig& chain, const TransferSchedule& schedule,
                                      const CalibrationOptions& options = {});

}  // namespace paraqst::experiments
