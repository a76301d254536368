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
#include <functional>
#include <vector>

#include "paraqst/model.hpp"

namespace paraqst::coupling {

using model::ChainConfig;
using model::Complex;
using model::ModulationSpec;
using model::TransferSchedule;

/// Location of the first maximum of J1 and its value: the usable range of
/// the modulation index on the first branch.
inline constexpr double kJ1PeakX = 1.8411837813406593;
inline constexpr double kJ1PeakValue = 0.5818652242815964;

/// Bessel function of the first kind J_n(x) for integer n >= 0.
/// Domain |x| <= 50; negative x handled via J_n(-x) = (-1)^n J_n(x).
double bessel_j(int n, double x);

/// Effective coupling g'_j (MHz, complex) of link j in [1, N-1] under the
/// sideband-selection scheme.  `mods` holds the modulations of qubits
/// 1..N-1 (mods[j-1] drives qubit j).  A zero-amplitude modulation on the
/// link's own qubit gives g'_j = 0.
Complex effective_coupling(const ChainConfig& chain, const std::vector<ModulationSpec>& mods,
                           int link);

/// Smallest modulation index alpha in [0, kJ1PeakX] with
/// g_j * J1(alpha) * J0(alpha_prev) = target (all MHz), solved by bisection
/// to 1e-10 relative accuracy.  `alpha_prev` is the already-fixed index of
/// the previous link's qubit (ignored for link 1).  Throws
/// InfeasibleScheduleError when the target exceeds the branch maximum.
double invert_link(double g_mhz, double target_mhz, double alpha_prev, int link);

/// Options for synthesize_schedule.
struct SynthesisOptions {
  /// Modulation phases phi_j for qubits 1..N-1; empty means all zero.
  std::vector<double> phases;
};

/// Builds the transfer schedule that realizes the perfect-transfer coupling
/// profile |g'_j| = g' * sqrt(j (N - j)) with duration tau = 250/g' ns.
/// Modulation frequencies are set exactly to the static detuning magnitudes;
/// amplitudes are solved sequentially from link 1 upward.
TransferSchedule synthesize_schedule(const ChainConfig& chain, double gprime_mhz,
                                     const SynthesisOptions& options = {});

/// Nelder-Mead options (standard reflection/expansion/contraction/shrink
/// coefficients live in optimize.hpp; these are the schedule-level knobs).
struct RefineOptions {
  int max_iterations = 500;
  double tolerance = 1e-4;          ///< Relative simplex-diameter convergence.
  double initial_step = 0.02;       ///< Relative size of the initial simplex.
  double amplitude_bound = 0.10;    ///< Allowed relative change of each eps_j.
  double frequency_bound_mhz = 8.0; ///< Allowed absolute change of each nu_j.
};

/// Result of refine_schedule.
struct RefineResult {
  TransferSchedule schedule;        ///< Best schedule found (couplings recomputed).
  std::vector<double> trace;        ///< Best objective value after each iteration.
  double initial_objective = 0.0;
  double final_objective = 0.0;
  int iterations = 0;
  bool converged = false;           ///< False when stopped by the iteration cap.
};

/// Minimizes `objective` over the modulation amplitudes and frequencies of
/// `schedule` (2*(N-1) parameters) with Nelder-Mead, keeping phases fixed.
/// The returned schedule has its cached effective couplings recomputed.
/// Guarantees monotone improvement over the initial schedule.
RefineResult refine_schedule(const ChainConfig& chain, const TransferSchedule& schedule,
                             const std::function<double(const TransferSchedule&)>& objective,
                             const RefineOptions& options = {});

}  // namespace paraqst::coupling
