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

#include <span>
#include <vector>

namespace paraqst::fitting {

/// y(t) = c0 + c1 * cos(2 Omega t): the population of a resonantly coupled
/// two-level exchange starting from one excited qubit.  Omega in rad/ns when
/// t is in ns; |g'| in MHz is Omega / (2 pi 1e-3).
struct OscillationFit {
  double omega = 0.0;      ///< Omega, rad per time unit of `t`.
  double offset = 0.0;     ///< c0.
  double amplitude = 0.0;  ///< c1 (signed; starts at max when c1 > 0).
  double residual = 0.0;   ///< RMS residual.
  double r_squared = 0.0;
};

/// Least-squares fit of samples to c0 + c1 cos(2 Omega t).  Grid search over
/// Omega (linear in c0, c1) refined by golden section.  Throws
/// NumericalError when the data span is too small or covers less than a
/// recognizable fraction of an oscillation.
OscillationFit fit_population_oscillation(std::span<const double> t, std::span<const double> y);

/// F(m) = amplitude * per_step^m + floor, with the floor fixed by the caller
/// (0.25 for single-qubit process fidelity against a depolarizing limit).
struct PowerDecayFit {
  double amplitude = 0.0;
  double per_step = 0.0;  ///< In (0, 1].
  double residual = 0.0;  ///< RMS residual.
};

PowerDecayFit fit_power_decay(std::span<const int> m, std::span<const double> f,
                              double floor = 0.25);

/// y(t) = amplitude * exp(-t / decay_time) + offset.
struct ExponentialDecayFit {
  double decay_time = 0.0;  ///< Same unit as `t`.
  double amplitude = 0.0;
  double offset = 0.0;
  double residual = 0.0;    ///< RMS residual.
  /// True when the data show no resolvable decay; decay_time is then set
  /// to the sentinel below rather than a meaningful scale.
  bool saturated = false;
};

/// Sentinel decay time reported for saturated (non-decaying) data, in the
/// time unit of `t`.  Chosen far above any physical coherence scale.
inline constexpr double kNoDecaySentinel = 1e9;

/// Profiled least squares: linear in (amplitude, offset) at fixed decay
/// time, scanned and refined over log decay time.
ExponentialDecayFit fit_exponential_decay(std::span<const double> t, std::span<const double> y);

}  // namespace paraqst::fitting
