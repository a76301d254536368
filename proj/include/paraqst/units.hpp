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

#include <numbers>

// Unit conventions used throughout paraqst:
//   * qubit transition frequencies: GHz (ordinary frequency, not angular)
//   * couplings, modulation amplitudes and frequencies: MHz
//   * coherence times: microseconds
//   * schedule durations and evolution times: nanoseconds
//   * phases: radians
// Angular frequencies in rad/ns appear only inside Hamiltonian builders and
// integrators; the converters below are the single place the 2*pi lives.

namespace paraqst::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// MHz (ordinary) -> rad/ns (angular).
constexpr double rad_per_ns_from_mhz(double f_mhz) { return kTwoPi * f_mhz * 1e-3; }

/// GHz (ordinary) -> rad/ns (angular).
constexpr double rad_per_ns_from_ghz(double f_ghz) { return kTwoPi * f_ghz; }

/// rad/ns (angular) -> MHz (ordinary).
constexpr double mhz_from_rad_per_ns(double w) { return w / (kTwoPi * 1e-3); }

/// Microseconds -> nanoseconds.
constexpr double ns_from_us(double t_us) { return t_us * 1e3; }

/// Nanoseconds -> microseconds.
constexpr double us_from_ns(double t_ns) { return t_ns * 1e-3; }

/// Duration of a perfect state transfer for coupling scale g' (MHz):
/// tau = pi / (2 * 2*pi*g') expressed in ns, i.e. 250/g'.
constexpr double transfer_duration_ns(double gprime_mhz) { return 250.0 / gprime_mhz; }

/// Inverse of transfer_duration_ns.
constexpr double coupling_scale_mhz(double tau_ns) { return 250.0 / tau_ns; }

}  // namespace paraqst::units
