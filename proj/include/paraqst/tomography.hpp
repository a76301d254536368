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

#include <array>
#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "paraqst/model.hpp"

namespace paraqst::tomography {

using model::Complex;

// Single-qubit conventions: basis order (g, e); sigma_z = diag(1, -1), so
// r_z = P_g - P_e and the excited state sits at the south pole.

/// Pauli basis {I, X, Y, Z} in the (g, e) basis.
const std::array<Eigen::Matrix2cd, 4>& pauli_basis();

/// 2x2 readout confusion matrix: column s holds the outcome distribution
/// for a qubit prepared in s, i.e. [[F_g, 1-F_e], [1-F_g, F_e]].
class ConfusionMatrix {
 public:
  ConfusionMatrix();  ///< Identity (perfect readout).
  static ConfusionMatrix from_fidelities(double fid_g, double fid_e);
  static ConfusionMatrix from_qubit(const model::QubitParams& qubit);

  const Eigen::Matrix2d& matrix() const { return m_; }
  Eigen::Matrix2d inverse() const;
  double fidelity_g() const { return m_(0, 0); }
  double fidelity_e() const { return m_(1, 1); }

  /// Column-stochasticity to 1e-12 and positive determinant (invertibility).
  void validate() const;

 private:
  explicit ConfusionMatrix(Eigen::Matrix2d m);
  Eigen::Matrix2d m_;
};

/// Outcome counts of repeated single-qubit readout.
struct ReadoutCounts {
  long long ground = 0;
  long long excited = 0;
  long long shots() const { return ground + excited; }
  Eigen::Vector2d frequencies() const;
};

/// Draws `shots` binomial readout outcomes from true populations
/// (p_g, p_e) filtered through the confusion matrix.  Deterministic for a
/// given seed.
ReadoutCounts sample_readout(const Eigen::Vector2d& populations, const ConfusionMatrix& confusion,
                             long long shots, std::uint64_t seed);

/// Inverts the confusion matrix on measured frequencies.  The raw result
/// can leave [0, 1] at finite shots; that is intentional (unbiased).
Eigen::Vector2d correct_readout(const Eigen::Vector2d& measured_frequencies,
                                const ConfusionMatrix& confusion);

/// Clamped variant: projects onto the probability simplex.
Eigen::Vector2d correct_readout_clamped(const Eigen::Vector2d& measured_frequencies,
                                        const ConfusionMatrix& confusion);

/// Bloch vector with the conventions above.
struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm() const;
};

Eigen::Matrix2cd density_from_bloch(const BlochVector& r);
BlochVector bloch_from_density(const Eigen::Matrix2cd& rho);

enum class MeasurementBasis { X, Y, Z };

/// True outcome probabilities (p_plus, p_minus) of measuring `basis` on rho,
/// where "plus" labels the +1 eigenvector (reported through the g channel).
Eigen::Vector2d basis_populations(const Eigen::Matrix2cd& rho, MeasurementBasis basis);

/// State-tomography output: the raw linear-inversion estimate alongside its
/// projection onto the physical (|r| <= 1) ball.
struct StateTomographyResult {
  BlochVector raw;
  BlochVector physical;
  Eigen::Matrix2cd rho_raw;
  Eigen::Matrix2cd rho_physical;
};

/// Exact-state tomography (no sampling): reads the Bloch vector off rho.
StateTomographyResult state_tomography(const Eigen::Matrix2cd& rho);

/// Full pipeline: per-basis sampling through the confusion matrix, raw
/// inversion, Bloch assembly, physical projection.  Seeds for the three
/// bases derive deterministically from `seed`.
StateTomographyResult sampled_state_tomography(const Eigen::Matrix2cd& rho,
                                               const ConfusionMatrix& confusion, long long shots,
                                               std::uint64_t seed);

/// Process matrix chi in the Pauli basis {I, X, Y, Z}:
/// E(rho) = sum_mn chi_mn P_m rho P_n.
struct ChiMatrix {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();

  /// Hermiticity to 1e-10.
  void validate() const;
  /// Max |tr E(rho) - 1| over the standard input set (0 for trace-preserving).
  double trace_preservation_defect() const;
};

/// The four standard tomography inputs: |g>, |e>, (|g>+|e>)/sqrt2,
/// (|g>-i|e>)/sqrt2, as density matrices.
const std::array<Eigen::Matrix2cd, 4>& standard_inputs();
/// The same inputs as (amp_g, amp_e) pairs.
const std::array<std::array<Complex, 2>, 4>& standard_input_amplitudes();

/// Reconstructs chi from the channel outputs for the standard inputs
/// (co-indexed with standard_inputs()).
ChiMatrix process_tomography(const std::array<Eigen::Matrix2cd, 4>& outputs);

/// Applies the channel described by chi to rho.
Eigen::Matrix2cd apply_channel(const ChiMatrix& chi, const Eigen::Matrix2cd& rho);

/// chi of the unitary channel rho -> U rho U^dagger.
ChiMatrix chi_from_unitary(const Eigen::Matrix2cd& u);
/// chi of the identity channel (chi_II = 1, rest 0).
ChiMatrix chi_identity();

/// Process fidelity Re tr(chi_measured chi_ideal), clamped to [0, 1]; values
/// outside by more than 1e-9 throw NumericalError.
double process_fidelity(const ChiMatrix& measured, const ChiMatrix& ideal);

}  // namespace paraqst::tomography
