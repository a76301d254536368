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
#include <vector>

#include <Eigen/Dense>

namespace paraqst::calibration {

// Control-hardware compensation: DC flux-crosstalk inversion and AC
// flux-line transfer-function deconvolution.

/// Flux crosstalk: measured_freq_shifts = M_z * applied_currents (arbitrary
/// consistent units).  `correction()` is the inverse used to orthogonalize
/// the lines.
class CrosstalkMatrix {
 public:
  explicit CrosstalkMatrix(Eigen::MatrixXd m_z);
  /// Builds the pair from a known correction matrix (inverse direction).
  static CrosstalkMatrix from_correction(const Eigen::MatrixXd& correction);

  const Eigen::MatrixXd& matrix() const { return m_z_; }
  const Eigen::MatrixXd& correction() const { return correction_; }
  int dim() const { return static_cast<int>(m_z_.rows()); }

  /// M_z * correction = I to 1e-12; warns (returns false) when a row is not
  /// diagonally dominant rather than failing.
  bool diagonally_dominant() const;
  void validate() const;

 private:
  Eigen::MatrixXd m_z_;
  Eigen::MatrixXd correction_;
};

/// Computes the correction (inverse) of a crosstalk matrix.  Throws
/// NumericalError when the condition number exceeds 1e6.
CrosstalkMatrix orthogonalize(const Eigen::MatrixXd& m_z);

/// Drive settings that realize `desired` frequency shifts through the
/// crosstalk: drive = correction * desired.
Eigen::VectorXd apply_correction(const CrosstalkMatrix& crosstalk,
                                 const Eigen::VectorXd& desired);

/// Parametric model of a flux line's step response: an exponential rise
/// towards 1 plus a damped ringing term.
struct LineResponse {
  double rise_time_ns = 2.0;
  double ringing_amplitude = 0.05;
  double ringing_freq_mhz = 100.0;
  double ringing_decay_ns = 10.0;

  double step_response(double t_ns) const;
  /// Discrete impulse response at sample spacing `dt_ns` (length `n`),
  /// i.e. the first difference of the sampled step response.
  std::vector<double> impulse_response(int n, double dt_ns) const;
};

/// Result of a Tikhonov-regularized deconvolution.
struct DeconvolutionResult {
  std::vector<double> corrected;     ///< Pre-distorted waveform to play.
  double round_trip_error = 0.0;     ///< max |h * corrected - target| (direct
                                     ///  time-domain convolution check).
  double regularization = 0.0;       ///< The lambda actually used.
};

/// Frequency-domain deconvolution of `target` by the line's impulse
/// response: X = Y conj(H) / (|H|^2 + lambda).  `lambda_rel` scales the peak
/// of |H|^2; lambda = 0 is allowed only when |H| stays well away from zero,
/// otherwise a ValidationError explains the ill-posedness.
DeconvolutionResult deconvolve(const std::vector<double>& target, const LineResponse& line,
                               double dt_ns, double lambda_rel = 1e-6);

/// What the qubit frequency actually does when a waveform is played through
/// the line (direct time-domain convolution with the impulse response).
std::vector<double> simulate_step_response(const std::vector<double>& waveform,
                                           const LineResponse& line, double dt_ns);

/// Worst-case |trace - target| inside the window [settle_start, end),
/// normalized by the step amplitude.
double settling_error(const std::vector<double>& trace, const std::vector<double>& target,
                      double dt_ns, double settle_start_ns);

namespace detail {
/// Radix-2 FFT (in place); size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);
std::size_t next_pow2(std::size_t n);
}  // namespace detail

}  // namespace paraqst::calibration
