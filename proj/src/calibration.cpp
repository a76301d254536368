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

#include "paraqst/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "paraqst/errors.hpp"
#include "paraqst/units.hpp"

namespace paraqst::calibration {

// ---------------------------------------------------------------------------
// Crosstalk

namespace {

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw ValidationError(std::string(what) + ": matrix must be square and non-empty");
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0.0) || smax / smin >= 1e6)
    throw NumericalError(std::string(what) + ": matrix condition number " +
                         std::to_string(smin > 0.0 ? smax / smin : 0.0) +
                         " exceeds 1e6; inversion would amplify calibration noise");
  return svd.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

}  // namespace

CrosstalkMatrix::CrosstalkMatrix(Eigen::MatrixXd m_z) : m_z_(std::move(m_z)) {
  correction_ = checked_inverse(m_z_, "crosstalk matrix");
  validate();
}

CrosstalkMatrix CrosstalkMatrix::from_correction(const Eigen::MatrixXd& correction) {
  return CrosstalkMatrix(checked_inverse(correction, "crosstalk correction"));
}

bool CrosstalkMatrix::diagonally_dominant() const {
  for (int r = 0; r < m_z_.rows(); ++r) {
    double off = 0.0;
    for (int c = 0; c < m_z_.cols(); ++c)
      if (c != r) off += std::abs(m_z_(r, c));
    if (std::abs(m_z_(r, r)) <= off) return false;
  }
  return true;
}

void CrosstalkMatrix::validate() const {
  const Eigen::MatrixXd prod = m_z_ * correction_;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m_z_.rows(), m_z_.cols());
  if ((prod - eye).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("crosstalk matrix and its correction fail M * M_inv = I (1e-12)");
}

CrosstalkMatrix orthogonalize(const Eigen::MatrixXd& m_z) { return CrosstalkMatrix(m_z); }

Eigen::VectorXd apply_correction(const CrosstalkMatrix& crosstalk,
                                 const Eigen::VectorXd& desired) {
  if (desired.size() != crosstalk.dim())
    throw ValidationError("apply_correction: vector dimension does not match the matrix");
  return crosstalk.correction() * desired;
}

// ---------------------------------------------------------------------------
// Line response

double LineResponse::step_response(double t_ns) const {
  if (t_ns < 0.0) return 0.0;
  const double omega = units::rad_per_ns_from_mhz(ringing_freq_mhz);
  const double rise = 1.0 - std::exp(-t_ns / rise_time_ns);
  const double ring = ringing_amplitude * std::exp(-t_ns / ringing_decay_ns) *
                      std::sin(omega * t_ns);
  return rise + ring;
}

std::vector<double> LineResponse::impulse_response(int n, double dt_ns) const {
  if (n <= 0 || !(dt_ns > 0.0))
    throw ValidationError("impulse_response: need n > 0 and dt > 0");
  std::vector<double> h(n);
  for (int k = 0; k < n; ++k)
    h[k] = step_response((k + 1) * dt_ns) - step_response(k * dt_ns);
  return h;
}

// ---------------------------------------------------------------------------
// FFT

namespace detail {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw ValidationError("fft_radix2: size must be a power of two");
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = (inverse ? 2.0 : -2.0) * units::kPi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= static_cast<double>(n);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Deconvolution

namespace {

std::vector<double> direct_convolve(const std::vector<double>& x, const std::vector<double>& h,
                                    std::size_t out_len) {
  std::vector<double> y(out_len, 0.0);
  for (std::size_t k = 0; k < out_len; ++k) {
    double acc = 0.0;
    const std::size_t j_max = std::min(k, x.size() - 1);
    for (std::size_t j = 0; j <= j_max; ++j) {
      const std::size_t lag = k - j;
      if (lag < h.size()) acc += x[j] * h[lag];
    }
    y[k] = acc;
  }
  return y;
}

}  // namespace

DeconvolutionResult deconvolve(const std::vector<double>& target, const LineResponse& line,
                               double dt_ns, double lambda_rel) {
  if (target.empty()) throw ValidationError("deconvolve: target waveform is empty");
  if (!(dt_ns > 0.0)) throw ValidationError("deconvolve: dt must be positive");
  if (lambda_rel < 0.0) throw ValidationError("deconvolve: lambda must be >= 0");

  const std::size_t ny = target.size();
  const std::vector<double> h = line.impulse_response(static_cast<int>(ny), dt_ns);
  const std::size_t m = detail::next_pow2(ny + h.size() - 1);

  std::vector<std::complex<double>> yf(m, 0.0), hf(m, 0.0);
  for (std::size_t i = 0; i < ny; ++i) yf[i] = target[i];
  for (std::size_t i = 0; i < h.size(); ++i) hf[i] = h[i];
  detail::fft_radix2(yf, false);
  detail::fft_radix2(hf, false);

  double h2_max = 0.0, h2_min = std::numeric_limits<double>::infinity();
  for (const auto& v : hf) {
    const double p = std::norm(v);
    h2_max = std::max(h2_max, p);
    h2_min = std::min(h2_min, p);
  }
  if (lambda_rel == 0.0 && h2_min < 1e-6 * h2_max)
    throw ValidationError(
        "deconvolve: the line response has near-zero spectral weight; inversion with "
        "lambda = 0 is ill-posed, pass a positive regularization");
  const double lambda = lambda_rel * h2_max;

  std::vector<std::complex<double>> xf(m);
  for (std::size_t i = 0; i < m; ++i)
    xf[i] = yf[i] * std::conj(hf[i]) / (std::norm(hf[i]) + lambda);
  detail::fft_radix2(xf, true);

  DeconvolutionResult out;
  out.corrected.resize(ny);
  for (std::size_t i = 0; i < ny; ++i) out.corrected[i] = xf[i].real();
  out.regularization = lambda;

  // Independent check: direct time-domain convolution back to the target.
  const std::vector<double> round = direct_convolve(out.corrected, h, ny);
  double err = 0.0;
  for (std::size_t i = 0; i < ny; ++i) err = std::max(err, std::abs(round[i] - target[i]));
  out.round_trip_error = err;
  return out;
}

std::vector<double> simulate_step_response(const std::vector<double>& waveform,
                                           const LineResponse& line, double dt_ns) {
  if (waveform.empty()) throw ValidationError("simulate_step_response: empty waveform");
  const std::vector<double> h =
      line.impulse_response(static_cast<int>(waveform.size()), dt_ns);
  return direct_convolve(waveform, h, waveform.size());
}

double settling_error(const std::vector<double>& trace, const std::vector<double>& target,
                      double dt_ns, double settle_start_ns) {
  if (trace.size() != target.size() || trace.empty())
    throw ValidationError("settling_error: trace and target must have equal non-zero size");
  if (!(dt_ns > 0.0)) throw ValidationError("settling_error: dt must be positive");
  double amp = 0.0;
  for (double v : target) amp = std::max(amp, std::abs(v));
  if (amp == 0.0) throw ValidationError("settling_error: target waveform is identically zero");
  const std::size_t k0 =
      std::min(trace.size() - 1,
               static_cast<std::size_t>(std::ceil(settle_start_ns / dt_ns)));
  double err = 0.0;
  for (std::size_t k = k0; k < trace.size(); ++k)
    err = std::max(err, std::abs(trace[k] - target[k]));
  return err / amp;
}

}  // namespace paraqst::calibration
