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

#include "paraqst/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "paraqst/sweep.hpp"

namespace paraqst::tomography {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix2d;
using Eigen::Vector2d;

const Complex kI(0.0, 1.0);

Matrix2cd make_pauli(int which) {
  Matrix2cd m;
  switch (which) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -kI, kI, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Column-major vec of a 2x2 matrix: [m00, m10, m01, m11].
Eigen::Vector4cd vec2(const Matrix2cd& m) {
  Eigen::Vector4cd v;
  v << m(0, 0), m(1, 0), m(0, 1), m(1, 1);
  return v;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const std::array<Matrix2cd, 4>& pauli_basis() {
  static const std::array<Matrix2cd, 4> paulis = {make_pauli(0), make_pauli(1), make_pauli(2),
                                                  make_pauli(3)};
  return paulis;
}

// ---------------------------------------------------------------------------
// Confusion matrix

ConfusionMatrix::ConfusionMatrix() : m_(Matrix2d::Identity()) {}

ConfusionMatrix::ConfusionMatrix(Matrix2d m) : m_(std::move(m)) { validate(); }

ConfusionMatrix ConfusionMatrix::from_fidelities(double fid_g, double fid_e) {
  Matrix2d m;
  m << fid_g, 1.0 - fid_e, 1.0 - fid_g, fid_e;
  return ConfusionMatrix(m);
}

ConfusionMatrix ConfusionMatrix::from_qubit(const model::QubitParams& qubit) {
  return from_fidelities(qubit.readout_fid_g, qubit.readout_fid_e);
}

Eigen::Matrix2d ConfusionMatrix::inverse() const {
  const double det = m_.determinant();
  Matrix2d inv;
  inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
  return inv / det;
}

void ConfusionMatrix::validate() const {
  for (int c = 0; c < 2; ++c) {
    if (std::abs(m_.col(c).sum() - 1.0) > 1e-12)
      throw ValidationError("confusion matrix columns must sum to 1 (tolerance 1e-12)");
    for (int r = 0; r < 2; ++r)
      if (m_(r, c) < 0.0 || m_(r, c) > 1.0)
        throw ValidationError("confusion matrix entries must lie in [0, 1]");
  }
  if (m_.determinant() <= 0.0)
    throw ValidationError(
        "confusion matrix must have positive determinant (F_g + F_e > 1) to be invertible");
}

// ---------------------------------------------------------------------------
// Readout sampling and correction

Eigen::Vector2d ReadoutCounts::frequencies() const {
  const long long n = shots();
  if (n <= 0) throw ValidationError("readout counts are empty");
  return Vector2d(static_cast<double>(ground) / n, static_cast<double>(excited) / n);
}

ReadoutCounts sample_readout(const Vector2d& populations, const ConfusionMatrix& confusion,
                             long long shots, std::uint64_t seed) {
  if (shots <= 0) throw ValidationError("sample_readout: shots must be positive");
  if (populations.minCoeff() < -1e-9 || std::abs(populations.sum() - 1.0) > 1e-6)
    throw ValidationError("sample_readout: populations must be a probability vector");
  const Vector2d clamped(std::clamp(populations(0), 0.0, 1.0),
                         std::clamp(populations(1), 0.0, 1.0));
  const Vector2d measured = confusion.matrix() * (clamped / clamped.sum());
  const double p_ground = std::clamp(measured(0), 0.0, 1.0);

  std::mt19937_64 rng(seed);
  ReadoutCounts counts;
  for (long long s = 0; s < shots; ++s) {
    if (uniform01(rng) < p_ground)
      ++counts.ground;
    else
      ++counts.excited;
  }
  return counts;
}

Vector2d correct_readout(const Vector2d& measured_frequencies, const ConfusionMatrix& confusion) {
  return confusion.inverse() * measured_frequencies;
}

Vector2d correct_readout_clamped(const Vector2d& measured_frequencies,
                                 const ConfusionMatrix& confusion) {
  const Vector2d raw = correct_readout(measured_frequencies, confusion);
  // Euclidean projection onto the 1-simplex in two dimensions.
  const double shift = (raw(0) + raw(1) - 1.0) / 2.0;
  Vector2d p(raw(0) - shift, raw(1) - shift);
  if (p(0) < 0.0) p = Vector2d(0.0, 1.0);
  if (p(1) < 0.0) p = Vector2d(1.0, 0.0);
  return p;
}

// ---------------------------------------------------------------------------
// Bloch vectors and state tomography

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

Matrix2cd density_from_bloch(const BlochVector& r) {
  const auto& p = pauli_basis();
  return 0.5 * (p[0] + r.x * p[1] + r.y * p[2] + r.z * p[3]);
}

BlochVector bloch_from_density(const Matrix2cd& rho) {
  BlochVector r;
  r.x = 2.0 * rho(1, 0).real();
  r.y = 2.0 * rho(1, 0).imag();
  r.z = (rho(0, 0) - rho(1, 1)).real();
  return r;
}

Vector2d basis_populations(const Matrix2cd& rho, MeasurementBasis basis) {
  // Pre-rotation mapping the basis +1 eigenvector onto |g>.
  Matrix2cd v;
  const double s = 1.0 / std::sqrt(2.0);
  switch (basis) {
    case MeasurementBasis::X: v << s, s, s, -s; break;
    case MeasurementBasis::Y: v << s, -s * kI, s, s * kI; break;
    case MeasurementBasis::Z: v = Matrix2cd::Identity(); break;
  }
  const Matrix2cd rotated = v * rho * v.adjoint();
  return Vector2d(rotated(0, 0).real(), rotated(1, 1).real());
}

namespace {

void check_single_qubit_density(const Matrix2cd& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("state tomography: input density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-8)
    throw ValidationError("state tomography: input density matrix must have unit trace");
}

StateTomographyResult assemble(const BlochVector& raw) {
  StateTomographyResult out;
  out.raw = raw;
  out.physical = raw;
  const double n = raw.norm();
  if (n > 1.0) {
    out.physical.x /= n;
    out.physical.y /= n;
    out.physical.z /= n;
  }
  out.rho_raw = density_from_bloch(out.raw);
  out.rho_physical = density_from_bloch(out.physical);
  return out;
}

}  // namespace

StateTomographyResult state_tomography(const Matrix2cd& rho) {
  check_single_qubit_density(rho);
  return assemble(bloch_from_density(rho));
}

StateTomographyResult sampled_state_tomography(const Matrix2cd& rho,
                                               const ConfusionMatrix& confusion, long long shots,
                                               std::uint64_t seed) {
  check_single_qubit_density(rho);
  double r[3];
  const MeasurementBasis bases[3] = {MeasurementBasis::X, MeasurementBasis::Y,
                                     MeasurementBasis::Z};
  for (int b = 0; b < 3; ++b) {
    const Vector2d truth = basis_populations(rho, bases[b]);
    const ReadoutCounts counts =
        sample_readout(truth, confusion, shots, sweep::derive_seed(seed, b));
    const Vector2d corrected = correct_readout(counts.frequencies(), confusion);
    r[b] = corrected(0) - corrected(1);
  }
  return assemble(BlochVector{r[0], r[1], r[2]});
}

// ---------------------------------------------------------------------------
// Process tomography

void ChiMatrix::validate() const {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("chi matrix is not Hermitian (tolerance 1e-10)");
}

double ChiMatrix::trace_preservation_defect() const {
  double defect = 0.0;
  for (const auto& rho : standard_inputs()) {
    const Matrix2cd out = apply_channel(*this, rho);
    defect = std::max(defect, std::abs(out.trace() - Complex(1.0, 0.0)));
  }
  return defect;
}

const std::array<Matrix2cd, 4>& standard_inputs() {
  static const std::array<Matrix2cd, 4> inputs = [] {
    std::array<Matrix2cd, 4> v;
    const auto& amps = standard_input_amplitudes();
    for (int k = 0; k < 4; ++k) {
      Eigen::Vector2cd a;
      a << amps[k][0], amps[k][1];
      v[k] = a * a.adjoint();
    }
    return v;
  }();
  return inputs;
}

const std::array<std::array<Complex, 2>, 4>& standard_input_amplitudes() {
  static const std::array<std::array<Complex, 2>, 4> amps = [] {
    const double s = 1.0 / std::sqrt(2.0);
    std::array<std::array<Complex, 2>, 4> v;
    v[0] = {Complex(1, 0), Complex(0, 0)};        // |g>
    v[1] = {Complex(0, 0), Complex(1, 0)};        // |e>
    v[2] = {Complex(s, 0), Complex(s, 0)};        // (|g> + |e>)/sqrt2
    v[3] = {Complex(s, 0), Complex(0, -s)};       // (|g> - i|e>)/sqrt2
    return v;
  }();
  return amps;
}

ChiMatrix process_tomography(const std::array<Matrix2cd, 4>& outputs) {
  // Images of the computational-basis dyads from the standard-input images.
  const Matrix2cd& out_g = outputs[0];
  const Matrix2cd& out_e = outputs[1];
  const Matrix2cd a = outputs[2] - 0.5 * out_g - 0.5 * out_e;  // E(|g><e| + |e><g|)/2
  const Matrix2cd b = outputs[3] - 0.5 * out_g - 0.5 * out_e;  // E(i|g><e| - i|e><g|)/2
  const Matrix2cd img_ge = a - kI * b;  // E(|g><e|)
  const Matrix2cd img_eg = a + kI * b;  // E(|e><g|)

  // Superoperator on column-major vec: columns are the images of the
  // basis dyads |g><g|, |e><g|, |g><e|, |e><e|.
  Eigen::Matrix4cd s;
  s.col(0) = vec2(out_g);
  s.col(1) = vec2(img_eg);
  s.col(2) = vec2(img_ge);
  s.col(3) = vec2(out_e);

  const auto& p = pauli_basis();
  ChiMatrix chi;
  for (int mm = 0; mm < 4; ++mm) {
    for (int nn = 0; nn < 4; ++nn) {
      Eigen::Matrix4cd basis_op;
      // (P_n^T (x) P_m) acting on vec(rho) implements P_m rho P_n.
      basis_op.block<2, 2>(0, 0) = p[nn].transpose()(0, 0) * p[mm];
      basis_op.block<2, 2>(0, 2) = p[nn].transpose()(0, 1) * p[mm];
      basis_op.block<2, 2>(2, 0) = p[nn].transpose()(1, 0) * p[mm];
      basis_op.block<2, 2>(2, 2) = p[nn].transpose()(1, 1) * p[mm];
      chi.m(mm, nn) = (basis_op.adjoint() * s).trace() / 4.0;
    }
  }
  // Numerical dust can break exact Hermiticity; symmetrize within tolerance.
  const Eigen::Matrix4cd sym = 0.5 * (chi.m + chi.m.adjoint());
  if ((chi.m - sym).cwiseAbs().maxCoeff() > 1e-10)
    throw NumericalError("process tomography produced a non-Hermitian chi matrix");
  chi.m = sym;
  return chi;
}

Matrix2cd apply_channel(const ChiMatrix& chi, const Matrix2cd& rho) {
  const auto& p = pauli_basis();
  Matrix2cd out = Matrix2cd::Zero();
  for (int mm = 0; mm < 4; ++mm)
    for (int nn = 0; nn < 4; ++nn) {
      if (chi.m(mm, nn) == Complex(0.0, 0.0)) continue;
      out += chi.m(mm, nn) * p[mm] * rho * p[nn];
    }
  return out;
}

ChiMatrix chi_from_unitary(const Matrix2cd& u) {
  if ((u * u.adjoint() - Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("chi_from_unitary: input is not unitary");
  const auto& p = pauli_basis();
  Eigen::Vector4cd c;
  for (int mm = 0; mm < 4; ++mm) c(mm) = (p[mm] * u).trace() / 2.0;
  ChiMatrix chi;
  chi.m = c * c.adjoint();
  return chi;
}

ChiMatrix chi_identity() { return chi_from_unitary(Matrix2cd::Identity()); }

double process_fidelity(const ChiMatrix& measured, const ChiMatrix& ideal) {
  measured.validate();
  ideal.validate();
  const double f = (measured.m * ideal.m).trace().real();
  if (f < -1e-9 || f > 1.0 + 1e-9)
    throw NumericalError("process fidelity " + std::to_string(f) +
                         " lies outside [0, 1] beyond tolerance");
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace paraqst::tomography
