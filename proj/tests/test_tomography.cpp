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

#include <array>
#include <cmath>
#include <complex>

#include <doctest.h>

#include "chain_fixtures.hpp"
#include "oracles.hpp"
#include "paraqst/errors.hpp"
#include "paraqst/tomography.hpp"

using namespace paraqst;
using model::Complex;

namespace {

Eigen::Matrix2cd pure_density(Complex amp_g, Complex amp_e) {
  Eigen::Vector2cd v;
  v << amp_g, amp_e;
  v.normalize();
  return v * v.adjoint();
}

}  // namespace

TEST_SUITE("tomography") {

TEST_CASE("confusion matrices are column-stochastic and invert exactly") {
  const auto conf = tomography::ConfusionMatrix::from_fidelities(0.963, 0.898);
  const auto& m = conf.matrix();
  CHECK(m(0, 0) == doctest::Approx(0.963));
  CHECK(m(1, 1) == doctest::Approx(0.898));
  CHECK(m.col(0).sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.col(1).sum() == doctest::Approx(1.0).epsilon(1e-15));
  conf.validate();

  const Eigen::Matrix2d round_trip = conf.inverse() * m;
  CHECK((round_trip - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((conf.inverse() - oracles::inverse_2x2(m)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("degenerate confusion matrices are rejected") {
  // fid_g + fid_e = 1 makes the matrix singular: correction impossible.
  CHECK_THROWS_AS(tomography::ConfusionMatrix::from_fidelities(0.5, 0.5), ValidationError);
  CHECK_THROWS_AS(tomography::ConfusionMatrix::from_fidelities(1.2, 0.9), ValidationError);
}

TEST_CASE("exact correction round-trips through the confusion matrix") {
  const auto chain = fixtures::device_chain();
  for (const auto& q : chain.qubits) {
    const auto conf = tomography::ConfusionMatrix::from_qubit(q);
    for (double pe : {0.0, 0.17, 0.5, 0.83, 1.0}) {
      const Eigen::Vector2d truth(1.0 - pe, pe);
      const Eigen::Vector2d measured = conf.matrix() * truth;
      const Eigen::Vector2d corrected = tomography::correct_readout(measured, conf);
      CHECK((corrected - truth).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("readout sampling is deterministic and unbiased") {
  const auto conf = tomography::ConfusionMatrix::from_fidelities(0.95, 0.88);
  const Eigen::Vector2d truth(0.7, 0.3);
  const auto a = tomography::sample_readout(truth, conf, 10000, 42);
  const auto b = tomography::sample_readout(truth, conf, 10000, 42);
  CHECK(a.ground == b.ground);
  CHECK(a.shots() == 10000);

  // Expected measured excited probability through the confusion filter.
  const double q = (conf.matrix() * truth)(1);
  const double sigma = std::sqrt(q * (1.0 - q) / 10000.0);
  CHECK(std::abs(a.frequencies()(1) - q) < 5.0 * sigma);

  const auto c = tomography::sample_readout(truth, conf, 10000, 43);
  CHECK(c.ground != a.ground);  // Different seed, different draw (overwhelmingly).
}

TEST_CASE("sampled corrections stay within binomial error bars") {
  const auto conf = tomography::ConfusionMatrix::from_fidelities(0.951, 0.869);
  const long long shots = 10000;
  int covered = 0;
  const int reps = 100;
  for (int rep = 0; rep < reps; ++rep) {
    const double pe = 0.1 + 0.8 * rep / (reps - 1);
    const Eigen::Vector2d truth(1.0 - pe, pe);
    const auto counts =
        tomography::sample_readout(truth, conf, shots, 1000 + static_cast<std::uint64_t>(rep));
    const auto corrected = tomography::correct_readout(counts.frequencies(), conf);
    const double q = (conf.matrix() * truth)(1);
    const double sigma_meas = std::sqrt(q * (1.0 - q) / shots);
    // The linear correction scales the measurement noise by 1/det.
    const double sigma_corr = sigma_meas / std::abs(conf.matrix().determinant());
    if (std::abs(corrected(1) - pe) <= 3.0 * sigma_corr) ++covered;
  }
  CHECK(covered >= 95);
}

TEST_CASE("clamped correction projects onto the simplex") {
  const auto conf = tomography::ConfusionMatrix::from_fidelities(0.9, 0.85);
  // A measured frequency more extreme than the confusion matrix can produce.
  const Eigen::Vector2d measured(0.99, 0.01);
  const auto raw = tomography::correct_readout(measured, conf);
  CHECK(raw(1) < 0.0);  // Raw estimate escapes the simplex (unbiased).
  const auto clamped = tomography::correct_readout_clamped(measured, conf);
  CHECK(clamped(0) >= 0.0);
  CHECK(clamped(1) >= 0.0);
  CHECK(clamped.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Bloch vectors round-trip through density matrices") {
  for (double z : {-0.9, 0.0, 0.4}) {
    tomography::BlochVector r{0.3, -0.5, z};
    const auto rho = tomography::density_from_bloch(r);
    const auto back = tomography::bloch_from_density(rho);
    CHECK(back.x == doctest::Approx(r.x).epsilon(1e-14));
    CHECK(back.y == doctest::Approx(r.y).epsilon(1e-14));
    CHECK(back.z == doctest::Approx(r.z).epsilon(1e-14));
  }
  // Conventions: |g> sits at +z.
  const auto ground = tomography::bloch_from_density(pure_density(1.0, 0.0));
  CHECK(ground.z == doctest::Approx(1.0));
  const auto plus_i = tomography::bloch_from_density(
      pure_density(Complex(1.0, 0.0), Complex(0.0, 1.0)));
  CHECK(plus_i.y == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("basis populations rotate the measurement correctly") {
  const auto plus = pure_density(1.0, 1.0);
  CHECK(tomography::basis_populations(plus, tomography::MeasurementBasis::X)(0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tomography::basis_populations(plus, tomography::MeasurementBasis::Z)(0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  const auto plus_i = pure_density(Complex(1.0, 0.0), Complex(0.0, 1.0));
  CHECK(tomography::basis_populations(plus_i, tomography::MeasurementBasis::Y)(0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  const auto excited = pure_density(0.0, 1.0);
  CHECK(tomography::basis_populations(excited, tomography::MeasurementBasis::Z)(1) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exact state tomography reproduces the density matrix") {
  const auto rho = pure_density(Complex(0.8, 0.0), Complex(0.36, 0.48));
  const auto result = tomography::state_tomography(rho);
  CHECK((result.rho_raw - rho).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((result.rho_physical - rho).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(result.physical.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampled state tomography converges to the true state") {
  const auto rho = pure_density(Complex(0.6, 0.0), Complex(0.0, 0.8));
  const auto conf = tomography::ConfusionMatrix::from_fidelities(0.96, 0.9);
  const auto result = tomography::sampled_state_tomography(rho, conf, 200000, 7);
  const auto truth = tomography::bloch_from_density(rho);
  CHECK(std::abs(result.raw.x - truth.x) < 0.02);
  CHECK(std::abs(result.raw.y - truth.y) < 0.02);
  CHECK(std::abs(result.raw.z - truth.z) < 0.02);
  // Physical estimate lives in the Bloch ball.
  CHECK(result.physical.norm() <= 1.0 + 1e-12);
  // Determinism.
  const auto again = tomography::sampled_state_tomography(rho, conf, 200000, 7);
  CHECK(again.raw.x == result.raw.x);
}

TEST_CASE("process tomography of the identity channel") {
  std::array<Eigen::Matrix2cd, 4> outputs;
  const auto& inputs = tomography::standard_inputs();
  for (std::size_t i = 0; i < 4; ++i) outputs[i] = inputs[i];
  const auto chi = tomography::process_tomography(outputs);
  chi.validate();
  CHECK(std::abs(chi.m(0, 0) - 1.0) < 1e-12);
  CHECK(chi.m.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(chi.trace_preservation_defect() < 1e-12);
  CHECK(tomography::process_fidelity(chi, tomography::chi_identity()) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("process tomography recovers a unitary channel") {
  // Rz(theta): chi_II = cos^2(theta/2), chi_ZZ = sin^2(theta/2).
  const double theta = 0.8;
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  u(1, 1) = std::exp(Complex(0.0, theta));
  std::array<Eigen::Matrix2cd, 4> outputs;
  const auto& inputs = tomography::standard_inputs();
  for (std::size_t i = 0; i < 4; ++i) outputs[i] = u * inputs[i] * u.adjoint();
  const auto chi = tomography::process_tomography(outputs);
  const double c2 = std::cos(theta / 2) * std::cos(theta / 2);
  CHECK(chi.m(0, 0).real() == doctest::Approx(c2).epsilon(1e-12));
  CHECK(chi.m(3, 3).real() == doctest::Approx(1.0 - c2).epsilon(1e-12));
  // Agrees with the analytic construction.
  const auto direct = tomography::chi_from_unitary(u);
  CHECK((chi.m - direct.m).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(tomography::process_fidelity(chi, tomography::chi_identity()) ==
        doctest::Approx(c2).epsilon(1e-12));
}

TEST_CASE("process tomography reconstructs an amplitude-damping channel") {
  const double p = 0.2;
  const auto kraus = oracles::amplitude_damping(p);
  std::array<Eigen::Matrix2cd, 4> outputs;
  const auto& inputs = tomography::standard_inputs();
  for (std::size_t i = 0; i < 4; ++i) outputs[i] = oracles::apply_kraus(kraus, inputs[i]);
  const auto chi = tomography::process_tomography(outputs);
  chi.validate();
  CHECK(chi.trace_preservation_defect() < 1e-12);

  // The reconstructed channel must act like the Kraus form on fresh states.
  for (const auto& test_state :
       {pure_density(0.6, 0.8), pure_density(Complex(0.7, 0.1), Complex(0.3, -0.64))}) {
    const auto via_chi = tomography::apply_channel(chi, test_state);
    const auto via_kraus = oracles::apply_kraus(kraus, test_state);
    CHECK((via_chi - via_kraus).cwiseAbs().maxCoeff() < 1e-12);
  }

  // Closed form: F(identity) = ((1 + sqrt(1-p)) / 2)^2.
  const double a = 0.5 * (1.0 + std::sqrt(1.0 - p));
  CHECK(tomography::process_fidelity(chi, tomography::chi_identity()) ==
        doctest::Approx(a * a).epsilon(1e-12));
}

TEST_CASE("chi validation and fidelity guards") {
  tomography::ChiMatrix bad;
  bad.m(0, 1) = Complex(0.0, 0.5);  // Not Hermitian.
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  tomography::ChiMatrix inflated;
  inflated.m(0, 0) = 1.5;  // Fidelity above 1 signals a broken pipeline.
  CHECK_THROWS_AS(tomography::process_fidelity(inflated, tomography::chi_identity()),
                  NumericalError);
}

}  // TEST_SUITE
