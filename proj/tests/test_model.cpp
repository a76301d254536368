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

#include <cmath>
#include <complex>

#include <doctest.h>

#include "chain_fixtures.hpp"
#include "oracles.hpp"
#include "paraqst/coupling.hpp"
#include "paraqst/errors.hpp"
#include "paraqst/model.hpp"
#include "paraqst/units.hpp"

using namespace paraqst;
using model::Complex;

namespace {

model::QubitParams good_qubit() {
  model::QubitParams p;
  p.sweet_spot_freq = 5.0;
  p.operating_freq = 4.95;
  p.t1 = 20.0;
  p.t2_star = 8.0;
  p.readout_fid_g = 0.96;
  p.readout_fid_e = 0.90;
  p.thermal_pop = 0.02;
  return p;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("qubit validation accepts physical parameters") {
  CHECK_NOTHROW(good_qubit().validate(0));
}

TEST_CASE("qubit validation rejects unphysical parameters") {
  auto bad = good_qubit();
  bad.t2_star = 50.0;  // Above the 2 T1 dephasing limit.
  CHECK_THROWS_AS(bad.validate(0), ValidationError);

  bad = good_qubit();
  bad.t1 = -1.0;
  CHECK_THROWS_AS(bad.validate(0), ValidationError);

  bad = good_qubit();
  bad.operating_freq = bad.sweet_spot_freq + 0.01;  // Above the flux maximum.
  CHECK_THROWS_AS(bad.validate(0), ValidationError);

  bad = good_qubit();
  bad.readout_fid_e = 0.4;  // Worse than coin flipping breaks correction.
  CHECK_THROWS_AS(bad.validate(0), ValidationError);

  bad = good_qubit();
  bad.thermal_pop = 0.7;
  CHECK_THROWS_AS(bad.validate(0), ValidationError);
}

TEST_CASE("device chain detunings alternate through the ladder") {
  auto chain = fixtures::device_chain();
  REQUIRE(chain.size() == 4);
  CHECK(chain.detuning_mhz(1) == doctest::Approx(284.8).epsilon(1e-9));
  CHECK(chain.detuning_mhz(2) == doctest::Approx(-203.3).epsilon(1e-9));
  CHECK(chain.detuning_mhz(3) == doctest::Approx(274.7).epsilon(1e-9));
  CHECK_NOTHROW(chain.require_alternating_detunings());
}

TEST_CASE("monotone detunings are rejected for synthesis") {
  model::ChainConfig chain;
  for (int q = 0; q < 3; ++q) {
    auto p = good_qubit();
    p.sweet_spot_freq = p.operating_freq = 5.0 + 0.2 * q;  // Staircase.
    chain.qubits.push_back(p);
  }
  chain.static_couplings = {17.0, 17.0};
  CHECK_NOTHROW(chain.validate());
  CHECK_THROWS_AS(chain.require_alternating_detunings(), ValidationError);
}

TEST_CASE("chain validation catches structural mistakes") {
  auto chain = fixtures::synthetic_chain(3);
  chain.static_couplings.pop_back();
  CHECK_THROWS_AS(chain.validate(), ValidationError);

  chain = fixtures::synthetic_chain(3);
  chain.static_couplings[0] = 0.0;
  CHECK_THROWS_AS(chain.validate(), ValidationError);

  model::ChainConfig single;
  single.qubits.push_back(good_qubit());
  CHECK_THROWS_AS(single.validate(), ValidationError);
}

TEST_CASE("basis index maps") {
  CHECK(model::sector_index(0) == 1);
  CHECK(model::sector_index(3) == 4);
  CHECK(model::full_index_of_excitation(0) == 1);
  CHECK(model::full_index_of_excitation(3) == 8);
}

TEST_CASE("state factories and populations") {
  auto vac = model::QuantumState::all_ground(model::StateSpace::Sector, 4);
  CHECK(vac.dim() == 5);
  CHECK(vac.populations().maxCoeff() == 0.0);

  auto exc = model::QuantumState::single_excitation(model::StateSpace::Full, 3, 2);
  CHECK(exc.dim() == 8);
  CHECK(exc.excited_population(2) == doctest::Approx(1.0));
  CHECK(exc.excited_population(0) == doctest::Approx(0.0));

  // Superpositions normalize whatever amplitudes arrive.
  auto sup = model::QuantumState::qubit_superposition(model::StateSpace::Sector, 4, 0,
                                                      Complex(3.0, 0.0), Complex(3.0, 0.0));
  CHECK(sup.norm_or_trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sup.excited_population(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("reduced qubit matrices follow the (g, e) convention") {
  const double s = 1.0 / std::sqrt(2.0);
  auto sup = model::QuantumState::qubit_superposition(model::StateSpace::Sector, 4, 0,
                                                      Complex(s, 0.0), Complex(0.0, s));
  const Eigen::Matrix2cd rho = sup.reduced_qubit(0);
  CHECK(rho(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rho(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
  // <g|rho|e> = amp_g * conj(amp_e) = s * (-i s) = -i/2.
  CHECK(rho(0, 1).real() == doctest::Approx(0.0));
  CHECK(rho(0, 1).imag() == doctest::Approx(-0.5).epsilon(1e-12));
  // Far qubit holds no coherence.
  const Eigen::Matrix2cd far = sup.reduced_qubit(3);
  CHECK(far(1, 1).real() == doctest::Approx(0.0));
  CHECK(std::abs(far(0, 1)) == doctest::Approx(0.0));
}

TEST_CASE("sector states embed into the full space") {
  auto exc = model::QuantumState::single_excitation(model::StateSpace::Sector, 3, 1);
  auto full = exc.to_full_space();
  CHECK(full.space() == model::StateSpace::Full);
  CHECK(full.dim() == 8);
  CHECK(std::abs(full.amplitudes()(model::full_index_of_excitation(1))) ==
        doctest::Approx(1.0));
}

TEST_CASE("state validation enforces norm, Hermiticity, and positivity") {
  Eigen::VectorXcd bad_amp = Eigen::VectorXcd::Zero(4);
  bad_amp(0) = 0.5;  // Norm 0.5.
  CHECK_THROWS_AS(model::QuantumState::pure(model::StateSpace::Full, 2, bad_amp).validate(),
                  ValidationError);

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
  rho(0, 0) = 1.0;
  rho(0, 1) = Complex(0.0, 0.3);
  rho(1, 0) = Complex(0.0, 0.3);  // Not conjugate: non-Hermitian.
  CHECK_THROWS_AS(model::QuantumState::mixed(model::StateSpace::Full, 2, rho), ValidationError);

  rho = Eigen::MatrixXcd::Zero(4, 4);
  rho(0, 0) = 1.4;
  rho(1, 1) = -0.4;  // Negative population.
  CHECK_THROWS_AS(model::QuantumState::mixed(model::StateSpace::Full, 2, rho).validate(),
                  ValidationError);
}

TEST_CASE("constant Hamiltonian wrapper checks Hermiticity and norm") {
  Eigen::MatrixXcd h(2, 2);
  h << 1.0, Complex(0.0, 2.0), Complex(0.0, -2.0), -1.0;
  model::ConstantHamiltonian wrapped(h);
  // Spectral norm of [[1, 2i], [-2i, -1]] is sqrt(5).
  CHECK(wrapped.norm_bound() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));

  h(0, 1) = Complex(0.0, 2.0);
  h(1, 0) = Complex(0.0, 2.0);
  CHECK_THROWS_AS(model::ConstantHamiltonian{h}, ValidationError);
}

TEST_CASE("lab Hamiltonian is Hermitian in every configuration") {
  auto chain = fixtures::device_chain();
  auto schedule = coupling::synthesize_schedule(chain, units::coupling_scale_mhz(84.0));
  auto program = model::ModulationProgram::from_schedule(schedule, chain.size());

  Eigen::MatrixXcd h;
  for (auto frame : {model::Frame::LabAbsolute, model::Frame::RotatingOperating}) {
    for (bool cr : {false, true}) {
      model::LabHamiltonian ham(chain, program, frame, cr);
      for (double t : {0.0, 0.37, 12.9, 83.4}) {
        ham.evaluate(t, h);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14 * h.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("norm bound dominates the instantaneous spectral norm") {
  auto chain = fixtures::device_chain();
  auto schedule = coupling::synthesize_schedule(chain, units::coupling_scale_mhz(84.0));
  auto program = model::ModulationProgram::from_schedule(schedule, chain.size());
  Eigen::MatrixXcd h;
  for (auto frame : {model::Frame::LabAbsolute, model::Frame::RotatingOperating}) {
    model::LabHamiltonian ham(chain, program, frame, true);
    for (double t = 0.0; t < 30.0; t += 1.7) {
      ham.evaluate(t, h);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= ham.norm_bound() * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("frame map: rotating H is the gauge transform of the absolute H") {
  auto chain = fixtures::device_chain();
  auto schedule = coupling::synthesize_schedule(chain, units::coupling_scale_mhz(84.0));
  auto program = model::ModulationProgram::from_schedule(schedule, chain.size());
  model::LabHamiltonian lab(chain, program, model::Frame::LabAbsolute, true);
  model::LabHamiltonian rot(chain, program, model::Frame::RotatingOperating, true);

  const int dim = lab.dim();
  const int n = chain.size();
  Eigen::MatrixXcd h_lab, h_rot;
  for (double t : {0.0, 0.41, 7.3}) {
    lab.evaluate(t, h_lab);
    rot.evaluate(t, h_rot);
    // theta_s = sum of operating angular frequencies of the excited bits.
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd omega_static = Eigen::VectorXd::Zero(dim);
    for (int s = 0; s < dim; ++s) {
      for (int q = 0; q < n; ++q) {
        if (s & (1 << q)) {
          const double w =
              units::rad_per_ns_from_ghz(chain.qubits[static_cast<std::size_t>(q)].operating_freq);
          theta(s) += w * t;
          omega_static(s) += w;
        }
      }
    }
    Eigen::MatrixXcd expected(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        const Complex phase = std::exp(Complex(0.0, theta(r) - theta(c)));
        expected(r, c) = phase * h_lab(r, c);
      }
      expected(r, r) -= omega_static(r);
    }
    CHECK((h_rot - expected).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("sector restriction refuses counter-rotating terms") {
  auto chain = fixtures::device_chain();
  auto schedule = coupling::synthesize_schedule(chain, units::coupling_scale_mhz(84.0));
  auto program = model::ModulationProgram::from_schedule(schedule, chain.size());
  CHECK_THROWS_AS(model::LabHamiltonian(chain, program, model::Frame::RotatingOperating, true,
                                        model::StateSpace::Sector),
                  ValidationError);
  CHECK_NOTHROW(model::LabHamiltonian(chain, program, model::Frame::RotatingOperating, false,
                                      model::StateSpace::Sector));
}

TEST_CASE("effective Hamiltonian carries the cached couplings") {
  auto chain = fixtures::device_chain();
  auto schedule = coupling::synthesize_schedule(chain, units::coupling_scale_mhz(84.0));
  const auto h = model::build_effective_hamiltonian(chain, schedule);
  REQUIRE(h.rows() == 5);
  CHECK(h.row(0).cwiseAbs().maxCoeff() == 0.0);  // Vacuum decouples.
  for (int j = 1; j <= 3; ++j) {
    const auto want = schedule.effective_couplings[static_cast<std::size_t>(j - 1)] *
                      units::rad_per_ns_from_mhz(1.0);
    const auto got = h(model::sector_index(j - 1), model::sector_index(j));
    CHECK(std::abs(got - want) < 1e-12 * std::abs(want));
  }
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("effective Hamiltonian enforces per-link resonance") {
  auto chain = fixtures::device_chain();
  auto schedule = coupling::synthesize_schedule(chain, units::coupling_scale_mhz(84.0));
  schedule.modulations[1].frequency += 0.5;  // Half a MHz off resonance.
  for (int j = 1; j <= 3; ++j) {             // Keep the coupling cache honest.
    schedule.effective_couplings[static_cast<std::size_t>(j - 1)] =
        coupling::effective_coupling(chain, schedule.modulations, j);
  }
  try {
    model::build_effective_hamiltonian(chain, schedule);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("link(s) 2") != std::string::npos);
  }
  // Unmodulated links are exempt from the check.
  schedule.modulations[1].amplitude = 0.0;
  schedule.effective_couplings[1] = 0.0;
  // Turning off the middle link also kills the downstream carrier factor,
  // so refresh the cache before validation-by-construction.
  schedule.effective_couplings[2] =
      coupling::effective_coupling(chain, schedule.modulations, 3);
  CHECK_NOTHROW(model::build_effective_hamiltonian(chain, schedule));
}

TEST_CASE("full-space embedding restricts back to the sector generator") {
  auto chain = fixtures::device_chain();
  auto schedule = coupling::synthesize_schedule(chain, units::coupling_scale_mhz(84.0));
  const auto h_sector = model::build_effective_hamiltonian(chain, schedule);
  const auto h_full = model::build_effective_hamiltonian_full(chain, schedule);
  REQUIRE(h_full.rows() == 16);
  const auto back = model::project_to_sector(h_full, chain.size());
  CHECK((back - h_sector).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("sector projection rejects operators that leave the sector") {
  auto chain = fixtures::device_chain();
  auto schedule = coupling::synthesize_schedule(chain, units::coupling_scale_mhz(84.0));
  const auto program = model::ModulationProgram::from_schedule(schedule, chain.size());
  model::LabHamiltonian ham(chain, program, model::Frame::RotatingOperating, true);
  Eigen::MatrixXcd h;
  ham.evaluate(0.3, h);  // Counter-rotating entries couple out of the sector.
  CHECK_THROWS_AS(model::project_to_sector(h, chain.size()), ValidationError);
}

TEST_CASE("modulation programs validate their shape") {
  auto chain = fixtures::device_chain();
  auto program = model::ModulationProgram::none(chain.size());
  CHECK_NOTHROW(program.validate(chain));
  program.per_qubit.pop_back();
  CHECK_THROWS_AS(program.validate(chain), ValidationError);
}

TEST_CASE("schedule validation recomputes the coupling cache") {
  auto chain = fixtures::device_chain();
  auto schedule = coupling::synthesize_schedule(chain, units::coupling_scale_mhz(84.0));
  CHECK_NOTHROW(schedule.validate(chain));
  schedule.effective_couplings[0] *= 1.01;  // Stale cache must be caught.
  CHECK_THROWS_AS(schedule.validate(chain), ValidationError);
}

}  // TEST_SUITE
