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
#include "paraqst/units.hpp"

using namespace paraqst;

namespace {
constexpr double kPi = units::kPi;
}

TEST_SUITE("coupling") {

TEST_CASE("bessel_j reproduces frozen power-series values") {
  // Values pinned from two independent oracles (series + quadrature).
  CHECK(coupling::bessel_j(0, 1.0) == doctest::Approx(0.76519768655796655).epsilon(1e-14));
  CHECK(coupling::bessel_j(1, 1.0) == doctest::Approx(0.44005058574493352).epsilon(1e-14));
  CHECK(coupling::bessel_j(2, 1.5) == doctest::Approx(0.23208767214421473).epsilon(1e-14));
  CHECK(coupling::bessel_j(0, 0.5) == doctest::Approx(0.9384698072408129).epsilon(1e-14));
  CHECK(coupling::bessel_j(1, 2.0) == doctest::Approx(0.57672480775687339).epsilon(1e-14));
  CHECK(std::abs(coupling::bessel_j(0, 2.4048255576957728)) < 1e-14);  // First zero.
}

TEST_CASE("bessel_j agrees with both oracles on a grid") {
  for (int n = 0; n <= 3; ++n) {
    for (double x = 0.0; x <= 10.0; x += 0.37) {
      const double series = oracles::bessel_series(n, x);
      const double quad = oracles::bessel_quadrature(n, x);
      CHECK(coupling::bessel_j(n, x) == doctest::Approx(series).epsilon(1e-12));
      CHECK(coupling::bessel_j(n, x) == doctest::Approx(quad).epsilon(1e-9));
    }
  }
}

TEST_CASE("bessel_j reflection for negative arguments") {
  CHECK(coupling::bessel_j(0, -1.3) == doctest::Approx(coupling::bessel_j(0, 1.3)));
  CHECK(coupling::bessel_j(1, -1.3) == doctest::Approx(-coupling::bessel_j(1, 1.3)));
  CHECK(coupling::bessel_j(2, -1.3) == doctest::Approx(coupling::bessel_j(2, 1.3)));
}

TEST_CASE("bessel_j rejects out-of-range inputs") {
  CHECK_THROWS_AS(coupling::bessel_j(-1, 1.0), ValidationError);
  CHECK_THROWS_AS(coupling::bessel_j(0, 51.0), ValidationError);
}

TEST_CASE("J1 peak constants match the oracle-refined maximum") {
  CHECK(coupling::bessel_j(1, coupling::kJ1PeakX) ==
        doctest::Approx(coupling::kJ1PeakValue).epsilon(1e-14));
  // It is a maximum: neighbours on both sides are smaller.
  CHECK(coupling::bessel_j(1, coupling::kJ1PeakX - 1e-4) < coupling::kJ1PeakValue);
  CHECK(coupling::bessel_j(1, coupling::kJ1PeakX + 1e-4) < coupling::kJ1PeakValue);
}

TEST_CASE("effective coupling magnitude and sideband phases") {
  auto chain = fixtures::synthetic_chain(4);
  std::vector<model::ModulationSpec> mods(3);
  const double phi1 = 0.3, phi2 = -0.7, phi3 = 1.1;
  mods[0] = {120.0, std::abs(chain.detuning_mhz(1)), phi1};
  mods[1] = {100.0, std::abs(chain.detuning_mhz(2)), phi2};
  mods[2] = {140.0, std::abs(chain.detuning_mhz(3)), phi3};

  const double a1 = mods[0].index(), a2 = mods[1].index(), a3 = mods[2].index();
  const auto g1 = coupling::effective_coupling(chain, mods, 1);
  const auto g2 = coupling::effective_coupling(chain, mods, 2);
  const auto g3 = coupling::effective_coupling(chain, mods, 3);

  CHECK(std::abs(g1) ==
        doctest::Approx(17.0 * oracles::bessel_series(1, a1)).epsilon(1e-12));
  CHECK(std::abs(g2) == doctest::Approx(17.0 * oracles::bessel_series(1, a2) *
                                        oracles::bessel_series(0, a1))
                            .epsilon(1e-12));
  CHECK(std::abs(g3) == doctest::Approx(17.0 * oracles::bessel_series(1, a3) *
                                        oracles::bessel_series(0, a2))
                            .epsilon(1e-12));
  // First link carries phi + pi/2; even links carry -(phi - pi/2); odd links
  // past the first carry phi + pi/2 again.
  CHECK(std::arg(g1) == doctest::Approx(phi1 + kPi / 2).epsilon(1e-12));
  CHECK(std::arg(g2) == doctest::Approx(-(phi2 - kPi / 2)).epsilon(1e-12));
  CHECK(std::arg(g3) == doctest::Approx(phi3 + kPi / 2).epsilon(1e-12));
}

TEST_CASE("unmodulated links have zero effective coupling") {
  auto chain = fixtures::synthetic_chain(3);
  std::vector<model::ModulationSpec> mods(2);
  mods[1] = {100.0, std::abs(chain.detuning_mhz(2)), 0.0};
  CHECK(std::abs(coupling::effective_coupling(chain, mods, 1)) == 0.0);
  CHECK(std::abs(coupling::effective_coupling(chain, mods, 2)) > 0.0);
}

TEST_CASE("invert_link recovers the index that produces a target") {
  const double g = 17.0;
  for (double target : {0.5, 2.0, 5.0, 9.0}) {
    const double alpha = coupling::invert_link(g, target, 0.0, 1);
    CHECK(g * coupling::bessel_j(1, alpha) == doctest::Approx(target).epsilon(1e-9));
    CHECK(alpha <= coupling::kJ1PeakX);
  }
  // Upstream carrier J0 shrinks the reachable range.
  const double alpha_up = 1.2;
  const double carrier = coupling::bessel_j(0, alpha_up);
  const double alpha = coupling::invert_link(g, 4.0, alpha_up, 2);
  CHECK(g * coupling::bessel_j(1, alpha) * carrier == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("invert_link reports headroom when the target is unreachable") {
  const double g = 17.0;
  const double max_reachable = g * coupling::kJ1PeakValue;
  try {
    coupling::invert_link(g, max_reachable * 1.05, 0.0, 1);
    FAIL("expected InfeasibleScheduleError");
  } catch (const InfeasibleScheduleError& e) {
    REQUIRE(e.headroom.size() == 1);
    CHECK(e.headroom[0].link == 1);
    CHECK(e.headroom[0].target_mhz == doctest::Approx(max_reachable * 1.05));
    CHECK(e.headroom[0].maximum_mhz == doctest::Approx(max_reachable).epsilon(1e-12));
  }
}

TEST_CASE("synthesized schedule realizes the mirror profile") {
  auto chain = fixtures::device_chain();
  const double tau = 84.0;
  const double scale = units::coupling_scale_mhz(tau);
  const auto schedule = coupling::synthesize_schedule(chain, scale);

  REQUIRE(schedule.links() == 3);
  CHECK(schedule.duration == doctest::Approx(tau));
  schedule.validate(chain);
  CHECK(schedule.mirror_symmetric());

  const double root3 = std::sqrt(3.0);
  CHECK(std::abs(schedule.effective_couplings[0]) ==
        doctest::Approx(scale * root3).epsilon(1e-9));
  CHECK(std::abs(schedule.effective_couplings[1]) ==
        doctest::Approx(scale * 2.0).epsilon(1e-9));
  CHECK(std::abs(schedule.effective_couplings[2]) ==
        doctest::Approx(scale * root3).epsilon(1e-9));
  for (int j = 1; j <= 3; ++j) {
    CHECK(schedule.modulations[static_cast<std::size_t>(j - 1)].frequency ==
          doctest::Approx(std::abs(chain.detuning_mhz(j))).epsilon(1e-15));
  }
}

TEST_CASE("synthesis scales to longer chains") {
  for (int n : {2, 3, 6, 8}) {
    auto chain = fixtures::synthetic_chain(n);
    const double scale = 1.5;
    const auto schedule = coupling::synthesize_schedule(chain, scale);
    schedule.validate(chain);
    for (int j = 1; j < n; ++j) {
      const double want = scale * std::sqrt(static_cast<double>(j) * (n - j));
      CHECK(std::abs(schedule.effective_couplings[static_cast<std::size_t>(j - 1)]) ==
            doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("synthesis failure lists every saturated link") {
  auto chain = fixtures::device_chain();
  // 250/tau far above what J1's peak allows on any link.
  try {
    coupling::synthesize_schedule(chain, 12.0);
    FAIL("expected InfeasibleScheduleError");
  } catch (const InfeasibleScheduleError& e) {
    REQUIRE(!e.headroom.empty());
    for (const auto& h : e.headroom) {
      CHECK(h.target_mhz > h.maximum_mhz);
      CHECK(h.link >= 1);
      CHECK(h.link <= 3);
    }
    // The bottleneck middle link (coefficient 2) must be reported.
    bool middle = false;
    for (const auto& h : e.headroom) middle |= h.link == 2;
    CHECK(middle);
  }
}

TEST_CASE("synthesis requires alternating detunings") {
  auto chain = fixtures::synthetic_chain(4);
  chain.qubits[2].operating_freq = chain.qubits[1].operating_freq + 0.1;
  chain.qubits[2].sweet_spot_freq = chain.qubits[2].operating_freq;
  chain.qubits[3].operating_freq = chain.qubits[2].operating_freq + 0.1;  // Same sign.
  chain.qubits[3].sweet_spot_freq = chain.qubits[3].operating_freq;
  CHECK_THROWS_AS(coupling::synthesize_schedule(chain, 2.0), ValidationError);
}

TEST_CASE("refine_schedule never returns a worse schedule") {
  auto chain = fixtures::device_chain();
  auto schedule = coupling::synthesize_schedule(chain, units::coupling_scale_mhz(84.0));
  // Objective: distance of the middle link's frequency from a shifted target.
  const double target = schedule.modulations[1].frequency + 1.0;
  auto objective = [&](const model::TransferSchedule& s) {
    const double d = s.modulations[1].frequency - target;
    return d * d;
  };
  coupling::RefineOptions options;
  options.max_iterations = 200;
  const auto initial = objective(schedule);
  const auto result = coupling::refine_schedule(chain, schedule, objective, options);
  CHECK(result.initial_objective == doctest::Approx(initial));
  CHECK(result.final_objective <= initial + 1e-15);
  CHECK(result.final_objective < 1e-4);  // The shifted target is reachable in-box.
  result.schedule.validate(chain);      // Cache stays consistent after refinement.
}

}  // TEST_SUITE
