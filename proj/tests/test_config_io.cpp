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
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "paraqst/config_io.hpp"
#include "paraqst/coupling.hpp"
#include "paraqst/errors.hpp"

using namespace paraqst;
using nlohmann::json;

namespace {

// Runs `fn`, expecting a ValidationError, and returns its message.
template <typename Fn>
std::string validation_message(Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "<no ValidationError thrown>";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("bundled device config matches the characterization") {
  const auto cfg = config_io::default_device_config();
  cfg.validate();
  REQUIRE(cfg.chain.size() == 4);
  REQUIRE(cfg.chain.links() == 3);

  const double op[4] = {4.8354, 5.1202, 4.9169, 5.1916};
  const double t1[4] = {17.5, 21.1, 19.8, 18.0};
  const double t2[4] = {6.1, 4.3, 4.8, 3.3};
  for (int q = 0; q < 4; ++q) {
    CHECK(cfg.chain.qubits[q].operating_freq == doctest::Approx(op[q]).epsilon(1e-12));
    CHECK(cfg.chain.qubits[q].t1 == doctest::Approx(t1[q]).epsilon(1e-12));
    CHECK(cfg.chain.qubits[q].t2_star == doctest::Approx(t2[q]).epsilon(1e-12));
    CHECK(cfg.chain.qubits[q].thermal_pop == doctest::Approx(0.02).epsilon(1e-12));
  }
  // Only the second qubit sits away from its sweet spot (60 MHz below), which
  // is what makes successive detunings alternate in sign.
  CHECK(cfg.chain.qubits[1].sweet_spot_freq - cfg.chain.qubits[1].operating_freq ==
        doctest::Approx(0.060).epsilon(1e-9));
  CHECK(cfg.chain.qubits[0].sweet_spot_freq == cfg.chain.qubits[0].operating_freq);
  CHECK_NOTHROW(cfg.chain.require_alternating_detunings());
  CHECK(cfg.chain.detuning_mhz(1) == doctest::Approx(284.8).epsilon(1e-9));
  CHECK(cfg.chain.detuning_mhz(2) == doctest::Approx(-203.3).epsilon(1e-9));
  CHECK(cfg.chain.detuning_mhz(3) == doctest::Approx(274.7).epsilon(1e-9));

  CHECK(cfg.chain.static_couplings == std::vector<double>{16.68, 17.50, 17.52});
  REQUIRE(cfg.crosstalk_correction.has_value());
  CHECK(cfg.crosstalk_correction->rows() == 4);
  CHECK((*cfg.crosstalk_correction)(0, 0) == doctest::Approx(0.9934));
  CHECK(cfg.line_response.rise_time_ns == 2.0);
  CHECK(cfg.metadata.contains("readout_freqs_ghz"));
}

TEST_CASE("device serialization is idempotent") {
  const auto cfg = config_io::default_device_config();
  const json first = config_io::to_json(cfg);
  // Matches the bundled text structurally.
  CHECK(first == json::parse(config_io::default_device_json()));
  // And survives a parse/serialize cycle unchanged.
  const auto reparsed = config_io::device_from_json(first);
  CHECK(config_io::to_json(reparsed) == first);
}

TEST_CASE("schedule serialization round-trips exactly") {
  const auto cfg = config_io::default_device_config();
  const auto schedule = coupling::synthesize_schedule(cfg.chain, 250.0 / 84.0);
  const json j = config_io::to_json(schedule);
  const auto back = config_io::schedule_from_json(j);
  back.validate(cfg.chain);
  CHECK(back.duration == schedule.duration);
  REQUIRE(back.links() == schedule.links());
  for (int i = 0; i < schedule.links(); ++i) {
    CHECK(back.modulations[i].amplitude == schedule.modulations[i].amplitude);
    CHECK(back.modulations[i].frequency == schedule.modulations[i].frequency);
    CHECK(back.modulations[i].phase == schedule.modulations[i].phase);
    CHECK(back.effective_couplings[i] == schedule.effective_couplings[i]);
  }
  CHECK(config_io::to_json(back) == j);
}

TEST_CASE("unknown fields are rejected by name") {
  const json base = json::parse(config_io::default_device_json());

  auto j = base;
  j["chain"]["qubits"][0]["t2"] = 5.0;
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "unknown field \"t2\""));

  j = base;
  j["chain"]["coupling_units"] = "MHz";
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "unknown field \"coupling_units\""));

  j = base;
  j["device_id"] = 7;
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "unknown field \"device_id\""));

  j = base;
  j["line_response"]["overshoot"] = 0.1;
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "unknown field \"overshoot\""));

  const auto cfg = config_io::default_device_config();
  const auto schedule = coupling::synthesize_schedule(cfg.chain, 250.0 / 84.0);
  json s = config_io::to_json(schedule);
  s["tau"] = 84.0;
  CHECK(contains(validation_message([&] { config_io::schedule_from_json(s); }),
                 "unknown field \"tau\""));

  s = config_io::to_json(schedule);
  s["modulations"][1]["detuning"] = 1.0;
  CHECK(contains(validation_message([&] { config_io::schedule_from_json(s); }),
                 "unknown field \"detuning\""));
}

TEST_CASE("missing and mistyped fields are rejected") {
  const json base = json::parse(config_io::default_device_json());

  auto j = base;
  j.erase("chain");
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "missing field \"chain\""));

  j = base;
  j["chain"]["qubits"][2].erase("t1");
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "missing field \"t1\""));

  j = base;
  j["chain"]["qubits"][0]["t1"] = "20";
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "must be a number"));

  j = base;
  j["chain"]["static_couplings"][1] = "strong";
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "static_couplings entries must be numbers"));

  const auto cfg = config_io::default_device_config();
  const auto schedule = coupling::synthesize_schedule(cfg.chain, 250.0 / 84.0);
  json s = config_io::to_json(schedule);
  s["effective_couplings"][0] = 1.0;
  CHECK(contains(validation_message([&] { config_io::schedule_from_json(s); }),
                 "[re, im]"));

  s = config_io::to_json(schedule);
  s["effective_couplings"].erase(2);
  CHECK(contains(validation_message([&] { config_io::schedule_from_json(s); }),
                 "must match modulations"));
}

TEST_CASE("device validation rejects inconsistent hardware blocks") {
  const json base = json::parse(config_io::default_device_json());

  auto j = base;
  j["crosstalk_correction"] = json::array({json::array({1.0, 0.0}), json::array({0.0, 1.0})});
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }), "4x4"));

  j = base;
  j["crosstalk_correction"][2] = json::array({1.0, 2.0});
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "equal length"));

  j = base;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) j["crosstalk_correction"][r][c] = 1.0;
  CHECK_THROWS_AS(config_io::device_from_json(j), NumericalError);

  j = base;
  j["line_response"]["rise_time_ns"] = -1.0;
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "line_response"));

  j = base;
  j["line_response"]["ringing_amplitude"] = 1.5;
  CHECK(contains(validation_message([&] { config_io::device_from_json(j); }),
                 "ringing_amplitude"));
}

TEST_CASE("configs and schedules round-trip through files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "paraqst_config_io_test";
  fs::create_directories(dir);

  const auto cfg = config_io::default_device_config();
  const fs::path cfg_path = dir / "device.json";
  config_io::save_json(config_io::to_json(cfg), cfg_path);
  const auto loaded = config_io::load_device_config(cfg_path);
  CHECK(config_io::to_json(loaded) == config_io::to_json(cfg));

  const auto schedule = coupling::synthesize_schedule(cfg.chain, 250.0 / 84.0);
  const fs::path sched_path = dir / "schedule.json";
  config_io::save_schedule(schedule, sched_path);
  const auto back = config_io::load_schedule(sched_path);
  CHECK(config_io::to_json(back) == config_io::to_json(schedule));

  CHECK(contains(validation_message([&] { config_io::load_json(dir / "absent.json"); }),
                 "cannot open"));
  const fs::path broken = dir / "broken.json";
  std::ofstream(broken) << "{not json";
  CHECK(contains(validation_message([&] { config_io::load_json(broken); }), "cannot parse"));

  fs::remove_all(dir);
}

}  // TEST_SUITE
