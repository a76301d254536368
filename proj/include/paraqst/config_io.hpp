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

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "paraqst/calibration.hpp"
#include "paraqst/model.hpp"

namespace paraqst::config_io {

/// Full device description: the chain plus control-hardware calibration.
struct DeviceConfig {
  model::ChainConfig chain;
  std::optional<Eigen::MatrixXd> crosstalk_correction;  ///< Correction matrix.
  calibration::LineResponse line_response;
  nlohmann::json metadata;  ///< Recorded but uninterpreted extras.

  void validate() const;
};

// JSON serialization.  Field names match the domain types; frequencies are
// MHz except qubit frequencies (GHz); times are ns for schedules and us for
// coherence.  Unknown fields throw ValidationError naming the field.

nlohmann::json to_json(const model::QubitParams& q);
nlohmann::json to_json(const model::ChainConfig& c);
nlohmann::json to_json(const model::ModulationSpec& m);
nlohmann::json to_json(const model::TransferSchedule& s);
nlohmann::json to_json(const DeviceConfig& d);

model::QubitParams qubit_from_json(const nlohmann::json& j);
model::ChainConfig chain_from_json(const nlohmann::json& j);
model::ModulationSpec modulation_from_json(const nlohmann::json& j);
model::TransferSchedule schedule_from_json(const nlohmann::json& j);
DeviceConfig device_from_json(const nlohmann::json& j);

/// The bundled four-qubit device (chain parameters, readout fidelities,
/// thermal populations, crosstalk correction, line-response defaults).
DeviceConfig default_device_config();
/// The bundled device as JSON text (what `--config` would have contained).
std::string default_device_json();

DeviceConfig load_device_config(const std::filesystem::path& path);
void save_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json load_json(const std::filesystem::path& path);

model::TransferSchedule load_schedule(const std::filesystem::path& path);
void save_schedule(const model::TransferSchedule& s, const std::filesystem::path& path);

}  // namespace paraqst::config_io
