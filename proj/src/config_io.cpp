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

#include "paraqst/config_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "paraqst/errors.hpp"

namespace paraqst::config_io {

namespace {

using nlohmann::json;

// Rejects fields outside `allowed` so typos fail loudly instead of being
// silently ignored.
void require_known_fields(const json& j, const std::string& context,
                          std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ValidationError(context + ": expected a JSON object");
  }
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (item.key() == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError(context + ": unknown field \"" + item.key() + "\"");
    }
  }
}

const json& require_field(const json& j, const std::string& context, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw ValidationError(context + ": missing field \"" + std::string(name) + "\"");
  }
  return *it;
}

double require_number(const json& j, const std::string& context, const char* name) {
  const json& v = require_field(j, context, name);
  if (!v.is_number()) {
    throw ValidationError(context + ": field \"" + std::string(name) + "\" must be a number");
  }
  return v.get<double>();
}

double optional_number(const json& j, const std::string& context, const char* name,
                       double fallback) {
  auto it = j.find(name);
  if (it == j.end()) return fallback;
  if (!it->is_number()) {
    throw ValidationError(context + ": field \"" + std::string(name) + "\" must be a number");
  }
  return it->get<double>();
}

const json& require_array(const json& j, const std::string& context, const char* name) {
  const json& v = require_field(j, context, name);
  if (!v.is_array()) {
    throw ValidationError(context + ": field \"" + std::string(name) + "\" must be an array");
  }
  return v;
}

}  // namespace

void DeviceConfig::validate() const {
  chain.validate();
  if (crosstalk_correction) {
    const auto& m = *crosstalk_correction;
    if (m.rows() != m.cols() || m.rows() != chain.size()) {
      throw ValidationError("device config: crosstalk_correction must be " +
                            std::to_string(chain.size()) + "x" + std::to_string(chain.size()));
    }
    // Invertibility (and conditioning) check; throws on failure.
    calibration::CrosstalkMatrix::from_correction(m);
  }
  if (line_response.rise_time_ns <= 0.0 || line_response.ringing_decay_ns <= 0.0 ||
      line_response.ringing_freq_mhz <= 0.0) {
    throw ValidationError("device config: line_response times and frequency must be positive");
  }
  if (std::abs(line_response.ringing_amplitude) >= 1.0) {
    throw ValidationError("device config: |ringing_amplitude| must be below 1");
  }
}

json to_json(const model::QubitParams& q) {
  return json{{"sweet_spot_freq", q.sweet_spot_freq},
              {"operating_freq", q.operating_freq},
              {"t1", q.t1},
              {"t2_star", q.t2_star},
              {"readout_fid_g", q.readout_fid_g},
              {"readout_fid_e", q.readout_fid_e},
              {"thermal_pop", q.thermal_pop}};
}

json to_json(const model::ChainConfig& c) {
  json qubits = json::array();
  for (const auto& q : c.qubits) qubits.push_back(to_json(q));
  return json{{"qubits", std::move(qubits)}, {"static_couplings", c.static_couplings}};
}

json to_json(const model::ModulationSpec& m) {
  return json{{"amplitude", m.amplitude}, {"frequency", m.frequency}, {"phase", m.phase}};
}

json to_json(const model::TransferSchedule& s) {
  json mods = json::array();
  for (const auto& m : s.modulations) mods.push_back(to_json(m));
  json couplings = json::array();
  for (const auto& g : s.effective_couplings) {
    couplings.push_back(json::array({g.real(), g.imag()}));
  }
  return json{{"modulations", std::move(mods)},
              {"duration", s.duration},
              {"effective_couplings", std::move(couplings)}};
}

json to_json(const DeviceConfig& d) {
  json out;
  out["chain"] = to_json(d.chain);
  if (d.crosstalk_correction) {
    const auto& m = *d.crosstalk_correction;
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(std::move(row));
    }
    out["crosstalk_correction"] = std::move(rows);
  }
  out["line_response"] = json{{"rise_time_ns", d.line_response.rise_time_ns},
                              {"ringing_amplitude", d.line_response.ringing_amplitude},
                              {"ringing_freq_mhz", d.line_response.ringing_freq_mhz},
                              {"ringing_decay_ns", d.line_response.ringing_decay_ns}};
  if (!d.metadata.is_null()) out["metadata"] = d.metadata;
  return out;
}

model::QubitParams qubit_from_json(const json& j) {
  const std::string ctx = "qubit";
  require_known_fields(j, ctx,
                       {"sweet_spot_freq", "operating_freq", "t1", "t2_star", "readout_fid_g",
                        "readout_fid_e", "thermal_pop"});
  model::QubitParams q;
  q.sweet_spot_freq = require_number(j, ctx, "sweet_spot_freq");
  q.operating_freq = require_number(j, ctx, "operating_freq");
  q.t1 = require_number(j, ctx, "t1");
  q.t2_star = require_number(j, ctx, "t2_star");
  q.readout_fid_g = optional_number(j, ctx, "readout_fid_g", 1.0);
  q.readout_fid_e = optional_number(j, ctx, "readout_fid_e", 1.0);
  q.thermal_pop = optional_number(j, ctx, "thermal_pop", 0.0);
  return q;
}

model::ChainConfig chain_from_json(const json& j) {
  const std::string ctx = "chain";
  require_known_fields(j, ctx, {"qubits", "static_couplings"});
  model::ChainConfig c;
  for (const auto& q : require_array(j, ctx, "qubits")) {
    c.qubits.push_back(qubit_from_json(q));
  }
  for (const auto& g : require_array(j, ctx, "static_couplings")) {
    if (!g.is_number()) {
      throw ValidationError(ctx + ": static_couplings entries must be numbers");
    }
    c.static_couplings.push_back(g.get<double>());
  }
  c.validate();
  return c;
}

model::ModulationSpec modulation_from_json(const json& j) {
  const std::string ctx = "modulation";
  require_known_fields(j, ctx, {"amplitude", "frequency", "phase"});
  model::ModulationSpec m;
  m.amplitude = require_number(j, ctx, "amplitude");
  m.frequency = require_number(j, ctx, "frequency");
  m.phase = optional_number(j, ctx, "phase", 0.0);
  m.validate();
  return m;
}

model::TransferSchedule schedule_from_json(const json& j) {
  const std::string ctx = "schedule";
  require_known_fields(j, ctx, {"modulations", "duration", "effective_couplings"});
  model::TransferSchedule s;
  for (const auto& m : require_array(j, ctx, "modulations")) {
    s.modulations.push_back(modulation_from_json(m));
  }
  s.duration = require_number(j, ctx, "duration");
  for (const auto& g : require_array(j, ctx, "effective_couplings")) {
    if (!g.is_array() || g.size() != 2 || !g[0].is_number() || !g[1].is_number()) {
      throw ValidationError(ctx + ": effective_couplings entries must be [re, im] pairs");
    }
    s.effective_couplings.emplace_back(g[0].get<double>(), g[1].get<double>());
  }
  if (s.effective_couplings.size() != s.modulations.size()) {
    throw ValidationError(ctx + ": effective_couplings must match modulations in length");
  }
  return s;
}

DeviceConfig device_from_json(const json& j) {
  const std::string ctx = "device config";
  require_known_fields(j, ctx, {"chain", "crosstalk_correction", "line_response", "metadata"});
  DeviceConfig d;
  d.chain = chain_from_json(require_field(j, ctx, "chain"));
  if (auto it = j.find("crosstalk_correction"); it != j.end()) {
    if (!it->is_array()) {
      throw ValidationError(ctx + ": crosstalk_correction must be an array of rows");
    }
    const int n = static_cast<int>(it->size());
    Eigen::MatrixXd m(n, n);
    for (int r = 0; r < n; ++r) {
      const json& row = (*it)[r];
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        throw ValidationError(ctx + ": crosstalk_correction rows must have equal length");
      }
      for (int c = 0; c < n; ++c) {
        if (!row[c].is_number()) {
          throw ValidationError(ctx + ": crosstalk_correction entries must be numbers");
        }
        m(r, c) = row[c].get<double>();
      }
    }
    d.crosstalk_correction = std::move(m);
  }
  if (auto it = j.find("line_response"); it != j.end()) {
    const std::string lctx = "line_response";
    require_known_fields(*it, lctx,
                         {"rise_time_ns", "ringing_amplitude", "ringing_freq_mhz",
                          "ringing_decay_ns"});
    d.line_response.rise_time_ns =
        optional_number(*it, lctx, "rise_time_ns", d.line_response.rise_time_ns);
    d.line_response.ringing_amplitude =
        optional_number(*it, lctx, "ringing_amplitude", d.line_response.ringing_amplitude);
    d.line_response.ringing_freq_mhz =
        optional_number(*it, lctx, "ringing_freq_mhz", d.line_response.ringing_freq_mhz);
    d.line_response.ringing_decay_ns =
        optional_number(*it, lctx, "ringing_decay_ns", d.line_response.ringing_decay_ns);
  }
  if (auto it = j.find("metadata"); it != j.end()) d.metadata = *it;
  d.validate();
  return d;
}

std::string default_device_json() {
  // Four-transmon chain characterization: transition frequencies in GHz,
  // couplings in MHz, coherence times in us.  Q1 operates ~60 MHz below its
  // sweet spot so that successive detunings alternate in sign; the other
  // qubits sit at their sweet spots.  crosstalk_correction is the measured
  // flux-line orthogonalization matrix; metadata records readout-chain
  // characterization that the simulator itself does not consume.
  return R"json({
  "chain": {
    "qubits": [
      {"sweet_spot_freq": 4.8354, "operating_freq": 4.8354, "t1": 17.5, "t2_star": 6.1,
       "readout_fid_g": 0.963, "readout_fid_e": 0.898, "thermal_pop": 0.02},
      {"sweet_spot_freq": 5.1802, "operating_freq": 5.1202, "t1": 21.1, "t2_star": 4.3,
       "readout_fid_g": 0.951, "readout_fid_e": 0.869, "thermal_pop": 0.02},
      {"sweet_spot_freq": 4.9169, "operating_freq": 4.9169, "t1": 19.8, "t2_star": 4.8,
       "readout_fid_g": 0.942, "readout_fid_e": 0.869, "thermal_pop": 0.02},
      {"sweet_spot_freq": 5.1916, "operating_freq": 5.1916, "t1": 18.0, "t2_star": 3.3,
       "readout_fid_g": 0.939, "readout_fid_e": 0.858, "thermal_pop": 0.02}
    ],
    "static_couplings": [16.68, 17.50, 17.52]
  },
  "crosstalk_correction": [
    [ 0.9934,  0.0822,  0.0210, 0.0158],
    [-0.0714,  0.9843,  0.0595, 0.0361],
    [-0.0222, -0.1278,  0.9888, 0.0740],
    [-0.0087, -0.0570, -0.0414, 0.9447]
  ],
  "line_response": {
    "rise_time_ns": 2.0,
    "ringing_amplitude": 0.05,
    "ringing_freq_mhz": 100.0,
    "ringing_decay_ns": 10.0
  },
  "metadata": {
    "readout_freqs_ghz": [6.8389, 6.8636, 6.8794, 6.9014],
    "dispersive_shift_mhz": [0.17, 0.26, 0.20, 0.20],
    "resonator_linewidth_mhz": [0.88, 1.06, 1.23, 0.88],
    "sweet_spot_t1_us": [22.2, 18.5, 25.1, 23.4],
    "sweet_spot_t2_star_us": [23.3, 26.5, 17.3, 10.3],
    "echo_t2_us": [24.0, 41.1, 29.3, 32.2]
  }
})json";
}

DeviceConfig default_device_config() {
  return device_from_json(json::parse(default_device_json()));
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("cannot parse " + path.string() + ": " + e.what());
  }
  return j;
}

void save_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << j.dump(2) << "\n";
}

DeviceConfig load_device_config(const std::filesystem::path& path) {
  return device_from_json(load_json(path));
}

model::TransferSchedule load_schedule(const std::filesystem::path& path) {
  return schedule_from_json(load_json(path));
}

void save_schedule(const model::TransferSchedule& s, const std::filesystem::path& path) {
  save_json(to_json(s), path);
}

}  // namespace paraqst::config_io
