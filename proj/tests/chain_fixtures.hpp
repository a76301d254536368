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

#include <vector>

#include "paraqst/config_io.hpp"
#include "paraqst/model.hpp"

namespace fixtures {

/// The bundled four-qubit device.
inline paraqst::model::ChainConfig device_chain() {
  return paraqst::config_io::default_device_config().chain;
}

/// A synthetic N-qubit chain with alternating +-250 / -200 MHz detunings,
/// uniform 17 MHz couplings, and round coherence numbers.
inline paraqst::model::ChainConfig synthetic_chain(int n) {
  paraqst::model::ChainConfig chain;
  double freq = 5.0;
  for (int q = 0; q < n; ++q) {
    paraqst::model::QubitParams p;
    p.sweet_spot_freq = freq;
    p.operating_freq = freq;
    p.t1 = 20.0;
    p.t2_star = 5.0;
    p.readout_fid_g = 0.96;
    p.readout_fid_e = 0.90;
    chain.qubits.push_back(p);
    freq += (q % 2 == 0) ? 0.25 : -0.20;
  }
  for (int j = 1; j < n; ++j) chain.static_couplings.push_back(17.0);
  return chain;
}

}  // namespace fixtures
