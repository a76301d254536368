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

#include <stdexcept>
#include <string>
#include <vector>

namespace paraqst {

/// Base class for all paraqst exceptions.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when inputs violate a documented precondition or invariant
/// (bad configuration, unphysical parameters, malformed requests).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Raised when a numerical routine fails to meet its accuracy contract
/// (non-convergence, ill-conditioning, failed fits).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

/// Per-link report attached to InfeasibleScheduleError.
struct LinkHeadroom {
  int link = 0;            ///< Link index j (couples qubits j-1 and j).
  double target_mhz = 0;   ///< Requested |g'_j| in MHz.
  double maximum_mhz = 0;  ///< Largest achievable |g'_j| in MHz.
};

/// Raised when a requested effective coupling exceeds what any modulation
/// index on the first Bessel branch can deliver.  Carries the full
/// per-link headroom report so callers can show which links are limiting.
class InfeasibleScheduleError : public ValidationError {
 public:
  InfeasibleScheduleError(const std::string& what, std::vector<LinkHeadroom> report)
      : ValidationError(what), headroom(std::move(report)) {}

  std::vector<LinkHeadroom> headroom;
};

}  // namespace paraqst
