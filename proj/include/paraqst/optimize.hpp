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

#include <functional>
#include <vector>

namespace paraqst::optimize {

/// Bisection root of f on [lo, hi]; f(lo) and f(hi) must bracket a sign
/// change.  Converges to `rel_tol` relative (plus a small absolute floor).
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol = 1e-10);

/// Golden-section minimum of f on [lo, hi] to relative tolerance `rel_tol`.
double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double rel_tol = 1e-8);

struct NelderMeadOptions {
  int max_iterations = 500;
  double tolerance = 1e-4;     ///< Relative simplex diameter at convergence.
  double initial_step = 0.02;  ///< Relative perturbation building the simplex.
  // Standard coefficients.
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> trace;  ///< Best value after each iteration.
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimization.  `lower`/`upper` (if non-empty)
/// are hard box bounds enforced by clamping trial points.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const NelderMeadOptions& options = {},
                             const std::vector<double>& lower = {},
                             const std::vector<double>& upper = {});

}  // namespace paraqst::optimize
