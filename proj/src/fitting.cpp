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

#include "paraqst/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "paraqst/errors.hpp"
#include "paraqst/optimize.hpp"
#include "paraqst/units.hpp"

namespace paraqst::fitting {

namespace {

// Minimum population swing and minimum phase coverage (of 2 Omega t) below
// which an oscillation fit is rejected as unsupported by the data.
constexpr double kMinOscillationSpan = 0.02;
constexpr double kMinPhaseCoverage = 2.4;  // rad

struct LinearFit2 {
  double c0 = 0.0, c1 = 0.0, sse = std::numeric_limits<double>::infinity();
};

// Least squares y ~ c0 + c1 * b(t) for a fixed basis column b.
template <typename Basis>
LinearFit2 linear_fit2(std::span<const double> t, std::span<const double> y, Basis basis) {
  const std::size_t n = t.size();
  double sb = 0, sbb = 0, sy = 0, sby = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = basis(t[i]);
    sb += b;
    sbb += b * b;
    sy += y[i];
    sby += b * y[i];
  }
  const double nn = static_cast<double>(n);
  const double det = nn * sbb - sb * sb;
  LinearFit2 fit;
  if (std::abs(det) < 1e-14 * std::max(1.0, nn * sbb)) return fit;  // degenerate basis
  fit.c1 = (nn * sby - sb * sy) / det;
  fit.c0 = (sy - fit.c1 * sb) / nn;
  fit.sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.c0 - fit.c1 * basis(t[i]);
    fit.sse += r * r;
  }
  return fit;
}

}  // namespace

OscillationFit fit_population_oscillation(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (n != y.size()) throw ValidationError("oscillation fit: size mismatch");
  if (n < 8) throw ValidationError("oscillation fit: need at least 8 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(t[i] > t[i - 1])) throw ValidationError("oscillation fit: times must increase");

  const double y_min = *std::min_element(y.begin(), y.end());
  const double y_max = *std::max_element(y.begin(), y.end());
  if (y_max - y_min < kMinOscillationSpan)
    throw NumericalError("oscillation fit: population swing " +
                         std::to_string(y_max - y_min) +
                         " is too small to support a frequency estimate");

  const double t_span = t.back() - t.front();
  double dt_min = t_span;
  for (std::size_t i = 1; i < n; ++i) dt_min = std::min(dt_min, t[i] - t[i - 1]);
  const double omega_lo = 0.5 * kMinPhaseCoverage / t_span;
  const double omega_hi = 0.4 * units::kPi / dt_min;  // keep 2 Omega dt below 0.8 pi
  if (omega_hi <= omega_lo)
    throw NumericalError("oscillation fit: time grid cannot bracket a frequency");

  auto sse_at = [&](double omega) {
    return linear_fit2(t, y, [omega](double tt) { return std::cos(2.0 * omega * tt); }).sse;
  };

  // The correlation peak has half-width ~pi/(2 t_span) in omega, so long
  // windows need a finer scan or the peak slips between grid nodes and the
  // refinement polishes a sidelobe instead.
  const int grid =
      std::clamp(static_cast<int>(std::ceil((omega_hi - omega_lo) * 4.0 * t_span / units::kPi)),
                 1200, 50000);
  double best_omega = omega_lo;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double omega = omega_lo + (omega_hi - omega_lo) * k / grid;
    const double sse = sse_at(omega);
    if (sse < best_sse) {
      best_sse = sse;
      best_omega = omega;
    }
  }
  const double step = (omega_hi - omega_lo) / grid;
  const double refined = optimize::golden_minimize(sse_at, std::max(omega_lo, best_omega - step),
                                                   std::min(omega_hi, best_omega + step), 1e-12);

  const auto fit = linear_fit2(t, y, [refined](double tt) { return std::cos(2.0 * refined * tt); });
  double sst = 0.0;
  const double mean = [&] {
    double s = 0;
    for (double v : y) s += v;
    return s / static_cast<double>(n);
  }();
  for (double v : y) sst += (v - mean) * (v - mean);
  const double r2 = sst > 0 ? 1.0 - fit.sse / sst : 0.0;
  if (r2 < 0.5)
    throw NumericalError("oscillation fit: no coherent oscillation found (R^2 = " +
                         std::to_string(r2) + ")");
  if (refined < omega_lo * 1.02)
    throw NumericalError(
        "oscillation fit: window covers less than the minimum usable fraction of a period");

  OscillationFit out;
  out.omega = refined;
  out.offset = fit.c0;
  out.amplitude = fit.c1;
  out.residual = std::sqrt(fit.sse / static_cast<double>(n));
  out.r_squared = r2;
  return out;
}

PowerDecayFit fit_power_decay(std::span<const int> m, std::span<const double> f, double floor) {
  const std::size_t n = m.size();
  if (n != f.size()) throw ValidationError("power-decay fit: size mismatch");
  if (n < 3) throw ValidationError("power-decay fit: need at least 3 samples");
  for (std::size_t i = 0; i < n; ++i)
    if (m[i] < 0) throw ValidationError("power-decay fit: step counts must be >= 0");

  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = f[i] - floor;

  auto profiled = [&](double p) {
    double sww = 0, swr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = std::pow(p, m[i]);
      sww += w * w;
      swr += w * r[i];
    }
    const double a = sww > 1e-300 ? swr / sww : 0.0;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = r[i] - a * std::pow(p, m[i]);
      sse += e * e;
    }
    return std::pair{sse, a};
  };

  const double best_p = optimize::golden_minimize(
      [&](double p) { return profiled(p).first; }, 0.3, 1.0, 1e-10);
  const auto [sse, a] = profiled(best_p);

  PowerDecayFit out;
  out.per_step = best_p;
  out.amplitude = a;
  out.residual = std::sqrt(sse / static_cast<double>(n));
  return out;
}

ExponentialDecayFit fit_exponential_decay(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (n != y.size()) throw ValidationError("exponential fit: size mismatch");
  if (n < 4) throw ValidationError("exponential fit: need at least 4 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(t[i] > t[i - 1])) throw ValidationError("exponential fit: times must increase");

  ExponentialDecayFit out;
  const double y_min = *std::min_element(y.begin(), y.end());
  const double y_max = *std::max_element(y.begin(), y.end());
  const double scale = std::max({1.0, std::abs(y_min), std::abs(y_max)});
  if (y_max - y_min < 1e-9 * scale) {
    // Flat data: no resolvable decay.
    double mean = 0;
    for (double v : y) mean += v;
    out.saturated = true;
    out.decay_time = kNoDecaySentinel;
    out.amplitude = 0.0;
    out.offset = mean / static_cast<double>(n);
    out.residual = 0.0;
    return out;
  }

  auto fit_at = [&](double tau) {
    return linear_fit2(t, y, [tau](double tt) { return std::exp(-tt / tau); });
  };
  const double t_span = t.back() - t.front();
  const double log_lo = std::log10(std::max(1e-6, t_span * 1e-3));
  const double log_hi = std::log10(kNoDecaySentinel);
  constexpr int kGrid = 600;
  double best_log = log_lo;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kGrid; ++k) {
    const double lg = log_lo + (log_hi - log_lo) * k / kGrid;
    const double sse = fit_at(std::pow(10.0, lg)).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_log = lg;
    }
  }
  const double step = (log_hi - log_lo) / kGrid;
  const double refined_log = optimize::golden_minimize(
      [&](double lg) { return fit_at(std::pow(10.0, lg)).sse; },
      std::max(log_lo, best_log - step), std::min(log_hi, best_log + step), 1e-10);
  const double tau = std::pow(10.0, refined_log);
  const auto fit = fit_at(tau);

  out.decay_time = tau;
  out.amplitude = fit.c1;
  out.offset = fit.c0;
  out.residual = std::sqrt(fit.sse / static_cast<double>(n));
  out.saturated = tau >= 0.5 * kNoDecaySentinel;
  if (out.saturated) out.decay_time = kNoDecaySentinel;
  return out;
}

}  // namespace paraqst::fitting
