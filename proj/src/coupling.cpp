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

#include "paraqst/coupling.hpp"

#include <cmath>
#include <sstream>

#include "paraqst/optimize.hpp"
#include "paraqst/units.hpp"

namespace paraqst::coupling {

double bessel_j(int n, double x) {
  if (n < 0) throw ValidationError("bessel_j: order must be non-negative");
  if (!std::isfinite(x) || std::abs(x) > 50.0)
    throw ValidationError("bessel_j: argument must be finite with |x| <= 50");
  // J_n(-x) = (-1)^n J_n(x); the library routine wants x >= 0.
  const double v = std::cyl_bessel_j(static_cast<double>(n), std::abs(x));
  return (x < 0.0 && (n % 2 == 1)) ? -v : v;
}

Complex effective_coupling(const ChainConfig& chain, const std::vector<ModulationSpec>& mods,
                           int link) {
  chain.validate();
  if (static_cast<int>(mods.size()) != chain.links())
    throw ValidationError("effective_coupling: one modulation per link expected");
  if (link < 1 || link > chain.links())
    throw ValidationError("effective_coupling: link index out of range");

  const ModulationSpec& own = mods[link - 1];
  own.validate(link);
  if (own.amplitude == 0.0) return Complex{0.0, 0.0};

  const double g = chain.static_couplings[link - 1];
  const double alpha = own.index();
  const double half_pi = 0.5 * units::kPi;

  // First link: only its own first sideband matters.
  if (link == 1) return g * bessel_j(1, alpha) * std::polar(1.0, own.phase + half_pi);

  // Interior links also pick up the carrier weight of the upstream qubit's
  // modulation; the sideband sign alternates with the link parity.
  const ModulationSpec& prev = mods[link - 2];
  const double alpha_prev = prev.amplitude == 0.0 ? 0.0 : prev.index();
  const double magnitude = g * bessel_j(1, alpha) * bessel_j(0, alpha_prev);
  if (link % 2 == 0) return magnitude * std::polar(1.0, -(own.phase - half_pi));
  return magnitude * std::polar(1.0, own.phase + half_pi);
}

double invert_link(double g_mhz, double target_mhz, double alpha_prev, int link) {
  if (!(g_mhz > 0.0)) throw ValidationError("invert_link: static coupling must be positive");
  if (target_mhz < 0.0) throw ValidationError("invert_link: target magnitude must be >= 0");
  if (target_mhz == 0.0) return 0.0;

  const double carrier = link <= 1 ? 1.0 : bessel_j(0, alpha_prev);
  const double maximum = g_mhz * kJ1PeakValue * carrier;
  if (carrier <= 0.0 || target_mhz > maximum) {
    std::ostringstream msg;
    msg << "link " << link << ": requested |g'| = " << target_mhz
        << " MHz exceeds the achievable maximum " << std::max(0.0, maximum)
        << " MHz on the first sideband branch";
    throw InfeasibleScheduleError(msg.str(),
                                  {LinkHeadroom{link, target_mhz, std::max(0.0, maximum)}});
  }

  const double scale = g_mhz * carrier;
  auto f = [&](double alpha) { return scale * bessel_j(1, alpha) - target_mhz; };
  return optimize::bisect(f, 0.0, kJ1PeakX, 1e-10);
}

TransferSchedule synthesize_schedule(const ChainConfig& chain, double gprime_mhz,
                                     const SynthesisOptions& options) {
  chain.require_alternating_detunings();
  if (!(gprime_mhz > 0.0))
    throw ValidationError("synthesize_schedule: coupling scale g' must be positive (MHz)");
  const int n = chain.size();
  const int n_links = chain.links();

  std::vector<double> phases = options.phases;
  if (phases.empty()) phases.assign(n_links, 0.0);
  if (static_cast<int>(phases.size()) != n_links)
    throw ValidationError("synthesize_schedule: need one phase per link (or none)");

  TransferSchedule s;
  s.modulations.resize(n_links);
  s.duration = units::transfer_duration_ns(gprime_mhz);

  std::vector<LinkHeadroom> report;
  bool infeasible = false;
  double alpha_prev = 0.0;
  for (int j = 1; j <= n_links; ++j) {
    const double target = gprime_mhz * std::sqrt(static_cast<double>(j) * (n - j));
    const double g = chain.static_couplings[j - 1];
    const double carrier = j == 1 ? 1.0 : bessel_j(0, alpha_prev);
    const double maximum = g * kJ1PeakValue * std::max(0.0, carrier);
    report.push_back(LinkHeadroom{j, target, maximum});
    if (target > maximum) {
      infeasible = true;
      // Later links are reported against their carrier-free bound.
      for (int k = j + 1; k <= n_links; ++k)
        report.push_back(LinkHeadroom{
            k, gprime_mhz * std::sqrt(static_cast<double>(k) * (n - k)),
            chain.static_couplings[k - 1] * kJ1PeakValue});
      break;
    }
    const double alpha = invert_link(g, target, alpha_prev, j);
    const double nu = std::abs(chain.detuning_mhz(j));
    s.modulations[j - 1] = ModulationSpec{alpha * nu, nu, phases[j - 1]};
    alpha_prev = alpha;
  }
  if (infeasible) {
    std::ostringstream msg;
    msg << "schedule with g' = " << gprime_mhz << " MHz is infeasible:";
    for (const auto& h : report)
      msg << " link " << h.link << " needs " << h.target_mhz << " MHz of "
          << h.maximum_mhz << " MHz available;";
    throw InfeasibleScheduleError(msg.str(), std::move(report));
  }

  s.effective_couplings.resize(n_links);
  for (int j = 1; j <= n_links; ++j)
    s.effective_couplings[j - 1] = effective_coupling(chain, s.modulations, j);

  // Post-conditions: the synthesized magnitudes realize the mirror profile.
  for (int j = 1; j <= n_links; ++j) {
    const double target = gprime_mhz * std::sqrt(static_cast<double>(j) * (n - j));
    if (std::abs(std::abs(s.effective_couplings[j - 1]) - target) > 1e-9 * target)
      throw NumericalError("synthesize_schedule: link " + std::to_string(j) +
                           " missed its target magnitude");
  }
  if (!s.mirror_symmetric())
    throw NumericalError("synthesize_schedule: coupling profile lost mirror symmetry");
  return s;
}

namespace {

TransferSchedule schedule_from_params(const ChainConfig& chain, const TransferSchedule& base,
                                      const std::vector<double>& x) {
  const int n_links = base.links();
  TransferSchedule s = base;
  for (int j = 0; j < n_links; ++j) {
    s.modulations[j].amplitude = x[j];
    s.modulations[j].frequency = x[n_links + j];
  }
  s.effective_couplings.resize(n_links);
  for (int j = 1; j <= n_links; ++j)
    s.effective_couplings[j - 1] = effective_coupling(chain, s.modulations, j);
  return s;
}

}  // namespace

RefineResult refine_schedule(const ChainConfig& chain, const TransferSchedule& schedule,
                             const std::function<double(const TransferSchedule&)>& objective,
                             const RefineOptions& options) {
  schedule.validate(chain);
  const int n_links = schedule.links();

  std::vector<double> x0(2 * n_links), lower(2 * n_links), upper(2 * n_links);
  for (int j = 0; j < n_links; ++j) {
    const double eps = schedule.modulations[j].amplitude;
    const double nu = schedule.modulations[j].frequency;
    x0[j] = eps;
    lower[j] = eps * (1.0 - options.amplitude_bound);
    upper[j] = eps * (1.0 + options.amplitude_bound);
    x0[n_links + j] = nu;
    lower[n_links + j] = std::max(0.01, nu - options.frequency_bound_mhz);
    upper[n_links + j] = nu + options.frequency_bound_mhz;
  }

  auto f = [&](const std::vector<double>& x) {
    return objective(schedule_from_params(chain, schedule, x));
  };

  optimize::NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.tolerance = options.tolerance;
  nm.initial_step = options.initial_step;
  const auto best = optimize::nelder_mead(f, x0, nm, lower, upper);

  RefineResult result;
  result.initial_objective = objective(schedule);
  // The initial point is a simplex vertex, so the best value can only improve.
  if (best.value <= result.initial_objective) {
    result.schedule = schedule_from_params(chain, schedule, best.x);
    result.final_objective = best.value;
  } else {
    result.schedule = schedule;
    result.final_objective = result.initial_objective;
  }
  result.trace = best.trace;
  result.iterations = best.iterations;
  result.converged = best.converged;
  return result;
}

}  // namespace paraqst::coupling
