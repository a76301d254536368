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

#include "paraqst/experiments.hpp"

#include <cmath>
#include <optional>

#include "paraqst/optimize.hpp"
#include "paraqst/report.hpp"
#include "paraqst/sweep.hpp"
#include "paraqst/tomography.hpp"
#include "paraqst/units.hpp"

namespace paraqst::experiments {

using model::QuantumState;
using model::StateSpace;

// ---------------------------------------------------------------------------
// Chevron scans

std::vector<double> chevron_time_grid(double gprime_mhz, double periods, double step_ns) {
  if (!(gprime_mhz > 0.0) || !(periods > 0.0) || !(step_ns > 0.0))
    throw ValidationError("chevron_time_grid: invalid grid parameters");
  const double span_ns = periods * 500.0 / gprime_mhz;  // population period of cos(2 Omega t)
  const int n = static_cast<int>(std::ceil(span_ns / step_ns));
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = step_ns * i;
  return t;
}

std::vector<double> chevron_nu_grid(const ChainConfig& chain, int link, double span_mhz,
                                    double step_mhz) {
  if (!(span_mhz > 0.0) || !(step_mhz > 0.0))
    throw ValidationError("chevron_nu_grid: invalid grid parameters");
  const double center = std::abs(chain.detuning_mhz(link));
  std::vector<double> nu;
  for (double v = center - 0.5 * span_mhz; v <= center + 0.5 * span_mhz + 1e-9; v += step_mhz)
    if (v > 0.0) nu.push_back(v);
  if (nu.size() < 5) throw ValidationError("chevron_nu_grid: grid too small");
  return nu;
}

ChevronMap chevron_scan(const ChainConfig& chain, const ChevronOptions& options) {
  chain.validate();
  if (options.link < 1 || options.link > chain.links())
    throw ValidationError("chevron_scan: link index out of range");
  if (options.amplitude_mhz < 0.0)
    throw ValidationError("chevron_scan: modulation amplitude must be >= 0");
  if (options.nu_grid_mhz.empty()) throw ValidationError("chevron_scan: empty frequency grid");
  for (double nu : options.nu_grid_mhz)
    if (!(nu > 0.0)) throw ValidationError("chevron_scan: frequencies must be positive");
  if (options.times_ns.size() < 8)
    throw ValidationError("chevron_scan: need at least 8 time samples");

  // Two-qubit subchain around the link; the upstream qubit starts excited.
  ChainConfig sub;
  sub.qubits = {chain.qubits[options.link - 1], chain.qubits[options.link]};
  sub.static_couplings = {chain.static_couplings[options.link - 1]};

  ChevronMap map;
  map.link = options.link;
  map.amplitude_mhz = options.amplitude_mhz;
  map.nu_mhz = options.nu_grid_mhz;
  map.times_ns = options.times_ns;
  map.populations.resize(static_cast<Eigen::Index>(map.nu_mhz.size()),
                         static_cast<Eigen::Index>(map.times_ns.size()));

  const QuantumState initial = QuantumState::single_excitation(StateSpace::Full, 2, 0);
  sweep::parallel_for(
      static_cast<int>(map.nu_mhz.size()), options.workers, [&](int row) {
        model::ModulationProgram program;
        program.per_qubit.resize(2);
        if (options.upstream) program.per_qubit[0] = *options.upstream;
        program.per_qubit[1] =
            ModulationSpec{options.amplitude_mhz, map.nu_mhz[row], 0.0};
        const model::LabHamiltonian h(sub, program, model::Frame::RotatingOperating,
                                      options.counter_rotating, StateSpace::Full);
        const auto traj = dynamics::evolve_unitary(h, initial, map.times_ns, options.step);
        for (std::size_t c = 0; c < map.times_ns.size(); ++c)
          map.populations(row, static_cast<Eigen::Index>(c)) =
              traj.populations(static_cast<Eigen::Index>(c), 0);
      });

  // Fit the exchange frequency on every column; columns too far off
  // resonance to support a coherent fit are skipped.
  const int n_nu = static_cast<int>(map.nu_mhz.size());
  std::vector<std::optional<fitting::OscillationFit>> fits(n_nu);
  int best = -1;
  for (int i = 0; i < n_nu; ++i) {
    std::vector<double> row(map.times_ns.size());
    for (std::size_t c = 0; c < map.times_ns.size(); ++c)
      row[c] = map.populations(i, static_cast<Eigen::Index>(c));
    try {
      fits[i] = fitting::fit_population_oscillation(map.times_ns, row);
    } catch (const NumericalError&) {
      continue;
    }
    if (best < 0 || fits[i]->omega < fits[best]->omega) best = i;
  }
  if (best < 0)
    throw NumericalError("chevron_scan: no scan column supports an oscillation fit");

  // Near resonance the exchange frequency obeys
  // Omega^2 = g'^2 + c (nu - nu0)^2 with c close to, but not exactly, the
  // two-level value 1/4: off-resonant sideband processes rescale the
  // detuning response by a few percent, in either direction. Fitting the
  // parabola with free curvature therefore recovers the vertex (resonance
  // and coupling) without that bias, and stays accurate when the resonance
  // is pulled off the bare detuning by the carrier and spurious sidebands.
  constexpr double kRegressionWindowMhz = 6.0;
  const double center = units::rad_per_ns_from_mhz(map.nu_mhz[best]);
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d moments = Eigen::Vector3d::Zero();
  int used = 0;
  for (int i = 0; i < n_nu; ++i) {
    if (!fits[i]) continue;
    if (std::abs(map.nu_mhz[i] - map.nu_mhz[best]) > kRegressionWindowMhz) continue;
    const double x = units::rad_per_ns_from_mhz(map.nu_mhz[i]) - center;
    const double z = fits[i]->omega * fits[i]->omega;
    const Eigen::Vector3d basis{1.0, x, x * x};
    normal += basis * basis.transpose();
    moments += z * basis;
    ++used;
  }
  if (used < 5)
    throw NumericalError("chevron_scan: too few coherent columns near the resonance");
  const Eigen::Vector3d coeff = normal.ldlt().solve(moments);
  const double g2 = coeff[0] - coeff[1] * coeff[1] / (4.0 * coeff[2]);
  if (coeff[2] <= 0.0 || g2 <= 0.0)
    throw NumericalError("chevron_scan: exchange profile has no real coupling minimum");
  map.resonance_mhz = units::mhz_from_rad_per_ns(center - 0.5 * coeff[1] / coeff[2]);
  map.coupling_mhz = units::mhz_from_rad_per_ns(std::sqrt(g2));
  map.resonance_fit = *fits[best];
  map.oscillation_span = 2.0 * std::abs(fits[best]->amplitude);
  return map;
}

void ChevronMap::write_csv(const std::filesystem::path& path) const {
  std::vector<std::string> header{"nu_mhz"};
  for (double t : times_ns) header.push_back("p_at_" + report::format_double(t) + "ns");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < nu_mhz.size(); ++i) {
    std::vector<double> row{nu_mhz[i]};
    for (std::size_t c = 0; c < times_ns.size(); ++c)
      row.push_back(populations(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)));
    rows.push_back(std::move(row));
  }
  report::write_csv(path, header, rows);
}

// ---------------------------------------------------------------------------
// Transfer traces

TransferTrace qst_population_trace(const ChainConfig& chain, const TransferSchedule& schedule,
                                   Complex amp_g, Complex amp_e,
                                   const std::vector<double>& times_ns,
                                   const TraceOptions& options) {
  dynamics::EvolutionRequest req;
  req.chain = chain;
  req.schedule = schedule;
  req.times_ns = times_ns;
  req.noise = options.noise;
  req.step = options.step;

  // Counter-rotating terms need the full space; otherwise the dynamics stay
  // in the single-excitation sector and the restriction is exact.
  const bool full = options.model == SimulationModel::LabCounterRotating;
  const StateSpace space = full ? StateSpace::Full : StateSpace::Sector;
  req.initial = QuantumState::qubit_superposition(space, chain.size(), 0, amp_g, amp_e);

  switch (options.model) {
    case SimulationModel::Effective:
      req.source = dynamics::EvolutionRequest::Source::Effective;
      break;
    case SimulationModel::LabCounterRotating:
      req.source = dynamics::EvolutionRequest::Source::Lab;
      req.counter_rotating = true;
      break;
    case SimulationModel::LabRotatingWave:
      req.source = dynamics::EvolutionRequest::Source::Lab;
      req.counter_rotating = false;
      break;
  }

  TransferTrace out;
  out.trajectory = dynamics::evolve(req);
  out.peak_index = out.trajectory.peak_index(chain.size() - 1);
  out.transfer_time_ns = out.trajectory.times_ns[out.peak_index];
  out.peak_population = out.trajectory.populations(out.peak_index, chain.size() - 1);
  return out;
}

// ---------------------------------------------------------------------------
// Transferred-state phase

namespace {

double wrap_2pi(double phi) {
  phi = std::fmod(phi, units::kTwoPi);
  if (phi < 0.0) phi += units::kTwoPi;
  return phi;
}

void rebuild_coupling_cache(const ChainConfig& chain, TransferSchedule& s) {
  s.effective_couplings.resize(s.links());
  for (int j = 1; j <= s.links(); ++j)
    s.effective_couplings[j - 1] = coupling::effective_coupling(chain, s.modulations, j);
}

}  // namespace

TransferAmplitude transferred_phase(const ChainConfig& chain, const TransferSchedule& schedule) {
  const Eigen::MatrixXcd h = model::build_effective_hamiltonian(chain, schedule);
  const QuantumState start = QuantumState::single_excitation(StateSpace::Sector, chain.size(), 0);
  const QuantumState end = dynamics::evolve_exact(h, start, schedule.duration);
  const Complex amp = end.amplitudes()(model::sector_index(chain.size() - 1));
  if (std::abs(amp) < 1e-6)
    throw NumericalError("transfer amplitude magnitude " + std::to_string(std::abs(amp)) +
                         " is below 1e-6; the transferred phase is undefined");
  TransferAmplitude out;
  out.amplitude = amp;
  // The coherence <sigma^+> of the arriving qubit advances by -arg(amp).
  out.phi_s = wrap_2pi(-std::arg(amp));
  return out;
}

double predicted_phase(const ChainConfig& chain, const TransferSchedule& schedule) {
  schedule.validate(chain);
  double phi = 0.0;
  for (const Complex& g : schedule.effective_couplings) phi += std::arg(g);
  phi += (chain.size() - 1) * 0.5 * units::kPi;
  return wrap_2pi(phi);
}

PhaseScan phase_scan(const ChainConfig& chain, const TransferSchedule& schedule, int varied_link,
                     const std::vector<double>& phi_grid) {
  if (varied_link < 1 || varied_link > schedule.links())
    throw ValidationError("phase_scan: link index out of range");
  if (phi_grid.size() < 3) throw ValidationError("phase_scan: need at least 3 phase samples");

  PhaseScan out;
  out.varied_link = varied_link;
  out.phi = phi_grid;
  out.phi_s.resize(phi_grid.size());
  for (std::size_t i = 0; i < phi_grid.size(); ++i) {
    TransferSchedule s = schedule;
    s.modulations[varied_link - 1].phase = phi_grid[i];
    rebuild_coupling_cache(chain, s);
    out.phi_s[i] = transferred_phase(chain, s).phi_s;
  }
  // Unwrap relative to the previous sample.
  for (std::size_t i = 1; i < out.phi_s.size(); ++i) {
    while (out.phi_s[i] - out.phi_s[i - 1] > units::kPi) out.phi_s[i] -= units::kTwoPi;
    while (out.phi_s[i] - out.phi_s[i - 1] < -units::kPi) out.phi_s[i] += units::kTwoPi;
  }

  // Closed-form linear fit.
  const std::size_t n = phi_grid.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += out.phi[i];
    sy += out.phi_s[i];
    sxx += out.phi[i] * out.phi[i];
    sxy += out.phi[i] * out.phi_s[i];
  }
  const double nn = static_cast<double>(n);
  const double det = nn * sxx - sx * sx;
  if (std::abs(det) < 1e-12) throw ValidationError("phase_scan: degenerate phase grid");
  out.slope = (nn * sxy - sx * sy) / det;
  out.intercept = (sy - out.slope * sx) / nn;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = out.phi_s[i] - out.slope * out.phi[i] - out.intercept;
    sse += r * r;
  }
  out.residual = std::sqrt(sse / nn);
  return out;
}

// ---------------------------------------------------------------------------
// Repeated transfers

namespace {

void check_transfer_counts(const std::vector<int>& m_list) {
  if (m_list.empty()) throw ValidationError("transfer counts must not be empty");
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    if (m_list[i] < 1 || m_list[i] % 4 != 1)
      throw ValidationError(
          "transfer counts must be of the form 4n + 1 so the state ends on the far qubit");
    if (i > 0 && m_list[i] <= m_list[i - 1])
      throw ValidationError("transfer counts must be strictly increasing");
  }
}

struct RepeatedRun {
  std::vector<double> times_ns;                 // 0, m1 tau, m2 tau, ...
  std::vector<dynamics::Trajectory> per_input;  // one per standard input
  double phi_s = 0.0;
};

// Evolves all four standard tomography inputs over the repeated-transfer
// time grid under the effective model with the chain's noise.
RepeatedRun run_repeated(const ChainConfig& chain, const TransferSchedule& schedule,
                         const std::vector<int>& m_list, const RepeatedTransferOptions& options,
                         bool need_all_inputs, int single_input_index) {
  check_transfer_counts(m_list);
  schedule.validate(chain);

  RepeatedRun run;
  run.times_ns.push_back(0.0);
  for (int m : m_list) run.times_ns.push_back(m * schedule.duration);
  run.phi_s = transferred_phase(chain, schedule).phi_s;

  const Eigen::MatrixXcd h_full = model::build_effective_hamiltonian_full(chain, schedule);
  const model::ConstantHamiltonian h(h_full);
  const std::vector<dynamics::NoiseChannel> noise =
      options.noiseless ? std::vector<dynamics::NoiseChannel>{}
                        : dynamics::noise_from_chain(chain, options.t2_star_override_us,
                                                     options.include_thermal);

  const auto& inputs = tomography::standard_input_amplitudes();
  for (int k = 0; k < 4; ++k) {
    if (!need_all_inputs && k != single_input_index) {
      run.per_input.emplace_back();
      continue;
    }
    const QuantumState initial = QuantumState::qubit_superposition(
        StateSpace::Full, chain.size(), 0, inputs[k][0], inputs[k][1]);
    run.per_input.push_back(
        dynamics::evolve_lindblad(h, initial, noise, run.times_ns, options.step));
  }
  return run;
}

Eigen::Matrix2cd phase_corrected_reduced(const dynamics::Trajectory& traj, std::size_t slot,
                                         int qubit, double phi_s) {
  const Eigen::Matrix2cd rho = traj.states[slot].reduced_qubit(qubit);
  Eigen::Matrix2cd c = Eigen::Matrix2cd::Identity();
  c(1, 1) = std::polar(1.0, phi_s);
  return c * rho * c.adjoint();
}

}  // namespace

FidelityDecay repeated_transfer(const ChainConfig& chain, const TransferSchedule& schedule,
                                const std::vector<int>& transfer_counts,
                                const RepeatedTransferOptions& options) {
  const RepeatedRun run = run_repeated(chain, schedule, transfer_counts, options, true, -1);
  const int far = chain.size() - 1;
  const tomography::ConfusionMatrix confusion =
      tomography::ConfusionMatrix::from_qubit(chain.qubits[far]);
  const tomography::ChiMatrix ideal = tomography::chi_identity();

  FidelityDecay out;
  out.transfer_counts = transfer_counts;
  out.phase_correction = run.phi_s;
  for (std::size_t s = 1; s < run.times_ns.size(); ++s) {
    std::array<Eigen::Matrix2cd, 4> outputs;
    for (int k = 0; k < 4; ++k) {
      const Eigen::Matrix2cd rho = phase_corrected_reduced(run.per_input[k], s, far, run.phi_s);
      if (options.shots > 0) {
        const auto tomo = tomography::sampled_state_tomography(
            rho, confusion, options.shots,
            sweep::derive_seed(options.seed, s * 8 + static_cast<std::size_t>(k)));
        outputs[k] = tomo.rho_raw;
      } else {
        outputs[k] = rho;
      }
    }
    const tomography::ChiMatrix chi = tomography::process_tomography(outputs);
    out.fidelity.push_back(tomography::process_fidelity(chi, ideal));
  }
  out.fit = fitting::fit_power_decay(out.transfer_counts, out.fidelity, 0.25);
  return out;
}

TransferredStateDecay transferred_state_decay(const ChainConfig& chain,
                                              const TransferSchedule& schedule, DecayProbe probe,
                                              const std::vector<int>& transfer_counts,
                                              const RepeatedTransferOptions& options) {
  const int input_index = probe == DecayProbe::Excited ? 1 : 2;  // |e> or |+>
  const RepeatedRun run =
      run_repeated(chain, schedule, transfer_counts, options, false, input_index);
  const int far = chain.size() - 1;

  TransferredStateDecay out;
  out.probe = probe;
  for (std::size_t s = 1; s < run.times_ns.size(); ++s) {
    out.times_us.push_back(units::us_from_ns(run.times_ns[s]));
    const Eigen::Matrix2cd rho = run.per_input[input_index].states[s].reduced_qubit(far);
    if (probe == DecayProbe::Excited)
      out.signal.push_back(rho(1, 1).real());
    else
      out.signal.push_back(2.0 * std::abs(rho(0, 1)));
  }
  out.fit = fitting::fit_exponential_decay(out.times_us, out.signal);
  return out;
}

// ---------------------------------------------------------------------------
// In-situ schedule calibration

CalibrationOptions::CalibrationOptions() : objective_step(dynamics::coarse_step_control()) {}

CalibratedSchedule calibrate_schedule(const ChainConfig& chain, const TransferSchedule& schedule,
                                      const CalibrationOptions& options) {
  schedule.validate(chain);

  const QuantumState initial =
      QuantumState::single_excitation(StateSpace::Sector, chain.size(), 0);
  const std::vector<double> times{0.0, schedule.duration};
  auto infidelity = [&](const TransferSchedule& s) {
    const model::LabHamiltonian h(chain,
                                  model::ModulationProgram::from_schedule(s, chain.size()),
                                  model::Frame::RotatingOperating, false, StateSpace::Sector);
    const auto traj = dynamics::evolve_unitary(h, initial, times, options.objective_step);
    return 1.0 - traj.populations(1, chain.size() - 1);
  };

  CalibratedSchedule out;
  out.initial_infidelity = infidelity(schedule);

  // Warm start: two rounds of per-link frequency line searches.  The
  // dominant systematic is a static shift of each sideband resonance, which
  // this locates directly before the simplex refinement polishes all
  // amplitudes and frequencies together.
  TransferSchedule warm = schedule;
  for (int round = 0; round < 2; ++round) {
    for (int j = 1; j <= warm.links(); ++j) {
      const double nu0 = warm.modulations[j - 1].frequency;
      const double lo = std::max(0.01, nu0 - options.refine.frequency_bound_mhz * 0.75);
      const double hi = nu0 + options.refine.frequency_bound_mhz * 0.75;
      const double best = optimize::golden_minimize(
          [&](double nu) {
            TransferSchedule s = warm;
            s.modulations[j - 1].frequency = nu;
            rebuild_coupling_cache(chain, s);
            return infidelity(s);
          },
          lo, hi, 1e-5);
      warm.modulations[j - 1].frequency = best;
      rebuild_coupling_cache(chain, warm);
    }
  }
  if (infidelity(warm) > out.initial_infidelity) warm = schedule;  // never regress

  out.refine = coupling::refine_schedule(chain, warm, infidelity, options.refine);
  out.schedule = out.refine.schedule;
  out.final_infidelity = out.refine.final_objective;
  return out;
}

}  // namespace paraqst::experiments
