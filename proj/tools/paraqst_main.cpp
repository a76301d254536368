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
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "paraqst/calibration.hpp"
#include "paraqst/config_io.hpp"
#include "paraqst/coupling.hpp"
#include "paraqst/dynamics.hpp"
#include "paraqst/errors.hpp"
#include "paraqst/experiments.hpp"
#include "paraqst/model.hpp"
#include "paraqst/report.hpp"
#include "paraqst/tomography.hpp"
#include "paraqst/units.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace paraqst;

namespace {

struct GlobalArgs {
  std::string config_path;  // Empty selects the bundled device.
  std::string out_dir = "out";
  std::uint64_t seed = 12345;
  int workers = std::max(1u, std::thread::hardware_concurrency());
};

struct RunContext {
  GlobalArgs args;
  config_io::DeviceConfig device;
  fs::path out;
  report::RunManifest manifest;
};

RunContext make_context(const GlobalArgs& args, const std::string& subcommand) {
  RunContext ctx;
  ctx.args = args;
  ctx.device = args.config_path.empty() ? config_io::default_device_config()
                                        : config_io::load_device_config(args.config_path);
  ctx.out = fs::path(args.out_dir);
  fs::create_directories(ctx.out);
  ctx.manifest.subcommand = subcommand;
  ctx.manifest.config = config_io::to_json(ctx.device);
  ctx.manifest.seed = args.seed;
  ctx.manifest.out_dir = args.out_dir;
  return ctx;
}

void finalize(RunContext& ctx, json summary) {
  config_io::save_json(summary, ctx.out / "summary.json");
  ctx.manifest.artifacts = report::checksum_directory(ctx.out);
  ctx.manifest.write(ctx.out / "manifest.json");
  std::cout << "wrote " << (ctx.out / "summary.json").string() << " (and "
            << ctx.manifest.artifacts.size() - 1 << " data files)\n";
}

model::TransferSchedule make_schedule(const RunContext& ctx, const std::string& schedule_path,
                                      double tau_ns) {
  if (!schedule_path.empty()) {
    auto s = config_io::load_schedule(schedule_path);
    s.validate(ctx.device.chain);
    return s;
  }
  if (tau_ns <= 0.0) {
    throw ValidationError("--tau-ns must be positive");
  }
  return coupling::synthesize_schedule(ctx.device.chain, units::coupling_scale_mhz(tau_ns));
}

std::vector<double> time_grid(double t_max_ns, double dt_ns) {
  if (t_max_ns <= 0.0 || dt_ns <= 0.0) {
    throw ValidationError("time grid requires positive --t-max-ns and --dt-ns");
  }
  std::vector<double> t;
  for (double x = 0.0; x < t_max_ns + 0.5 * dt_ns; x += dt_ns) t.push_back(x);
  return t;
}

std::vector<int> transfer_counts_up_to(int m_max) {
  if (m_max < 1) throw ValidationError("--m-max must be at least 1");
  std::vector<int> m;
  for (int k = 1; k <= m_max; k += 4) m.push_back(k);
  return m;
}

json schedule_summary(const model::ChainConfig& chain, const model::TransferSchedule& s) {
  json links = json::array();
  for (int j = 1; j <= s.links(); ++j) {
    const auto& mod = s.modulations[static_cast<std::size_t>(j - 1)];
    const auto g = s.effective_couplings[static_cast<std::size_t>(j - 1)];
    links.push_back(json{{"link", j},
                         {"amplitude_mhz", mod.amplitude},
                         {"frequency_mhz", mod.frequency},
                         {"phase_rad", mod.phase},
                         {"index", mod.index()},
                         {"detuning_mhz", chain.detuning_mhz(j)},
                         {"coupling_mhz", std::abs(g)},
                         {"coupling_phase_rad", std::arg(g)}});
  }
  return json{{"duration_ns", s.duration},
              {"links", std::move(links)},
              {"mirror_symmetric", s.mirror_symmetric()}};
}

void write_schedule_csv(const fs::path& path, const model::ChainConfig& chain,
                        const model::TransferSchedule& s) {
  std::vector<std::vector<double>> rows;
  for (int j = 1; j <= s.links(); ++j) {
    const auto& mod = s.modulations[static_cast<std::size_t>(j - 1)];
    const auto g = s.effective_couplings[static_cast<std::size_t>(j - 1)];
    rows.push_back({static_cast<double>(j), mod.amplitude, mod.frequency, mod.phase, mod.index(),
                    chain.detuning_mhz(j), std::abs(g), std::arg(g)});
  }
  report::write_csv(path,
                    {"link", "amplitude_mhz", "frequency_mhz", "phase_rad", "index",
                     "detuning_mhz", "coupling_mhz", "coupling_phase_rad"},
                    rows);
}

// ---------------------------------------------------------------------------
// Subcommands

struct SynthesizeArgs {
  double tau_ns = 84.0;
};

void run_synthesize(const GlobalArgs& g, const SynthesizeArgs& a) {
  RunContext ctx = make_context(g, "synthesize");
  auto schedule =
      coupling::synthesize_schedule(ctx.device.chain, units::coupling_scale_mhz(a.tau_ns));
  config_io::save_schedule(schedule, ctx.out / "schedule.json");
  write_schedule_csv(ctx.out / "schedule.csv", ctx.device.chain, schedule);
  json summary = schedule_summary(ctx.device.chain, schedule);
  summary["tau_ns"] = a.tau_ns;
  summary["coupling_scale_mhz"] = units::coupling_scale_mhz(a.tau_ns);
  ctx.manifest.flags = json{{"tau_ns", a.tau_ns}};
  finalize(ctx, summary);
}

struct EvolveArgs {
  std::string schedule_path;
  double tau_ns = 84.0;
  std::string model = "effective";
  bool calibrate = false;
  double t_max_ns = 0.0;  // 0 selects 2 * duration.
  double dt_ns = 1.0;
  bool superposition = false;
  bool noise = false;
  double t2_star_us = 0.0;  // 0 keeps per-qubit values.
  bool thermal = false;
};

experiments::SimulationModel parse_model(const std::string& name) {
  if (name == "effective") return experiments::SimulationModel::Effective;
  if (name == "lab-rwa") return experiments::SimulationModel::LabRotatingWave;
  if (name == "lab-cr") return experiments::SimulationModel::LabCounterRotating;
  throw ValidationError("unknown --model \"" + name + "\" (effective, lab-rwa, lab-cr)");
}

void run_evolve(const GlobalArgs& g, const EvolveArgs& a) {
  RunContext ctx = make_context(g, "evolve");
  const auto sim_model = parse_model(a.model);
  if (a.calibrate && sim_model == experiments::SimulationModel::Effective) {
    throw ValidationError(
        "--calibrate compensates lab-frame shifts and detunes the modulation; "
        "evolve it with --model lab-rwa or lab-cr");
  }
  auto schedule = make_schedule(ctx, a.schedule_path, a.tau_ns);
  double initial_infidelity = -1.0, final_infidelity = -1.0;
  if (a.calibrate) {
    auto cal = experiments::calibrate_schedule(ctx.device.chain, schedule);
    schedule = cal.schedule;
    initial_infidelity = cal.initial_infidelity;
    final_infidelity = cal.final_infidelity;
  }
  const double t_max = a.t_max_ns > 0.0 ? a.t_max_ns : 2.0 * schedule.duration;
  const auto times = time_grid(t_max, a.dt_ns);

  experiments::TraceOptions options;
  options.model = sim_model;
  if (a.noise) {
    std::optional<double> t2 =
        a.t2_star_us > 0.0 ? std::optional<double>(a.t2_star_us) : std::nullopt;
    options.noise = dynamics::noise_from_chain(ctx.device.chain, t2, a.thermal);
  }
  const double amp = a.superposition ? 1.0 / std::sqrt(2.0) : 0.0;
  const auto trace = experiments::qst_population_trace(
      ctx.device.chain, schedule, amp, a.superposition ? amp : 1.0, times, options);

  trace.trajectory.write_csv(ctx.out / "trace.csv");
  const int n = trace.trajectory.num_qubits();
  json summary{{"model", a.model},
               {"duration_ns", schedule.duration},
               {"transfer_time_ns", trace.transfer_time_ns},
               {"peak_population", trace.peak_population},
               {"peak_index", trace.peak_index},
               {"max_norm_drift", trace.trajectory.max_norm_drift()}};
  if (a.calibrate) {
    summary["initial_infidelity"] = initial_infidelity;
    summary["final_infidelity"] = final_infidelity;
  }
  json pops = json::array();
  for (int q = 0; q < n; ++q) pops.push_back(trace.trajectory.populations(trace.peak_index, q));
  summary["populations_at_peak"] = std::move(pops);
  ctx.manifest.flags = json{{"schedule", a.schedule_path}, {"tau_ns", a.tau_ns},
                            {"model", a.model},           {"calibrate", a.calibrate},
                            {"t_max_ns", t_max},          {"dt_ns", a.dt_ns},
                            {"superposition", a.superposition}, {"noise", a.noise},
                            {"t2_star_us", a.t2_star_us}, {"thermal", a.thermal}};
  finalize(ctx, summary);
}

struct ChevronArgs {
  int link = 1;
  double alpha = 1.0;
  double amplitude_mhz = 0.0;  // 0 derives eps from alpha.
  double nu_span_mhz = 24.0;
  double nu_step_mhz = 0.75;
  double t_max_ns = 0.0;  // 0 derives the grid from the expected coupling.
  double periods = 2.5;
  double upstream_alpha = 0.0;
  bool rwa = false;
};

void run_chevron(const GlobalArgs& g, const ChevronArgs& a) {
  RunContext ctx = make_context(g, "chevron");
  const auto& chain = ctx.device.chain;
  if (a.link < 1 || a.link > chain.links()) {
    throw ValidationError("--link must be in [1, " + std::to_string(chain.links()) + "]");
  }
  const double delta = std::abs(chain.detuning_mhz(a.link));
  experiments::ChevronOptions options;
  options.link = a.link;
  options.amplitude_mhz = a.amplitude_mhz > 0.0 ? a.amplitude_mhz : a.alpha * delta;
  options.nu_grid_mhz = experiments::chevron_nu_grid(chain, a.link, a.nu_span_mhz, a.nu_step_mhz);
  options.counter_rotating = !a.rwa;
  options.workers = g.workers;

  double j0_upstream = 1.0;
  if (a.upstream_alpha > 0.0) {
    if (a.link < 2) {
      throw ValidationError("--upstream-alpha requires --link >= 2");
    }
    const double delta_up = std::abs(chain.detuning_mhz(a.link - 1));
    options.upstream =
        model::ModulationSpec{a.upstream_alpha * delta_up, delta_up, 0.0};
    j0_upstream = coupling::bessel_j(0, a.upstream_alpha);
  }
  const double alpha_eff = options.amplitude_mhz / delta;
  const double expected =
      chain.static_couplings[static_cast<std::size_t>(a.link - 1)] *
      std::abs(coupling::bessel_j(1, alpha_eff)) * std::abs(j0_upstream);
  if (a.t_max_ns > 0.0) {
    // Sample well below the modulation carrier period (3-5 ns) so the
    // micromotion averages out of the column fits.
    const int samples = std::max(16, static_cast<int>(std::lround(a.t_max_ns / 0.25)));
    for (int i = 0; i <= samples; ++i) {
      options.times_ns.push_back(a.t_max_ns * i / samples);
    }
  } else {
    if (expected < 1e-3) {
      throw ValidationError("expected coupling too small to choose a time grid; pass --t-max-ns");
    }
    options.times_ns = experiments::chevron_time_grid(expected, a.periods);
  }

  const auto map = experiments::chevron_scan(chain, options);
  map.write_csv(ctx.out / "chevron.csv");
  const double rel_err = expected > 0.0 ? std::abs(map.coupling_mhz - expected) / expected : -1.0;
  json summary{{"link", a.link},
               {"amplitude_mhz", options.amplitude_mhz},
               {"index", alpha_eff},
               {"resonance_mhz", map.resonance_mhz},
               {"detuning_mhz", delta},
               {"coupling_mhz", map.coupling_mhz},
               {"analytic_coupling_mhz", expected},
               {"relative_error", rel_err},
               {"oscillation_span", map.oscillation_span},
               {"counter_rotating", options.counter_rotating}};
  ctx.manifest.flags = json{{"link", a.link},
                            {"alpha", a.alpha},
                            {"amplitude_mhz", options.amplitude_mhz},
                            {"nu_span_mhz", a.nu_span_mhz},
                            {"nu_step_mhz", a.nu_step_mhz},
                            {"t_max_ns", a.t_max_ns},
                            {"periods", a.periods},
                            {"upstream_alpha", a.upstream_alpha},
                            {"rwa", a.rwa},
                            {"workers", g.workers}};
  finalize(ctx, summary);
}

struct PhaseScanArgs {
  int link = 1;
  int points = 13;
  double tau_ns = 84.0;
};

void run_phase_scan(const GlobalArgs& g, const PhaseScanArgs& a) {
  RunContext ctx = make_context(g, "phase-scan");
  if (a.points < 3) throw ValidationError("--points must be at least 3");
  auto schedule = make_schedule(ctx, "", a.tau_ns);
  std::vector<double> phi(static_cast<std::size_t>(a.points));
  for (int i = 0; i < a.points; ++i) {
    phi[static_cast<std::size_t>(i)] = units::kTwoPi * i / a.points;
  }
  const auto scan = experiments::phase_scan(ctx.device.chain, schedule, a.link, phi);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < scan.phi.size(); ++i) {
    rows.push_back({scan.phi[i], scan.phi_s[i]});
  }
  report::write_csv(ctx.out / "phase_scan.csv", {"phi_rad", "phi_s_rad"}, rows);
  json summary{{"varied_link", a.link},
               {"slope", scan.slope},
               {"intercept_rad", scan.intercept},
               {"rms_residual_rad", scan.residual}};
  ctx.manifest.flags = json{{"link", a.link}, {"points", a.points}, {"tau_ns", a.tau_ns}};
  finalize(ctx, summary);
}

struct FidelityDecayArgs {
  int m_max = 105;
  double tau_ns = 84.0;
  double t2_star_us = 11.5;  // 0 keeps per-qubit values.
  bool thermal = false;
  bool noiseless = false;
  long long shots = 0;
};

void run_fidelity_decay(const GlobalArgs& g, const FidelityDecayArgs& a) {
  RunContext ctx = make_context(g, "fidelity-decay");
  auto schedule = make_schedule(ctx, "", a.tau_ns);
  experiments::RepeatedTransferOptions options;
  if (a.t2_star_us > 0.0) options.t2_star_override_us = a.t2_star_us;
  options.include_thermal = a.thermal;
  options.noiseless = a.noiseless;
  options.shots = a.shots;
  options.seed = g.seed;
  const auto counts = transfer_counts_up_to(a.m_max);
  const auto decay = experiments::repeated_transfer(ctx.device.chain, schedule, counts, options);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < decay.transfer_counts.size(); ++i) {
    const double m = decay.transfer_counts[i];
    rows.push_back({m, decay.fidelity[i], decay.fit.amplitude * std::pow(decay.fit.per_step, m) + 0.25});
  }
  report::write_csv(ctx.out / "fidelity.csv", {"transfers", "fidelity", "fit"}, rows);
  json summary{{"amplitude", decay.fit.amplitude},
               {"per_transfer", decay.fit.per_step},
               {"rms_residual", decay.fit.residual},
               {"phase_correction_rad", decay.phase_correction},
               {"transfers_max", a.m_max},
               {"noiseless", a.noiseless},
               {"thermal", a.thermal},
               {"shots", a.shots}};
  ctx.manifest.flags = json{{"m_max", a.m_max},     {"tau_ns", a.tau_ns},
                            {"t2_star_us", a.t2_star_us}, {"thermal", a.thermal},
                            {"noiseless", a.noiseless},   {"shots", a.shots}};
  finalize(ctx, summary);
}

struct TomographyArgs {
  long long shots = 10000;
  double pe = 0.3;
  int qubit = 0;
  double tau_ns = 84.0;
};

void run_tomography(const GlobalArgs& g, const TomographyArgs& a) {
  RunContext ctx = make_context(g, "tomography");
  const auto& chain = ctx.device.chain;
  if (a.qubit < 0 || a.qubit >= chain.size()) {
    throw ValidationError("--qubit out of range");
  }
  if (a.pe < 0.0 || a.pe > 1.0) throw ValidationError("--pe must lie in [0, 1]");
  if (a.shots <= 0) throw ValidationError("--shots must be positive");

  // Readout-correction demo on a known population.
  const auto confusion =
      tomography::ConfusionMatrix::from_qubit(chain.qubits[static_cast<std::size_t>(a.qubit)]);
  const Eigen::Vector2d truth(1.0 - a.pe, a.pe);
  const auto counts = tomography::sample_readout(truth, confusion, a.shots, g.seed);
  const Eigen::Vector2d raw = counts.frequencies();
  const Eigen::Vector2d corrected = tomography::correct_readout(raw, confusion);

  // State tomography of the transferred superposition (exact + sampled).
  auto schedule = make_schedule(ctx, "", a.tau_ns);
  const auto transfer = experiments::transferred_phase(chain, schedule);
  auto initial = model::QuantumState::qubit_superposition(model::StateSpace::Sector, chain.size(),
                                                          0, 1.0, 1.0);
  const auto h = model::build_effective_hamiltonian(chain, schedule);
  const auto evolved = dynamics::evolve_exact(h, initial, schedule.duration);
  Eigen::Matrix2cd rho = evolved.reduced_qubit(chain.size() - 1);
  // Undo the deterministic transferred phase so the ideal target is |+>.
  Eigen::Matrix2cd rz = Eigen::Matrix2cd::Identity();
  rz(1, 1) = std::exp(model::Complex(0.0, transfer.phi_s));
  rho = rz * rho * rz.adjoint();

  const auto exact = tomography::state_tomography(rho);
  const auto far_confusion = tomography::ConfusionMatrix::from_qubit(
      chain.qubits[static_cast<std::size_t>(chain.size() - 1)]);
  const auto sampled = tomography::sampled_state_tomography(rho, far_confusion, a.shots, g.seed);

  std::vector<std::vector<double>> rows = {
      {truth(0), raw(0), corrected(0)},
      {truth(1), raw(1), corrected(1)},
  };
  report::write_csv(ctx.out / "readout.csv", {"truth", "measured", "corrected"}, rows);
  auto bloch_json = [](const tomography::BlochVector& b) {
    return json{{"x", b.x}, {"y", b.y}, {"z", b.z}};
  };
  json summary{{"readout",
                json{{"qubit", a.qubit},
                     {"truth_excited", a.pe},
                     {"measured_excited", raw(1)},
                     {"corrected_excited", corrected(1)}}},
               {"transferred_state",
                json{{"phi_s_rad", transfer.phi_s},
                     {"bloch_exact", bloch_json(exact.physical)},
                     {"bloch_sampled_raw", bloch_json(sampled.raw)},
                     {"bloch_sampled_physical", bloch_json(sampled.physical)}}}};
  ctx.manifest.flags =
      json{{"shots", a.shots}, {"pe", a.pe}, {"qubit", a.qubit}, {"tau_ns", a.tau_ns}};
  finalize(ctx, summary);
}

struct CalibrateArgs {
  double t_max_ns = 120.0;
  double dt_ns = 0.1;
  double settle_ns = 20.0;
  double lambda = 1e-6;
};

void run_calibrate(const GlobalArgs& g, const CalibrateArgs& a) {
  RunContext ctx = make_context(g, "calibrate");

  // Crosstalk orthogonalization demo.
  json crosstalk = json{{"present", false}};
  if (ctx.device.crosstalk_correction) {
    const auto ct = calibration::CrosstalkMatrix::from_correction(*ctx.device.crosstalk_correction);
    ct.validate();
    const int n = ct.dim();
    const Eigen::MatrixXd residual =
        ct.matrix() * ct.correction() - Eigen::MatrixXd::Identity(n, n);
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < n; ++r) {
      std::vector<double> row;
      for (int c = 0; c < n; ++c) row.push_back(ct.correction()(r, c));
      for (int c = 0; c < n; ++c) row.push_back(ct.matrix()(r, c));
      rows.push_back(std::move(row));
    }
    std::vector<std::string> header;
    for (int c = 0; c < n; ++c) header.push_back("correction_" + std::to_string(c));
    for (int c = 0; c < n; ++c) header.push_back("response_" + std::to_string(c));
    report::write_csv(ctx.out / "crosstalk.csv", header, rows);
    crosstalk = json{{"present", true},
                     {"round_trip_max_abs", residual.cwiseAbs().maxCoeff()},
                     {"diagonally_dominant", ct.diagonally_dominant()}};
  }

  // Deconvolution demo: predistort a unit step through the configured line.
  if (a.t_max_ns <= 0.0 || a.dt_ns <= 0.0 || a.settle_ns <= 0.0 ||
      a.settle_ns >= a.t_max_ns) {
    throw ValidationError("calibrate needs 0 < --settle-ns < --t-max-ns and --dt-ns > 0");
  }
  const int n = static_cast<int>(std::lround(a.t_max_ns / a.dt_ns));
  std::vector<double> target(static_cast<std::size_t>(n), 1.0);
  const auto& line = ctx.device.line_response;
  const auto deconv = calibration::deconvolve(target, line, a.dt_ns, a.lambda);
  const auto raw_trace = calibration::simulate_step_response(target, line, a.dt_ns);
  const auto corrected_trace =
      calibration::simulate_step_response(deconv.corrected, line, a.dt_ns);
  const double raw_err = calibration::settling_error(raw_trace, target, a.dt_ns, a.settle_ns);
  const double corrected_err =
      calibration::settling_error(corrected_trace, target, a.dt_ns, a.settle_ns);

  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    rows.push_back({i * a.dt_ns, target[k], raw_trace[k], deconv.corrected[k],
                    corrected_trace[k]});
  }
  report::write_csv(ctx.out / "step_response.csv",
                    {"time_ns", "target", "raw_response", "predistorted_drive",
                     "corrected_response"},
                    rows);
  json summary{{"crosstalk", crosstalk},
               {"deconvolution",
                json{{"raw_settling_error", raw_err},
                     {"corrected_settling_error", corrected_err},
                     {"round_trip_error", deconv.round_trip_error},
                     {"regularization", deconv.regularization}}}};
  ctx.manifest.flags = json{{"t_max_ns", a.t_max_ns},
                            {"dt_ns", a.dt_ns},
                            {"settle_ns", a.settle_ns},
                            {"lambda", a.lambda}};
  finalize(ctx, summary);
}

struct OptimizeArgs {
  double tau_ns = 84.0;
  double perturb = 0.0;
  int max_iters = 500;
  double tol = 1e-4;
};

void run_optimize(const GlobalArgs& g, const OptimizeArgs& a) {
  RunContext ctx = make_context(g, "optimize");
  auto schedule = make_schedule(ctx, "", a.tau_ns);
  if (std::abs(a.perturb) >= 0.5) throw ValidationError("--perturb must lie in (-0.5, 0.5)");
  if (a.perturb != 0.0) {
    // Deterministic alternating detune to give the optimizer work to do.
    for (std::size_t j = 0; j < schedule.modulations.size(); ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      schedule.modulations[j].amplitude *= 1.0 + sign * a.perturb;
    }
    schedule.effective_couplings.clear();
    for (int j = 1; j <= static_cast<int>(schedule.modulations.size()); ++j) {
      schedule.effective_couplings.push_back(
          coupling::effective_coupling(ctx.device.chain, schedule.modulations, j));
    }
  }
  experiments::CalibrationOptions options;
  options.refine.max_iterations = a.max_iters;
  options.refine.tolerance = a.tol;
  const auto result = experiments::calibrate_schedule(ctx.device.chain, schedule, options);

  config_io::save_schedule(result.schedule, ctx.out / "schedule_calibrated.json");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < result.refine.trace.size(); ++i) {
    rows.push_back({static_cast<double>(i), result.refine.trace[i]});
  }
  report::write_csv(ctx.out / "objective_trace.csv", {"evaluation", "infidelity"}, rows);
  json summary{{"initial_infidelity", result.initial_infidelity},
               {"final_infidelity", result.final_infidelity},
               {"iterations", result.refine.iterations},
               {"converged", result.refine.converged},
               {"schedule", schedule_summary(ctx.device.chain, result.schedule)}};
  ctx.manifest.flags = json{{"tau_ns", a.tau_ns},
                            {"perturb", a.perturb},
                            {"max_iters", a.max_iters},
                            {"tol", a.tol}};
  finalize(ctx, summary);
}

struct SelfcheckArgs {
  bool dump = false;
};

void run_selfcheck(const GlobalArgs& g, const SelfcheckArgs& a) {
  RunContext ctx = make_context(g, "selfcheck");
  json checks = json::array();
  int failures = 0;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    checks.push_back(json{{"name", name}, {"ok", ok}, {"detail", detail}});
    if (!ok) ++failures;
    std::cout << (ok ? "ok      " : "FAILED  ") << name << (detail.empty() ? "" : ": " + detail)
              << "\n";
  };
  auto attempt = [&](const std::string& name, auto&& fn) {
    try {
      record(name, true, fn());
    } catch (const std::exception& e) {
      record(name, false, e.what());
    }
  };

  attempt("config validates", [&] {
    ctx.device.validate();
    return "chain of " + std::to_string(ctx.device.chain.size()) + " qubits";
  });
  attempt("detunings alternate", [&] {
    ctx.device.chain.require_alternating_detunings();
    std::string s;
    for (int j = 1; j <= ctx.device.chain.links(); ++j) {
      s += (j > 1 ? ", " : "") + report::format_double(ctx.device.chain.detuning_mhz(j)) + " MHz";
    }
    return s;
  });
  attempt("schedule synthesis round-trips", [&] {
    const auto s = coupling::synthesize_schedule(ctx.device.chain, units::coupling_scale_mhz(84.0));
    s.validate(ctx.device.chain);
    const auto parsed = config_io::schedule_from_json(config_io::to_json(s));
    parsed.validate(ctx.device.chain);
    return std::string(s.mirror_symmetric() ? "mirror-symmetric" : "asymmetric");
  });
  attempt("crosstalk correction invertible", [&] {
    if (!ctx.device.crosstalk_correction) return std::string("not configured");
    const auto ct =
        calibration::CrosstalkMatrix::from_correction(*ctx.device.crosstalk_correction);
    ct.validate();
    const Eigen::MatrixXd residual = ct.matrix() * ct.correction() -
                                     Eigen::MatrixXd::Identity(ct.dim(), ct.dim());
    return "round-trip max |residual| = " +
           report::format_double(residual.cwiseAbs().maxCoeff());
  });
  attempt("line response settles", [&] {
    const double tail = ctx.device.line_response.step_response(1e4);
    if (std::abs(tail - 1.0) > 1e-6) {
      throw NumericalError("step response tail " + report::format_double(tail));
    }
    return std::string("unit DC gain");
  });

  if (a.dump) {
    config_io::save_json(config_io::to_json(ctx.device), ctx.out / "config.json");
    std::cout << config_io::to_json(ctx.device).dump(2) << "\n";
  }
  json summary{{"checks", checks}, {"failures", failures}};
  ctx.manifest.flags = json{{"dump", a.dump}};
  finalize(ctx, summary);
  if (failures > 0) {
    throw ValidationError(std::to_string(failures) + " selfcheck failure(s)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paraqst: parametrically modulated state-transfer simulator"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--config", g.config_path, "Device configuration JSON (default: bundled device)");
  app.add_option("--out", g.out_dir, "Output directory for artifacts")->capture_default_str();
  app.add_option("--seed", g.seed, "Master seed; per-job seeds derive from it")
      ->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads for grid sweeps")->capture_default_str();

  SynthesizeArgs syn;
  auto* c_syn = app.add_subcommand("synthesize", "Solve modulation parameters for a transfer");
  c_syn->add_option("--tau-ns", syn.tau_ns, "Transfer duration")->capture_default_str();

  EvolveArgs evo;
  auto* c_evo = app.add_subcommand("evolve", "Population trace of one transfer");
  c_evo->add_option("--schedule", evo.schedule_path, "Schedule JSON (default: synthesize)");
  c_evo->add_option("--tau-ns", evo.tau_ns, "Duration when synthesizing")->capture_default_str();
  c_evo->add_option("--model", evo.model, "effective | lab-rwa | lab-cr")->capture_default_str();
  c_evo->add_flag("--calibrate", evo.calibrate, "Refine the schedule in situ before evolving");
  c_evo->add_option("--t-max-ns", evo.t_max_ns, "Trace end (default: 2x duration)");
  c_evo->add_option("--dt-ns", evo.dt_ns, "Output sample spacing")->capture_default_str();
  c_evo->add_flag("--superposition", evo.superposition, "Send (|g>+|e>)/sqrt(2) instead of |e>");
  c_evo->add_flag("--noise", evo.noise, "Enable the chain's Lindblad channels");
  c_evo->add_option("--t2-star-us", evo.t2_star_us, "Uniform T2* override (0 = per-qubit)");
  c_evo->add_flag("--thermal", evo.thermal, "Keep configured thermal populations");

  ChevronArgs che;
  auto* c_che = app.add_subcommand("chevron", "Two-qubit exchange map vs modulation frequency");
  c_che->add_option("--link", che.link, "Link under study")->capture_default_str();
  c_che->add_option("--alpha", che.alpha, "Modulation index eps/nu")->capture_default_str();
  c_che->add_option("--amplitude-mhz", che.amplitude_mhz, "Explicit eps (overrides --alpha)");
  c_che->add_option("--nu-span-mhz", che.nu_span_mhz, "Scan span about the detuning")
      ->capture_default_str();
  c_che->add_option("--nu-step-mhz", che.nu_step_mhz, "Scan step")->capture_default_str();
  c_che->add_option("--t-max-ns", che.t_max_ns, "Time-grid end (default: from coupling)");
  c_che->add_option("--periods", che.periods, "Exchange periods to cover")->capture_default_str();
  c_che->add_option("--upstream-alpha", che.upstream_alpha,
                    "Also modulate the upstream qubit at this index");
  c_che->add_flag("--rwa", che.rwa, "Drop counter-rotating terms");

  PhaseScanArgs phs;
  auto* c_phs = app.add_subcommand("phase-scan", "Transferred phase vs one modulation phase");
  c_phs->add_option("--link", phs.link, "Varied link")->capture_default_str();
  c_phs->add_option("--points", phs.points, "Grid points over [0, 2 pi)")->capture_default_str();
  c_phs->add_option("--tau-ns", phs.tau_ns, "Transfer duration")->capture_default_str();

  FidelityDecayArgs fid;
  auto* c_fid = app.add_subcommand("fidelity-decay", "Process fidelity vs repeated transfers");
  c_fid->add_option("--m-max", fid.m_max, "Largest transfer count (m = 1, 5, ...)")
      ->capture_default_str();
  c_fid->add_option("--tau-ns", fid.tau_ns, "Transfer duration")->capture_default_str();
  c_fid->add_option("--t2-star-us", fid.t2_star_us, "Uniform T2* override (0 = per-qubit)")
      ->capture_default_str();
  c_fid->add_flag("--thermal", fid.thermal, "Keep configured thermal populations");
  c_fid->add_flag("--noiseless", fid.noiseless, "Disable all Lindblad channels");
  c_fid->add_option("--shots", fid.shots, "Sampled tomography shots (0 = exact)")
      ->capture_default_str();

  TomographyArgs tom;
  auto* c_tom = app.add_subcommand("tomography", "Readout correction and state tomography demo");
  c_tom->add_option("--shots", tom.shots, "Shots per basis")->capture_default_str();
  c_tom->add_option("--pe", tom.pe, "True excited population for the readout demo")
      ->capture_default_str();
  c_tom->add_option("--qubit", tom.qubit, "Qubit whose confusion matrix is used")
      ->capture_default_str();
  c_tom->add_option("--tau-ns", tom.tau_ns, "Transfer duration")->capture_default_str();

  CalibrateArgs cal;
  auto* c_cal = app.add_subcommand("calibrate", "Crosstalk + line-deconvolution demos");
  c_cal->add_option("--t-max-ns", cal.t_max_ns, "Step-response window")->capture_default_str();
  c_cal->add_option("--dt-ns", cal.dt_ns, "Waveform sample spacing")->capture_default_str();
  c_cal->add_option("--settle-ns", cal.settle_ns, "Settling window start")->capture_default_str();
  c_cal->add_option("--lambda", cal.lambda, "Relative Tikhonov regularization")
      ->capture_default_str();

  OptimizeArgs opt;
  auto* c_opt = app.add_subcommand("optimize", "In-situ schedule refinement");
  c_opt->add_option("--tau-ns", opt.tau_ns, "Transfer duration")->capture_default_str();
  c_opt->add_option("--perturb", opt.perturb, "Relative amplitude perturbation before refining")
      ->capture_default_str();
  c_opt->add_option("--max-iters", opt.max_iters, "Simplex iteration cap")->capture_default_str();
  c_opt->add_option("--tol", opt.tol, "Simplex convergence tolerance")->capture_default_str();

  SelfcheckArgs slf;
  auto* c_slf = app.add_subcommand("selfcheck", "Re-validate the resolved configuration");
  c_slf->add_flag("--dump", slf.dump, "Also write and print the resolved config");

  try {
    app.parse(argc, argv);
    if (g.workers < 1) throw ValidationError("--workers must be at least 1");
    if (c_syn->parsed()) run_synthesize(g, syn);
    if (c_evo->parsed()) run_evolve(g, evo);
    if (c_che->parsed()) run_chevron(g, che);
    if (c_phs->parsed()) run_phase_scan(g, phs);
    if (c_fid->parsed()) run_fidelity_decay(g, fid);
    if (c_tom->parsed()) run_tomography(g, tom);
    if (c_cal->parsed()) run_calibrate(g, cal);
    if (c_opt->parsed()) run_optimize(g, opt);
    if (c_slf->parsed()) run_selfcheck(g, slf);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const InfeasibleScheduleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& h : e.headroom) {
      std::cerr << "  link " << h.link << ": target " << report::format_double(h.target_mhz)
                << " MHz exceeds maximum " << report::format_double(h.maximum_mhz) << " MHz\n";
    }
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
