#include "pathent/pipeline.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>

#include "pathent/measurement.hpp"
#include "pathent/stats.hpp"
#include "pathent/witness.hpp"

namespace pathent {

namespace {

using nlohmann::json;

double above_one_photon(const DensityOperator& rho, std::size_t mode) {
  const std::array<std::size_t, 1> keep{mode};
  const DensityOperator marginal = partial_trace(rho, keep);
  const Matrix& m = marginal.matrix();
  return std::max(0.0, 1.0 - m(0, 0).real() - m(1, 1).real());
}

DensityOperator marginal_of(const DensityOperator& rho, std::size_t mode) {
  const std::array<std::size_t, 1> keep{mode};
  return partial_trace(rho, keep);
}

MultiphotonBounds multiphoton_bounds(const ExperimentConfig& cfg, const DensityOperator& rho) {
  switch (cfg.multiphoton_mode) {
    case MultiphotonMode::fixed:
      return cfg.fixed_multiphoton;
    case MultiphotonMode::coincidence:
      return {multiphoton_coincidence_probability(marginal_of(rho, 0), cfg.detector_a),
              multiphoton_coincidence_probability(marginal_of(rho, 1), cfg.detector_b)};
    case MultiphotonMode::exact:
      return {above_one_photon(rho, 0), above_one_photon(rho, 1)};
  }
  throw ConfigError("unknown multiphoton mode");
}

CertifyInputs model_inputs(const Simulation& sim) {
  CertifyInputs in;
  in.alpha_basis = estimate_from_probabilities(sim.alpha_basis, sim.herald.n_alpha);
  in.z_basis = estimate_from_probabilities(sim.z_basis, sim.herald.n_z);
  in.setting1 = sim.setting_a;
  in.setting2 = sim.setting_b;
  in.multiphoton = sim.multiphoton;
  in.n_z = sim.herald.n_z;
  return in;
}

std::uint64_t herald_count(double expected, const char* basis) {
  const double n = std::round(expected);
  if (!(n >= 1.0)) {
    throw NumericalError(std::string("fewer than one herald expected in the ") + basis + " basis");
  }
  return static_cast<std::uint64_t>(n);
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Runs body(i) for i in [0, n) in parallel and rethrows the first failure in
// index order.
template <typename Body>
void parallel_points(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

DisplacementSetting shifted(const AmplitudeInterval& base, double mean, double phase) {
  const double below = base.alpha_mean - base.alpha_min;
  const double above = base.alpha_max - base.alpha_mean;
  return {mean, std::max(0.0, mean - below), mean + above, phase};
}

json interval_json(const AmplitudeInterval& a) {
  return {{"alpha_mean", a.alpha_mean}, {"alpha_min", a.alpha_min}, {"alpha_max", a.alpha_max}};
}

}  // namespace

Simulation simulate(const ExperimentConfig& cfg) {
  cfg.validate();
  const FockTruncation trunc(cfg.n_max);

  Simulation sim{simulate_heralded_state(cfg.source, cfg.phases, trunc), {}, {}, {}, {}, {}, {}};
  sim.setting_a =
      phased_setting(cfg.alice.alpha_mean, cfg.alice.alpha_min, cfg.alice.alpha_max, Side::alice, cfg.phases);
  sim.setting_b = phased_setting(cfg.bob.alpha_mean, cfg.bob.alpha_min, cfg.bob.alpha_max, Side::bob, cfg.phases);
  sim.alpha_basis =
      joint_click_probabilities(sim.state.rho, sim.setting_a, sim.setting_b, cfg.detector_a, cfg.detector_b);
  sim.z_basis = joint_click_probabilities(sim.state.rho, DisplacementSetting::point(0.0),
                                          DisplacementSetting::point(0.0), cfg.detector_a, cfg.detector_b);
  sim.multiphoton = multiphoton_bounds(cfg, sim.state.rho);

  const double rate =
      heralding_rate(sim.state.herald_probability, cfg.timing.pump_rep_rate_hz, cfg.timing.duty_fraction);
  sim.herald.herald_probability = sim.state.herald_probability;
  sim.herald.heralding_rate_hz = rate;
  sim.herald.n_alpha = cfg.monte_carlo.n_alpha ? static_cast<double>(*cfg.monte_carlo.n_alpha)
                                               : rate * cfg.timing.alpha_basis_duration_s;
  sim.herald.n_z =
      cfg.monte_carlo.n_z ? static_cast<double>(*cfg.monte_carlo.n_z) : rate * cfg.timing.z_basis_duration_s;
  if (!(sim.herald.n_alpha > 0.0 && sim.herald.n_z > 0.0)) {
    throw NumericalError("the configuration yields no heralds");
  }
  return sim;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Simulation sim = simulate(cfg);

  RunReport report;
  report.command = "run";
  report.input = cfg.to_json();
  report.herald = sim.herald;
  report.model_alpha_basis = sim.alpha_basis;
  report.model_z_basis = sim.z_basis;

  CertifyInputs in = model_inputs(sim);
  if (cfg.monte_carlo.enabled) {
    const CountRecord alpha_counts =
        sample_counts(sim.alpha_basis, herald_count(sim.herald.n_alpha, "alpha"), derive_seed(cfg.monte_carlo.seed, 0));
    const CountRecord z_counts =
        sample_counts(sim.z_basis, herald_count(sim.herald.n_z, "z"), derive_seed(cfg.monte_carlo.seed, 1));
    in.alpha_basis = estimate_probabilities(alpha_counts);
    in.z_basis = estimate_probabilities(z_counts);
    in.n_z = static_cast<double>(z_counts.n_total);
    report.alpha_counts = alpha_counts;
    report.z_counts = z_counts;
  }
  report.witness = certify(in);
  report.elapsed_s = elapsed_since(start);
  return report;
}

RunReport certify_from_counts(const CountFile& counts, const SettingsFile& settings) {
  const auto start = std::chrono::steady_clock::now();
  CertifyInputs in;
  in.alpha_basis = counts.alpha;
  in.z_basis = counts.z;
  in.setting1 = {settings.alice.alpha_mean, settings.alice.alpha_min, settings.alice.alpha_max, 0.0};
  in.setting2 = {settings.bob.alpha_mean, settings.bob.alpha_min, settings.bob.alpha_max, 0.0};
  in.multiphoton = settings.multiphoton;
  if (counts.p1_star) {
    in.multiphoton.p1_star = counts.p1_star->value;
    in.sigma_p1 = counts.p1_star->sigma;
  }
  if (counts.p2_star) {
    in.multiphoton.p2_star = counts.p2_star->value;
    in.sigma_p2 = counts.p2_star->sigma;
  }
  in.n_z = counts.n_z;

  RunReport report;
  report.command = "certify";
  report.input = {
      {"settings",
       {{"alice", interval_json(settings.alice)},
        {"bob", interval_json(settings.bob)},
        {"p1_star", settings.multiphoton.p1_star},
        {"p2_star", settings.multiphoton.p2_star}}},
      {"n_alpha", counts.n_alpha},
      {"n_z", counts.n_z},
      {"p_star_from_counts", counts.p1_star.has_value() || counts.p2_star.has_value()},
  };
  report.alpha_counts = counts.alpha_counts;
  report.z_counts = counts.z_counts;
  report.witness = certify(in);
  report.elapsed_s = elapsed_since(start);
  return report;
}

std::vector<PhaseSweepRow> sweep_phase(const ExperimentConfig& cfg, double phase_min, double phase_max,
                                       int steps) {
  cfg.validate();
  if (steps < 2) throw ValidationError("a phase sweep needs at least 2 steps");
  if (!std::isfinite(phase_min) || !std::isfinite(phase_max) || !(phase_min < phase_max)) {
    throw ValidationError("phase sweep needs finite phase_min < phase_max");
  }
  std::vector<PhaseSweepRow> rows(static_cast<std::size_t>(steps));
  parallel_points(rows.size(), [&](std::size_t i) {
    const double target = phase_min + (phase_max - phase_min) * static_cast<double>(i) / (steps - 1);
    ExperimentConfig point = cfg;
    point.phases.chi_a += target - point.phases.delta();
    const WitnessReport w = certify(model_inputs(simulate(point)));
    rows[i] = {target, w.w_exp, w.sigma_exp, w.w_ppt_max};
  });
  return rows;
}

AlphaSweep sweep_alpha(const ExperimentConfig& cfg, const AlphaGrid& grid) {
  if (!(grid.alpha_min >= 0.0 && grid.alpha_min <= grid.alpha_max && grid.alpha_max <= 2.0)) {
    throw ValidationError("alpha grid must satisfy 0 <= alpha_min <= alpha_max <= 2");
  }
  if (grid.steps < 1 || (grid.steps == 1 && grid.alpha_min != grid.alpha_max)) {
    throw ValidationError("alpha grid needs at least 2 steps unless alpha_min == alpha_max");
  }
  const Simulation sim = simulate(cfg);
  const auto n = static_cast<std::size_t>(grid.steps);
  const auto value_at = [&](std::size_t i) {
    return n == 1 ? grid.alpha_min
                  : grid.alpha_min + (grid.alpha_max - grid.alpha_min) * static_cast<double>(i) / (grid.steps - 1);
  };

  AlphaSweep out;
  out.rows.resize(n * n);
  parallel_points(n * n, [&](std::size_t idx) {
    const double a1 = value_at(idx / n);
    const double a2 = value_at(idx % n);
    const DisplacementSetting s1 = shifted(cfg.alice, a1, sim.setting_a.phase);
    const DisplacementSetting s2 = shifted(cfg.bob, a2, sim.setting_b.phase);
    const JointClickProbabilities jp =
        joint_click_probabilities(sim.state.rho, s1, s2, cfg.detector_a, cfg.detector_b);
    const FluctuationBound fb = w_ppt_fluctuation_bound(s1, s2, sim.z_basis, sim.multiphoton);
    const double bound = w_ppt_max(fb.w_tilde, sim.multiphoton, beta_bound(s1, s2));
    const double w = w_exp(jp);
    out.rows[idx] = {a1, a2, w, bound, w - bound};
  });

  const QubitProbs qp = QubitProbs::from_z_basis(sim.z_basis);
  for (auto [criterion, target] : {std::pair{AlphaCriterion::robust, &out.robust},
                                   std::pair{AlphaCriterion::max_violation, &out.max_violation}}) {
    try {
      *target = optimal_alpha(qp, criterion);
    } catch (const NumericalError&) {
      target->reset();
    }
  }
  return out;
}

std::string phase_sweep_csv(const std::vector<PhaseSweepRow>& rows) {
  std::ostringstream out;
  out << "delta_theta_rad,w_exp,sigma_exp,w_ppt_max\n";
  for (const auto& r : rows) {
    out << format_number(r.delta_theta_rad) << ',' << format_number(r.w_exp) << ',' << format_number(r.sigma_exp)
        << ',' << format_number(r.w_ppt_max) << '\n';
  }
  return out.str();
}

json phase_sweep_json(const std::vector<PhaseSweepRow>& rows, const json& input) {
  json j;
  j["schema"] = kPhaseSweepSchema;
  j["schema_version"] = kSchemaVersion;
  j["input"] = input;
  j["rows"] = json::array();
  for (const auto& r : rows) {
    j["rows"].push_back(
        {{"delta_theta_rad", r.delta_theta_rad}, {"w_exp", r.w_exp}, {"sigma_exp", r.sigma_exp}, {"w_ppt_max", r.w_ppt_max}});
  }
  return j;
}

std::string alpha_sweep_csv(const AlphaSweep& sweep) {
  std::ostringstream out;
  out << "alpha1,alpha2,w_exp,w_ppt_max,w_exp_minus_w_ppt_max\n";
  for (const auto& r : sweep.rows) {
    out << format_number(r.alpha1) << ',' << format_number(r.alpha2) << ',' << format_number(r.w_exp) << ','
        << format_number(r.w_ppt_max) << ',' << format_number(r.margin) << '\n';
  }
  return out.str();
}

json alpha_sweep_json(const AlphaSweep& sweep, const json& input) {
  const auto optimum = [](const std::optional<std::pair<double, double>>& o) -> json {
    if (!o) return nullptr;
    return {{"alpha1", o->first}, {"alpha2", o->second}};
  };
  json j;
  j["schema"] = kAlphaSweepSchema;
  j["schema_version"] = kSchemaVersion;
  j["input"] = input;
  j["optima"] = {{"robust", optimum(sweep.robust)}, {"max_violation", optimum(sweep.max_violation)}};
  j["rows"] = json::array();
  for (const auto& r : sweep.rows) {
    j["rows"].push_back({{"alpha1", r.alpha1},
                         {"alpha2", r.alpha2},
                         {"w_exp", r.w_exp},
                         {"w_ppt_max", r.w_ppt_max},
                         {"w_exp_minus_w_ppt_max", r.margin}});
  }
  return j;
}

}  // namespace pathent
