#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pathent/config.hpp"
#include "pathent/count_file.hpp"
#include "pathent/herald.hpp"
#include "pathent/report.hpp"

namespace pathent {

/// Noise-free model of one configuration.
struct Simulation {
  HeraldedState state;
  DisplacementSetting setting_a;
  DisplacementSetting setting_b;
  JointClickProbabilities alpha_basis;
  JointClickProbabilities z_basis;
  MultiphotonBounds multiphoton;
  HeraldSummary herald;
};

/// Heralded state, both bases, multiphoton bounds and the expected numbers
/// of heralds. Validates the configuration first.
Simulation simulate(const ExperimentConfig& cfg);

/// simulate -> optional Monte Carlo counts -> certification.
RunReport run_experiment(const ExperimentConfig& cfg);

/// Certification of externally measured data. p* rows in the count file take
/// precedence over the settings' p1_star/p2_star.
RunReport certify_from_counts(const CountFile& counts, const SettingsFile& settings);

struct PhaseSweepRow {
  double delta_theta_rad = 0.0;
  double w_exp = 0.0;
  double sigma_exp = 0.0;
  double w_ppt_max = 0.0;
};

/// Relative phase swept by shifting chi_a. Rows follow the phase grid.
std::vector<PhaseSweepRow> sweep_phase(const ExperimentConfig& cfg, double phase_min, double phase_max,
                                       int steps);

struct AlphaGrid {
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  int steps = 0;
};

struct AlphaSweepRow {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double w_exp = 0.0;
  double w_ppt_max = 0.0;
  double margin = 0.0;  // w_exp - w_ppt_max
};

struct AlphaSweep {
  std::vector<AlphaSweepRow> rows;  // alpha1-major
  // Empty when the criterion has no solution for the simulated populations.
  std::optional<std::pair<double, double>> robust;
  std::optional<std::pair<double, double>> max_violation;
};

/// Square grid of mean amplitudes. Each point keeps the configured interval
/// half-widths around its mean, clipped at zero.
AlphaSweep sweep_alpha(const ExperimentConfig& cfg, const AlphaGrid& grid);

std::string phase_sweep_csv(const std::vector<PhaseSweepRow>& rows);
nlohmann::json phase_sweep_json(const std::vector<PhaseSweepRow>& rows, const nlohmann::json& input);

std::string alpha_sweep_csv(const AlphaSweep& sweep);
nlohmann::json alpha_sweep_json(const AlphaSweep& sweep, const nlohmann::json& input);

}  // namespace pathent
