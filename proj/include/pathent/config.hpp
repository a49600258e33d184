#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pathent/herald.hpp"
#include "pathent/measurement.hpp"
#include "pathent/phases.hpp"
#include "pathent/types.hpp"

namespace pathent {

inline constexpr int kConfigSchemaVersion = 1;

/// Unreadable or malformed configuration input.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct AmplitudeInterval {
  double alpha_mean = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
};

enum class MultiphotonMode {
  fixed,        // p1*, p2* given in the config
  coincidence,  // 50/50 split of each heralded signal marginal
  exact,        // population above one photon in each signal marginal
};

std::string to_string(MultiphotonMode mode);

struct TimingConfig {
  double pump_rep_rate_hz = 0.0;
  double duty_fraction = 0.0;
  double alpha_basis_duration_s = 0.0;
  double z_basis_duration_s = 0.0;
};

struct MonteCarloConfig {
  bool enabled = false;
  std::uint64_t seed = 0;
  // Heralds per basis; when absent they follow from rate x duration.
  std::optional<std::uint64_t> n_alpha;
  std::optional<std::uint64_t> n_z;
};

/// Everything an end-to-end run needs. Physics fields have no defaults in the
/// file format; numerics (truncation, seed) do.
struct ExperimentConfig {
  SourceParams source;
  PhaseConfig phases;
  AmplitudeInterval alice;
  AmplitudeInterval bob;
  DetectorModel detector_a;
  DetectorModel detector_b;
  MultiphotonMode multiphoton_mode = MultiphotonMode::exact;
  MultiphotonBounds fixed_multiphoton;
  TimingConfig timing;
  MonteCarloConfig monte_carlo;
  int n_max = 6;
  std::optional<std::string> report_path;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Range checks of every owning module. Throws ConfigError.
  void validate() const;

  nlohmann::json to_json() const;
};

}  // namespace pathent
