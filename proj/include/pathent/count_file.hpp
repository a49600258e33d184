#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pathent/config.hpp"
#include "pathent/stats.hpp"

namespace pathent {

/// Contents of a count CSV. Two headers are accepted:
///   basis,n_total,n_a,n_b,n_d                       (raw tallies)
///   basis,n_total,p_nc_nc,p_nc_c,p_c_nc,p_c_c       (frequencies with N)
/// Rows with basis "alpha" and "z" are required. Optional rows "p1_star" and
/// "p2_star" carry the multiphoton measurement: the double-click tally n_d
/// (or p_c_c) over n_total trials.
struct CountFile {
  ClickEstimates alpha;
  ClickEstimates z;
  double n_alpha = 0.0;
  double n_z = 0.0;
  std::optional<ProbEstimate> p1_star;
  std::optional<ProbEstimate> p2_star;
  // Raw tallies when the file used the count header.
  std::optional<CountRecord> alpha_counts;
  std::optional<CountRecord> z_counts;
};

struct SettingsFile {
  AmplitudeInterval alice;
  AmplitudeInterval bob;
  MultiphotonBounds multiphoton;
};

// Both readers throw ConfigError on malformed input.
CountFile parse_count_file(const std::string& text);
CountFile read_count_file(const std::filesystem::path& path);

SettingsFile parse_settings_file(const std::string& text);
SettingsFile read_settings_file(const std::filesystem::path& path);

std::string format_count_file(const CountRecord& alpha, const CountRecord& z);
std::string format_settings_file(const SettingsFile& settings);

}  // namespace pathent
