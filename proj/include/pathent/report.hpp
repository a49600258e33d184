#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "pathent/stats.hpp"
#include "pathent/witness.hpp"

namespace pathent {

inline constexpr const char* kRunReportSchema = "pathent.run_report";
inline constexpr const char* kPhaseSweepSchema = "pathent.phase_sweep";
inline constexpr const char* kAlphaSweepSchema = "pathent.alpha_sweep";
inline constexpr int kSchemaVersion = 1;

// Decimal text with 9 significant digits.
std::string format_number(double x);

/// Rounds every floating-point number in `j` to 9 significant digits so that
/// dumping prints at most that many. Throws NumericalError on non-finite
/// values.
void round_numbers(nlohmann::json& j);

// Pretty JSON text with a trailing newline, numbers rounded first.
std::string dump_json(nlohmann::json j);

struct HeraldSummary {
  double herald_probability = 0.0;
  double heralding_rate_hz = 0.0;
  double n_alpha = 0.0;
  double n_z = 0.0;
};

struct RunReport {
  std::string command;    // "run" or "certify"
  nlohmann::json input;   // echo of the configuration or input files
  WitnessReport witness;
  std::optional<HeraldSummary> herald;
  // Model probabilities of a simulated run, before any sampling.
  std::optional<JointClickProbabilities> model_alpha_basis;
  std::optional<JointClickProbabilities> model_z_basis;
  std::optional<CountRecord> alpha_counts;
  std::optional<CountRecord> z_counts;
  double elapsed_s = 0.0;
};

/// Everything except elapsed time is a pure function of the inputs; pass
/// include_timing = false for byte-comparable output.
nlohmann::json to_json(const RunReport& r, bool include_timing = true);

// Short human-readable verdict block.
std::string summary_text(const RunReport& r);

}  // namespace pathent
