// pathent: heralded path-entanglement simulation and witness certification.
//
//   pathent run          --config cfg.json [--out report.json]
//   pathent sweep-phase  --config cfg.json [--phase-min -3.14159 --phase-max 3.14159 --steps 41]
//   pathent sweep-alpha  --config cfg.json [--alpha-min 0 --alpha-max 1.5 --steps 31]
//   pathent certify      --counts counts.csv --settings settings.csv
//
// Exit status: 0 success, 2 configuration error, 3 numerical error,
// 4 p1* + p2* outside the linearized-bound domain.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pathent/config.hpp"
#include "pathent/count_file.hpp"
#include "pathent/pipeline.hpp"
#include "pathent/report.hpp"

namespace {

using namespace pathent;

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kDomainError = 4 };

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> truncation;
  std::string format;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_config, const std::string& default_format) {
  if (needs_config) cmd->add_option("--config", o.config, "Experiment configuration (JSON)")->required();
  cmd->add_option("--out", o.out, "Output file (default: standard output)");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed, overrides the configuration");
  cmd->add_option("--truncation", o.truncation, "Fock cutoff n_max, overrides the configuration");
  o.format = default_format;
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

ExperimentConfig load_config(const CommonOptions& o) {
  ExperimentConfig cfg = ExperimentConfig::load(o.config);
  if (o.seed) cfg.monte_carlo.seed = *o.seed;
  if (o.truncation) cfg.n_max = *o.truncation;
  cfg.validate();
  return cfg;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw ConfigError("cannot write " + path);
}

std::string report_csv(const RunReport& r) {
  const WitnessReport& w = r.witness;
  std::ostringstream out;
  out << "quantity,value\n";
  const std::pair<const char*, double> rows[] = {
      {"w_exp", w.w_exp},         {"sigma_exp", w.sigma_exp},         {"w_ppt", w.w_ppt},
      {"w_tilde_ppt", w.w_tilde_ppt}, {"beta", w.beta},               {"p1_star", w.multiphoton.p1_star},
      {"p2_star", w.multiphoton.p2_star}, {"w_ppt_max", w.w_ppt_max}, {"sigma_ppt_max", w.sigma_ppt_max},
      {"k", w.k},
  };
  for (const auto& [name, value] : rows) out << name << ',' << format_number(value) << '\n';
  out << "entangled," << (w.entangled() ? 1 : 0) << '\n';
  return out.str();
}

void write_report(const RunReport& report, const CommonOptions& o, const std::optional<std::string>& fallback) {
  const std::string path = !o.out.empty() ? o.out : fallback.value_or("");
  const std::string text = o.format == "csv" ? report_csv(report) : dump_json(to_json(report));
  emit(text, path);
  if (!path.empty()) std::cout << summary_text(report);
}

template <typename F>
int guarded(F&& f) {
  try {
    f();
    return kOk;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heralded path-entanglement simulation and witness certification"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "Simulate a configuration end to end and certify it");
  add_common(run, run_opts, true, "json");

  CommonOptions phase_opts;
  double phase_min = -std::numbers::pi;
  double phase_max = std::numbers::pi;
  int phase_steps = 41;
  CLI::App* sweep_phase_cmd = app.add_subcommand("sweep-phase", "Witness value versus relative phase");
  add_common(sweep_phase_cmd, phase_opts, true, "csv");
  sweep_phase_cmd->add_option("--phase-min", phase_min, "First relative phase [rad]")->capture_default_str();
  sweep_phase_cmd->add_option("--phase-max", phase_max, "Last relative phase [rad]")->capture_default_str();
  sweep_phase_cmd->add_option("--steps", phase_steps, "Number of phases (>= 2)")->capture_default_str();

  CommonOptions alpha_opts;
  AlphaGrid grid{0.0, 1.5, 31};
  CLI::App* sweep_alpha_cmd = app.add_subcommand("sweep-alpha", "Witness margin over a displacement grid");
  add_common(sweep_alpha_cmd, alpha_opts, true, "csv");
  sweep_alpha_cmd->add_option("--alpha-min", grid.alpha_min, "Smallest amplitude")->capture_default_str();
  sweep_alpha_cmd->add_option("--alpha-max", grid.alpha_max, "Largest amplitude (<= 2)")->capture_default_str();
  sweep_alpha_cmd->add_option("--steps", grid.steps, "Grid points per axis")->capture_default_str();

  CommonOptions certify_opts;
  std::string counts_path;
  std::string settings_path;
  CLI::App* certify_cmd = app.add_subcommand("certify", "Certify measured counts without simulation");
  add_common(certify_cmd, certify_opts, false, "json");
  certify_cmd->add_option("--counts", counts_path, "Count CSV")->required();
  certify_cmd->add_option("--settings", settings_path, "Settings sidecar CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? kOk : kConfigError;
  }

  if (*run) {
    return guarded([&] {
      const ExperimentConfig cfg = load_config(run_opts);
      write_report(run_experiment(cfg), run_opts, cfg.report_path);
    });
  }
  if (*sweep_phase_cmd) {
    return guarded([&] {
      const ExperimentConfig cfg = load_config(phase_opts);
      const auto rows = sweep_phase(cfg, phase_min, phase_max, phase_steps);
      emit(phase_opts.format == "csv" ? phase_sweep_csv(rows) : dump_json(phase_sweep_json(rows, cfg.to_json())),
           phase_opts.out);
    });
  }
  if (*sweep_alpha_cmd) {
    return guarded([&] {
      const ExperimentConfig cfg = load_config(alpha_opts);
      const AlphaSweep sweep = sweep_alpha(cfg, grid);
      emit(alpha_opts.format == "csv" ? alpha_sweep_csv(sweep) : dump_json(alpha_sweep_json(sweep, cfg.to_json())),
           alpha_opts.out);
      // Keep standard output clean when it carries the table.
      std::ostream& note = alpha_opts.out.empty() ? std::cerr : std::cout;
      for (const auto& [name, o] : {std::pair{"robust", sweep.robust}, std::pair{"max_violation", sweep.max_violation}}) {
        note << name << " optimum: "
             << (o ? format_number(o->first) + ", " + format_number(o->second) : std::string("none")) << '\n';
      }
    });
  }
  return guarded([&] {
    const RunReport report = certify_from_counts(read_count_file(counts_path), read_settings_file(settings_path));
    write_report(report, certify_opts, std::nullopt);
  });
}
