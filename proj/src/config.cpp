#include "pathent/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>

namespace pathent {

namespace {

using nlohmann::json;

const json& section(const json& j, const char* name) {
  if (!j.contains(name)) throw ConfigError(std::string("missing section '") + name + "'");
  const json& s = j.at(name);
  if (!s.is_object()) throw ConfigError(std::string("section '") + name + "' must be an object");
  return s;
}

// Rejects keys outside `allowed` so that misspelled physics fields do not
// silently fall back to something else.
void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError("unknown field '" + item.key() + "' in " + where);
  }
}

double number(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + " must be finite");
  return x;
}

AmplitudeInterval interval(const json& j, const std::string& where) {
  only_keys(j, where, {"alpha_mean", "alpha_min", "alpha_max"});
  return {number(j, where, "alpha_mean"), number(j, where, "alpha_min"), number(j, where, "alpha_max")};
}

// JSON built in code stores small literals as signed integers.
bool is_unsigned_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

MultiphotonMode parse_mode(const std::string& s) {
  if (s == "fixed") return MultiphotonMode::fixed;
  if (s == "coincidence") return MultiphotonMode::coincidence;
  if (s == "exact") return MultiphotonMode::exact;
  throw ConfigError("multiphoton.mode must be fixed, coincidence or exact, got '" + s + "'");
}

// DomainError (p1* + p2* above 1/2) passes through; it has its own exit status.
template <typename F>
void rethrow_as_config(const char* what, F&& check) {
  try {
    check();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string to_string(MultiphotonMode mode) {
  switch (mode) {
    case MultiphotonMode::fixed: return "fixed";
    case MultiphotonMode::coincidence: return "coincidence";
    case MultiphotonMode::exact: return "exact";
  }
  return "exact";
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  only_keys(j, "config",
            {"schema_version", "source", "phases_rad", "displacement", "detectors", "multiphoton", "timing",
             "monte_carlo", "numerics", "output"});
  if (j.contains("schema_version") &&
      !(j.at("schema_version").is_number_integer() && j.at("schema_version").get<int>() == kConfigSchemaVersion)) {
    throw ConfigError("unsupported config schema_version (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }
  ExperimentConfig c;

  const json& src = section(j, "source");
  only_keys(src, "source",
            {"pair_probability", "signal_transmission_a", "signal_transmission_b", "idler_transmission_a",
             "idler_transmission_b", "false_herald_probability", "herald_snr"});
  c.source.pair_probability = number(src, "source", "pair_probability");
  c.source.signal_transmission_a = number(src, "source", "signal_transmission_a");
  c.source.signal_transmission_b = number(src, "source", "signal_transmission_b");
  c.source.idler_transmission_a = number(src, "source", "idler_transmission_a");
  c.source.idler_transmission_b = number(src, "source", "idler_transmission_b");
  const bool has_f = src.contains("false_herald_probability");
  const bool has_snr = src.contains("herald_snr");
  if (has_f == has_snr) {
    throw ConfigError("source needs exactly one of false_herald_probability and herald_snr");
  }
  if (has_f) {
    c.source.false_herald_probability = number(src, "source", "false_herald_probability");
  } else {
    const double snr = number(src, "source", "herald_snr");
    rethrow_as_config("source.herald_snr",
                      [&] { c.source.false_herald_probability = SourceParams::false_herald_from_snr(snr); });
  }

  const json& ph = section(j, "phases_rad");
  only_keys(ph, "phases_rad",
            {"phi_a", "phi_b", "zeta_a", "zeta_b", "chi_a", "chi_b", "xi_a_long", "xi_a_short", "xi_b_long",
             "xi_b_short"});
  c.phases.phi_a = number(ph, "phases_rad", "phi_a");
  c.phases.phi_b = number(ph, "phases_rad", "phi_b");
  c.phases.zeta_a = number(ph, "phases_rad", "zeta_a");
  c.phases.zeta_b = number(ph, "phases_rad", "zeta_b");
  c.phases.chi_a = number(ph, "phases_rad", "chi_a");
  c.phases.chi_b = number(ph, "phases_rad", "chi_b");
  c.phases.xi_a_long = number(ph, "phases_rad", "xi_a_long");
  c.phases.xi_a_short = number(ph, "phases_rad", "xi_a_short");
  c.phases.xi_b_long = number(ph, "phases_rad", "xi_b_long");
  c.phases.xi_b_short = number(ph, "phases_rad", "xi_b_short");

  const json& disp = section(j, "displacement");
  only_keys(disp, "displacement", {"alice", "bob"});
  c.alice = interval(section(disp, "alice"), "displacement.alice");
  c.bob = interval(section(disp, "bob"), "displacement.bob");

  const json& det = section(j, "detectors");
  only_keys(det, "detectors", {"efficiency_a", "efficiency_b"});
  c.detector_a.efficiency = number(det, "detectors", "efficiency_a");
  c.detector_b.efficiency = number(det, "detectors", "efficiency_b");

  const json& mp = section(j, "multiphoton");
  only_keys(mp, "multiphoton", {"mode", "p1_star", "p2_star"});
  if (!mp.contains("mode") || !mp.at("mode").is_string()) throw ConfigError("multiphoton.mode is required");
  c.multiphoton_mode = parse_mode(mp.at("mode").get<std::string>());
  if (c.multiphoton_mode == MultiphotonMode::fixed) {
    c.fixed_multiphoton = {number(mp, "multiphoton", "p1_star"), number(mp, "multiphoton", "p2_star")};
  } else if (mp.contains("p1_star") || mp.contains("p2_star")) {
    throw ConfigError("multiphoton.p1_star/p2_star are only read in fixed mode");
  }

  const json& t = section(j, "timing");
  only_keys(t, "timing", {"pump_rep_rate_hz", "duty_fraction", "alpha_basis_duration_s", "z_basis_duration_s"});
  c.timing.pump_rep_rate_hz = number(t, "timing", "pump_rep_rate_hz");
  c.timing.duty_fraction = number(t, "timing", "duty_fraction");
  c.timing.alpha_basis_duration_s = number(t, "timing", "alpha_basis_duration_s");
  c.timing.z_basis_duration_s = number(t, "timing", "z_basis_duration_s");

  if (j.contains("monte_carlo")) {
    const json& mc = section(j, "monte_carlo");
    only_keys(mc, "monte_carlo", {"enabled", "seed", "n_alpha", "n_z"});
    if (mc.contains("enabled")) {
      if (!mc.at("enabled").is_boolean()) throw ConfigError("monte_carlo.enabled must be a boolean");
      c.monte_carlo.enabled = mc.at("enabled").get<bool>();
    }
    if (mc.contains("seed")) {
      if (!is_unsigned_integer(mc.at("seed"))) throw ConfigError("monte_carlo.seed must be an unsigned integer");
      c.monte_carlo.seed = mc.at("seed").get<std::uint64_t>();
    }
    for (const auto& [key, target] : {std::pair{"n_alpha", &c.monte_carlo.n_alpha}, std::pair{"n_z", &c.monte_carlo.n_z}}) {
      if (!mc.contains(key)) continue;
      if (!is_unsigned_integer(mc.at(key)) || mc.at(key).get<std::uint64_t>() == 0) {
        throw ConfigError(std::string("monte_carlo.") + key + " must be a positive integer");
      }
      *target = mc.at(key).get<std::uint64_t>();
    }
  }

  if (j.contains("numerics")) {
    const json& num = section(j, "numerics");
    only_keys(num, "numerics", {"n_max"});
    if (num.contains("n_max")) {
      if (!num.at("n_max").is_number_integer()) throw ConfigError("numerics.n_max must be an integer");
      c.n_max = num.at("n_max").get<int>();
    }
  }

  if (j.contains("output")) {
    const json& out = section(j, "output");
    only_keys(out, "output", {"report_path"});
    if (out.contains("report_path")) {
      if (!out.at("report_path").is_string()) throw ConfigError("output.report_path must be a string");
      c.report_path = out.at("report_path").get<std::string>();
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void ExperimentConfig::validate() const {
  rethrow_as_config("source", [&] { source.validate(); });
  rethrow_as_config("phases_rad", [&] { phases.validate(); });
  rethrow_as_config("displacement.alice", [&] {
    DisplacementSetting{alice.alpha_mean, alice.alpha_min, alice.alpha_max, 0.0}.validate();
  });
  rethrow_as_config("displacement.bob",
                    [&] { DisplacementSetting{bob.alpha_mean, bob.alpha_min, bob.alpha_max, 0.0}.validate(); });
  rethrow_as_config("detectors.efficiency_a", [&] { detector_a.validate(); });
  rethrow_as_config("detectors.efficiency_b", [&] { detector_b.validate(); });
  if (multiphoton_mode == MultiphotonMode::fixed) {
    rethrow_as_config("multiphoton", [&] { fixed_multiphoton.validate(); });
  }
  if (!(timing.pump_rep_rate_hz > 0.0)) throw ConfigError("timing.pump_rep_rate_hz must be positive");
  if (!(timing.duty_fraction > 0.0 && timing.duty_fraction <= 1.0)) {
    throw ConfigError("timing.duty_fraction must lie in (0, 1]");
  }
  if (!(timing.alpha_basis_duration_s > 0.0) || !(timing.z_basis_duration_s > 0.0)) {
    throw ConfigError("timing durations must be positive");
  }
  if (n_max < 3 || n_max > 30) throw ConfigError("numerics.n_max must lie in [3, 30]");
}

json ExperimentConfig::to_json() const {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["source"] = {
      {"pair_probability", source.pair_probability},
      {"signal_transmission_a", source.signal_transmission_a},
      {"signal_transmission_b", source.signal_transmission_b},
      {"idler_transmission_a", source.idler_transmission_a},
      {"idler_transmission_b", source.idler_transmission_b},
      {"false_herald_probability", source.false_herald_probability},
  };
  j["phases_rad"] = {
      {"phi_a", phases.phi_a},         {"phi_b", phases.phi_b},
      {"zeta_a", phases.zeta_a},       {"zeta_b", phases.zeta_b},
      {"chi_a", phases.chi_a},         {"chi_b", phases.chi_b},
      {"xi_a_long", phases.xi_a_long}, {"xi_a_short", phases.xi_a_short},
      {"xi_b_long", phases.xi_b_long}, {"xi_b_short", phases.xi_b_short},
  };
  const auto interval_json = [](const AmplitudeInterval& a) {
    return json{{"alpha_mean", a.alpha_mean}, {"alpha_min", a.alpha_min}, {"alpha_max", a.alpha_max}};
  };
  j["displacement"] = {{"alice", interval_json(alice)}, {"bob", interval_json(bob)}};
  j["detectors"] = {{"efficiency_a", detector_a.efficiency}, {"efficiency_b", detector_b.efficiency}};
  j["multiphoton"] = {{"mode", to_string(multiphoton_mode)}};
  if (multiphoton_mode == MultiphotonMode::fixed) {
    j["multiphoton"]["p1_star"] = fixed_multiphoton.p1_star;
    j["multiphoton"]["p2_star"] = fixed_multiphoton.p2_star;
  }
  j["timing"] = {
      {"pump_rep_rate_hz", timing.pump_rep_rate_hz},
      {"duty_fraction", timing.duty_fraction},
      {"alpha_basis_duration_s", timing.alpha_basis_duration_s},
      {"z_basis_duration_s", timing.z_basis_duration_s},
  };
  j["monte_carlo"] = {{"enabled", monte_carlo.enabled}, {"seed", monte_carlo.seed}};
  if (monte_carlo.n_alpha) j["monte_carlo"]["n_alpha"] = *monte_carlo.n_alpha;
  if (monte_carlo.n_z) j["monte_carlo"]["n_z"] = *monte_carlo.n_z;
  j["numerics"] = {{"n_max", n_max}};
  if (report_path) j["output"] = {{"report_path", *report_path}};
  return j;
}

}  // namespace pathent
