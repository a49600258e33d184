#include "pathent/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace pathent {

namespace {

using nlohmann::json;

json estimate_json(const ProbEstimate& e) { return {{"value", e.value}, {"sigma", e.sigma}}; }

json estimates_json(const ClickEstimates& e) {
  return {{"nc_nc", estimate_json(e.nc_nc)},
          {"nc_c", estimate_json(e.nc_c)},
          {"c_nc", estimate_json(e.c_nc)},
          {"c_c", estimate_json(e.c_c)}};
}

json probabilities_json(const JointClickProbabilities& p) {
  return {{"nc_nc", p.nc_nc}, {"nc_c", p.nc_c}, {"c_nc", p.c_nc}, {"c_c", p.c_c}};
}

json counts_json(const CountRecord& c) {
  return {{"n_total", c.n_total}, {"n_a", c.n_a}, {"n_b", c.n_b}, {"n_d", c.n_d}};
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

void round_numbers(json& j) {
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw NumericalError("report contains a non-finite number");
    j = std::strtod(format_number(x).c_str(), nullptr);
    return;
  }
  if (j.is_structured()) {
    for (auto& item : j) round_numbers(item);
  }
}

std::string dump_json(json j) {
  round_numbers(j);
  return j.dump(2) + "\n";
}

json to_json(const RunReport& r, bool include_timing) {
  const WitnessReport& w = r.witness;
  json j;
  j["schema"] = kRunReportSchema;
  j["schema_version"] = kSchemaVersion;
  j["command"] = r.command;
  j["input"] = r.input;
  j["estimates"] = {{"alpha_basis", estimates_json(w.alpha_estimates)},
                    {"z_basis", estimates_json(w.z_estimates)},
                    {"p1_star", estimate_json(w.p1_estimate)},
                    {"p2_star", estimate_json(w.p2_estimate)}};
  if (r.model_alpha_basis && r.model_z_basis) {
    j["model_probabilities"] = {{"alpha_basis", probabilities_json(*r.model_alpha_basis)},
                                {"z_basis", probabilities_json(*r.model_z_basis)}};
  }
  if (r.alpha_counts && r.z_counts) {
    j["counts"] = {{"alpha_basis", counts_json(*r.alpha_counts)}, {"z_basis", counts_json(*r.z_counts)}};
  }
  if (r.herald) {
    j["herald"] = {{"herald_probability", r.herald->herald_probability},
                   {"heralding_rate_hz", r.herald->heralding_rate_hz},
                   {"n_alpha", r.herald->n_alpha},
                   {"n_z", r.herald->n_z}};
  }
  j["witness"] = {
      {"w_exp", w.w_exp},
      {"sigma_exp", w.sigma_exp},
      {"w_ppt", w.w_ppt},
      {"w_tilde_ppt", w.w_tilde_ppt},
      {"alpha_interval_slack", w.alpha_interval_slack},
      {"beta", w.beta},
      {"p1_star", w.multiphoton.p1_star},
      {"p2_star", w.multiphoton.p2_star},
      {"w_ppt_max", w.w_ppt_max},
      {"sigma_ppt_max", w.sigma_ppt_max},
      {"k", w.k},
      {"alpha1_at_max", w.alpha1_at_max},
      {"alpha2_at_max", w.alpha2_at_max},
      {"coefficients",
       {{"c1", w.coefficients.c1},
        {"c2", w.coefficients.c2},
        {"c3", w.coefficients.c3},
        {"c4", w.coefficients.c4},
        {"c5", w.coefficients.c5}}},
  };
  j["verdict"] = w.entangled() ? "entangled" : "not-entangled";
  if (include_timing) j["timing"] = {{"elapsed_s", r.elapsed_s}};
  return j;
}

std::string summary_text(const RunReport& r) {
  const WitnessReport& w = r.witness;
  std::ostringstream out;
  out << "w_exp        " << format_number(w.w_exp) << " +/- " << format_number(w.sigma_exp) << '\n'
      << "w_ppt        " << format_number(w.w_ppt) << '\n'
      << "w_tilde_ppt  " << format_number(w.w_tilde_ppt) << '\n'
      << "w_ppt_max    " << format_number(w.w_ppt_max) << " +/- " << format_number(w.sigma_ppt_max) << '\n'
      << "k            " << format_number(w.k) << '\n'
      << "verdict      " << (w.entangled() ? "entangled" : "not-entangled") << '\n';
  return out.str();
}

}  // namespace pathent
