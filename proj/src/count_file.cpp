#include "pathent/count_file.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "pathent/report.hpp"

namespace pathent {

namespace {

const char* const kCountHeader = "basis,n_total,n_a,n_b,n_d";
const char* const kProbabilityHeader = "basis,n_total,p_nc_nc,p_nc_c,p_c_nc,p_c_c";
const char* const kSettingsHeader = "alpha1_min,alpha1_mean,alpha1_max,alpha2_min,alpha2_mean,alpha2_max,p1_star,p2_star";

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

// Non-empty lines that are not '#' comments, with their 1-based line numbers.
std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(number, t);
  }
  return out;
}

std::string where(int line) { return "line " + std::to_string(line); }

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(where(line) + ": '" + s + "' is not a finite number");
  }
  return v;
}

std::uint64_t parse_count(const std::string& s, int line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(where(line) + ": '" + s + "' is not a nonnegative integer");
  }
  return v;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Row {
  double n_total = 0.0;
  ClickEstimates estimates;
  std::optional<CountRecord> counts;
};

template <typename F>
auto as_config_error(int line, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ConfigError(where(line) + ": " + e.what());
  }
}

}  // namespace

CountFile parse_count_file(const std::string& text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ConfigError("count file is empty");
  const std::string& header = lines.front().second;
  const bool raw = header == kCountHeader;
  if (!raw && header != kProbabilityHeader) {
    throw ConfigError("count file header must be '" + std::string(kCountHeader) + "' or '" + kProbabilityHeader +
                      "'");
  }

  std::map<std::string, Row> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [line, content] = lines[i];
    const auto f = split(content);
    if (f.size() != 5 + (raw ? 0 : 1)) throw ConfigError(where(line) + ": wrong number of fields");
    const std::string& basis = f[0];
    if (basis != "alpha" && basis != "z" && basis != "p1_star" && basis != "p2_star") {
      throw ConfigError(where(line) + ": unknown basis '" + basis + "'");
    }
    if (rows.count(basis)) throw ConfigError(where(line) + ": duplicate basis '" + basis + "'");

    Row row;
    if (raw) {
      CountRecord c{parse_count(f[1], line), parse_count(f[2], line), parse_count(f[3], line),
                    parse_count(f[4], line)};
      row.estimates = as_config_error(line, [&] { return estimate_probabilities(c); });
      row.n_total = static_cast<double>(c.n_total);
      row.counts = c;
    } else {
      row.n_total = parse_double(f[1], line);
      const JointClickProbabilities jp{parse_double(f[2], line), parse_double(f[3], line),
                                       parse_double(f[4], line), parse_double(f[5], line)};
      row.estimates = as_config_error(line, [&] {
        if (basis == "alpha" || basis == "z") jp.validate(kMeasuredSumTolerance);
        return ClickEstimates{binomial_estimate(jp.nc_nc, row.n_total), binomial_estimate(jp.nc_c, row.n_total),
                              binomial_estimate(jp.c_nc, row.n_total), binomial_estimate(jp.c_c, row.n_total)};
      });
    }
    rows.emplace(basis, row);
  }

  CountFile out;
  for (const char* needed : {"alpha", "z"}) {
    if (!rows.count(needed)) throw ConfigError(std::string("count file has no '") + needed + "' row");
  }
  out.alpha = rows.at("alpha").estimates;
  out.n_alpha = rows.at("alpha").n_total;
  out.alpha_counts = rows.at("alpha").counts;
  out.z = rows.at("z").estimates;
  out.n_z = rows.at("z").n_total;
  out.z_counts = rows.at("z").counts;
  if (rows.count("p1_star")) out.p1_star = rows.at("p1_star").estimates.c_c;
  if (rows.count("p2_star")) out.p2_star = rows.at("p2_star").estimates.c_c;
  return out;
}

CountFile read_count_file(const std::filesystem::path& path) { return parse_count_file(read_text(path)); }

SettingsFile parse_settings_file(const std::string& text) {
  const auto lines = content_lines(text);
  if (lines.empty() || lines.front().second != kSettingsHeader) {
    throw ConfigError("settings file header must be '" + std::string(kSettingsHeader) + "'");
  }
  if (lines.size() != 2) throw ConfigError("settings file must hold exactly one data row");
  const auto& [line, content] = lines[1];
  const auto f = split(content);
  if (f.size() != 8) throw ConfigError(where(line) + ": settings row needs 8 fields");
  double v[8];
  for (std::size_t i = 0; i < 8; ++i) v[i] = parse_double(f[i], line);

  SettingsFile s;
  s.alice = {v[1], v[0], v[2]};
  s.bob = {v[4], v[3], v[5]};
  s.multiphoton = {v[6], v[7]};
  as_config_error(line, [&] {
    DisplacementSetting{s.alice.alpha_mean, s.alice.alpha_min, s.alice.alpha_max, 0.0}.validate();
    DisplacementSetting{s.bob.alpha_mean, s.bob.alpha_min, s.bob.alpha_max, 0.0}.validate();
    return 0;
  });
  // The p1* + p2* domain is checked at certification, where it maps to its
  // own exit status.
  if (!(s.multiphoton.p1_star >= 0.0 && s.multiphoton.p2_star >= 0.0)) {
    throw ConfigError(where(line) + ": p1_star and p2_star must be nonnegative");
  }
  return s;
}

SettingsFile read_settings_file(const std::filesystem::path& path) {
  return parse_settings_file(read_text(path));
}

std::string format_count_file(const CountRecord& alpha, const CountRecord& z) {
  std::ostringstream out;
  out << kCountHeader << '\n';
  for (const auto& [name, c] : {std::pair<const char*, const CountRecord&>{"alpha", alpha}, {"z", z}}) {
    out << name << ',' << c.n_total << ',' << c.n_a << ',' << c.n_b << ',' << c.n_d << '\n';
  }
  return out.str();
}

std::string format_settings_file(const SettingsFile& s) {
  std::ostringstream out;
  out << kSettingsHeader << '\n'
      << format_number(s.alice.alpha_min) << ',' << format_number(s.alice.alpha_mean) << ','
      << format_number(s.alice.alpha_max) << ',' << format_number(s.bob.alpha_min) << ','
      << format_number(s.bob.alpha_mean) << ',' << format_number(s.bob.alpha_max) << ','
      << format_number(s.multiphoton.p1_star) << ',' << format_number(s.multiphoton.p2_star) << '\n';
  return out.str();
}

}  // namespace pathent
