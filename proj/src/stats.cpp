#include "pathent/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <boost/random/binomial_distribution.hpp>

namespace pathent {

namespace {

// num / den for a linearized square-root bound. A vanishing estimate with a
// vanishing numerator contributes nothing.
double bound_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  if (num == 0.0) return 0.0;
  throw NumericalError("linearized square-root bound is singular at a zero estimate");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t draw_binomial(std::mt19937_64& engine, std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  // Boost's BTRD sampler needs a signed integer type.
  boost::random::binomial_distribution<std::int64_t, double> dist(static_cast<std::int64_t>(n), p);
  return static_cast<std::uint64_t>(dist(engine));
}

}  // namespace

void CountRecord::validate() const {
  if (n_total == 0) throw ValidationError("count record needs n_total > 0");
  if (n_a + n_b + n_d > n_total) throw ValidationError("click tallies exceed the number of heralds");
}

ProbEstimate binomial_estimate(double p, double n_total) {
  if (!(n_total > 0.0)) throw ValidationError("estimate needs a positive number of trials");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("probability estimate outside [0,1]: " + std::to_string(p));
  return {p, std::sqrt(p * (1.0 - p)) / std::sqrt(n_total)};
}

ClickEstimates estimate_probabilities(const CountRecord& counts) {
  counts.validate();
  const double n = static_cast<double>(counts.n_total);
  const double clicks = static_cast<double>(counts.n_a + counts.n_b + counts.n_d);
  return {
      binomial_estimate(1.0 - clicks / n, n),
      binomial_estimate(static_cast<double>(counts.n_b) / n, n),
      binomial_estimate(static_cast<double>(counts.n_a) / n, n),
      binomial_estimate(static_cast<double>(counts.n_d) / n, n),
  };
}

ClickEstimates estimate_from_probabilities(const JointClickProbabilities& jp, double n_total) {
  jp.validate();
  return {
      binomial_estimate(jp.nc_nc, n_total),
      binomial_estimate(jp.nc_c, n_total),
      binomial_estimate(jp.c_nc, n_total),
      binomial_estimate(jp.c_c, n_total),
  };
}

double sigma_w_exp(const ClickEstimates& e) { return e.c_nc.sigma + e.nc_c.sigma + e.c_c.sigma + e.nc_nc.sigma; }

double linearized_sqrt_product(double nc_nc, double c_c, double nc_nc_bar, double c_c_bar) {
  return bound_ratio(nc_nc * c_c_bar + c_c * nc_nc_bar, 2.0 * std::sqrt(c_c_bar * nc_nc_bar));
}

double linearized_sqrt_binary(double s, double s_bar) {
  return bound_ratio(s - 2.0 * s * s_bar + s_bar, 2.0 * std::sqrt(s_bar * (1.0 - s_bar)));
}

double sigma_ppt_max(const ClickEstimates& z, const ProbEstimate& p1, const ProbEstimate& p2,
                     const WitnessCoefficients& c, double beta) {
  const double s_bar = p1.value + p2.value;
  if (!(s_bar < 0.5)) throw DomainError("p1* + p2* must stay below 1/2 for the linearized bound");

  const double nn = z.nc_nc.value;
  const double cc = z.c_c.value;
  const double sqrt_term =
      bound_ratio(z.nc_nc.sigma * cc + z.c_c.sigma * nn, 2.0 * std::sqrt(cc * nn));
  const double sp = p1.sigma + p2.sigma;
  // The p* term keeps the s_bar summand of the printed bound.
  const double multiphoton_term =
      bound_ratio(sp - 2.0 * sp * s_bar + s_bar, 2.0 * std::sqrt(s_bar * (1.0 - s_bar)));

  return std::abs(c.c1) * z.nc_nc.sigma + c.c2 * sqrt_term + std::abs(c.c3) * z.c_c.sigma +
         std::abs(c.c4) * (z.c_nc.sigma + p1.sigma) + std::abs(c.c5) * (z.nc_c.sigma + p2.sigma) + p1.sigma +
         p2.sigma + 2.0 * beta * multiphoton_term;
}

double violation_k(double w_exp, double sigma_exp, double w_ppt_max, double sigma_ppt_max) {
  const double spread = sigma_ppt_max + sigma_exp;
  if (!(spread > 0.0)) throw NumericalError("violation significance needs a positive sigma sum");
  return (w_exp - w_ppt_max) / spread;
}

CountRecord sample_counts(const JointClickProbabilities& jp, std::uint64_t n_total, std::uint64_t seed) {
  jp.validate();
  if (n_total == 0) throw ValidationError("sampling needs n_total > 0");
  std::mt19937_64 engine(seed);
  CountRecord out{n_total, 0, 0, 0};

  double remaining_mass = 1.0;
  std::uint64_t remaining = n_total;
  const auto next = [&](double p) {
    const double conditional = remaining_mass > 0.0 ? std::clamp(p / remaining_mass, 0.0, 1.0) : 0.0;
    const std::uint64_t k = draw_binomial(engine, remaining, conditional);
    remaining -= k;
    remaining_mass -= p;
    return k;
  };
  out.n_a = next(jp.c_nc);
  out.n_b = next(jp.nc_c);
  out.n_d = next(jp.c_c);
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ splitmix64(index)); }

std::vector<CountRecord> sample_counts_batch(const JointClickProbabilities& jp, std::uint64_t n_total,
                                             std::uint64_t seed, std::size_t trials) {
  jp.validate();
  std::vector<CountRecord> out(trials);
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = sample_counts(jp, n_total, derive_seed(seed, static_cast<std::uint64_t>(i)));
  }
  return out;
}

}  // namespace pathent
