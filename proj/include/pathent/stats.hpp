#pragma once

#include <cstdint>
#include <vector>

#include "pathent/types.hpp"

namespace pathent {

/// Raw tallies of one basis: heralds, Alice-only clicks, Bob-only clicks and
/// double clicks.
struct CountRecord {
  std::uint64_t n_total = 0;
  std::uint64_t n_a = 0;
  std::uint64_t n_b = 0;
  std::uint64_t n_d = 0;

  void validate() const;
  friend bool operator==(const CountRecord&, const CountRecord&) = default;
};

struct ProbEstimate {
  double value = 0.0;
  double sigma = 0.0;
};

struct ClickEstimates {
  ProbEstimate nc_nc;
  ProbEstimate nc_c;
  ProbEstimate c_nc;
  ProbEstimate c_c;

  JointClickProbabilities values() const { return {nc_nc.value, nc_c.value, c_nc.value, c_c.value}; }
};

// Frequency p over n trials with sigma = sqrt(p(1-p)/n).
ProbEstimate binomial_estimate(double p, double n_total);

ClickEstimates estimate_probabilities(const CountRecord& counts);

// Same estimators when only the frequencies and the number of heralds are known.
ClickEstimates estimate_from_probabilities(const JointClickProbabilities& jp, double n_total);

double sigma_w_exp(const ClickEstimates& estimates);

/// Standard deviation bound of the w_ppt^max estimator. `z` are the z-basis
/// estimates, `p1`/`p2` the multiphoton-probability estimates.
double sigma_ppt_max(const ClickEstimates& z, const ProbEstimate& p1, const ProbEstimate& p2,
                     const WitnessCoefficients& c, double beta);

// Right-hand side of the linearized bound on sqrt(P_nc,nc P_c,c) for true
// values (nc_nc, c_c) around the estimates (nc_nc_bar, c_c_bar).
double linearized_sqrt_product(double nc_nc, double c_c, double nc_nc_bar, double c_c_bar);

// Right-hand side of the linearized bound on sqrt(s (1 - s)) around s_bar.
double linearized_sqrt_binary(double s, double s_bar);

/// k = (w_exp - w_ppt_max) / (sigma_ppt_max + sigma_exp).
double violation_k(double w_exp, double sigma_exp, double w_ppt_max, double sigma_ppt_max);

/// Multinomial draw of n_total heralds over the four outcomes, by sequential
/// binomial conditioning on a mt19937_64 stream seeded with `seed`.
CountRecord sample_counts(const JointClickProbabilities& jp, std::uint64_t n_total,
                          std::uint64_t seed);

// splitmix64 of (seed, index); seeds for independent batches.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// `trials` independent draws, trial i seeded with derive_seed(seed, i).
/// Runs in parallel; output is in trial order.
std::vector<CountRecord> sample_counts_batch(const JointClickProbabilities& jp,
                                             std::uint64_t n_total, std::uint64_t seed,
                                             std::size_t trials);

}  // namespace pathent
