#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "pathent/stats.hpp"

using namespace pathent;

TEST_SUITE("stats") {

TEST_CASE("estimates from raw tallies") {
  const ClickEstimates e = estimate_probabilities({4, 1, 1, 1});
  CHECK(e.nc_nc.value == 0.25);
  CHECK(e.c_nc.value == 0.25);
  CHECK(e.nc_c.value == 0.25);
  CHECK(e.c_c.value == 0.25);
  CHECK(e.c_c.sigma == doctest::Approx(std::sqrt(0.25 * 0.75 / 4.0)));

  const ClickEstimates quiet = estimate_probabilities({100, 0, 0, 0});
  CHECK(quiet.nc_nc.value == 1.0);
  CHECK(quiet.nc_nc.sigma == 0.0);
  CHECK(quiet.c_c.sigma == 0.0);

  CHECK_THROWS_AS(estimate_probabilities({0, 0, 0, 0}), ValidationError);
  CHECK_THROWS_AS(estimate_probabilities({3, 2, 1, 1}), ValidationError);
}

TEST_CASE("witness standard deviation") {
  // Published row; its rounded entries sum to 1.0001.
  const double n = 5760000.0;
  const ClickEstimates e{binomial_estimate(0.2575, n), binomial_estimate(0.2504, n), binomial_estimate(0.2370, n),
                         binomial_estimate(0.2552, n)};
  CHECK(std::abs(sigma_w_exp(e) - 7.2e-4) < 0.5e-4);
  double expected = 0.0;
  for (double p : {0.2575, 0.2504, 0.2370, 0.2552}) expected += std::sqrt(p * (1.0 - p) / n);
  CHECK(sigma_w_exp(e) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("linearized square-root bounds hold everywhere") {
  std::mt19937_64 rng(503);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double x = u(rng);
    const double y = u(rng);
    const double xb = u(rng) + 1e-9;
    const double yb = u(rng) + 1e-9;
    CHECK(std::sqrt(x * y) <= linearized_sqrt_product(x, y, xb, yb) + 1e-12);
    CHECK(linearized_sqrt_product(xb, yb, xb, yb) == doctest::Approx(std::sqrt(xb * yb)));

    const double s = u(rng);
    const double sb = std::min(u(rng), 1.0 - 1e-9) + 1e-12;
    CHECK(std::sqrt(s * (1.0 - s)) <= linearized_sqrt_binary(s, sb) + 1e-12);
  }
  CHECK(linearized_sqrt_product(0.0, 0.0, 0.0, 0.5) == 0.0);
  CHECK_THROWS_AS(linearized_sqrt_product(0.1, 0.0, 0.0, 0.5), NumericalError);
}

TEST_CASE("PPT-bound deviation") {
  const ClickEstimates z = estimate_from_probabilities({0.9, 0.05, 0.04, 0.01}, 1e6);
  const WitnessCoefficients c{0.1, 0.4, -0.2, 0.05, -0.07};
  const ProbEstimate p1{1e-4, 1e-5};
  const ProbEstimate p2{2e-4, 2e-5};
  const double base = sigma_ppt_max(z, p1, p2, c, 0.45);
  CHECK(base > 0.0);

  // Grows with every input uncertainty.
  ClickEstimates wider = z;
  wider.c_c.sigma *= 2.0;
  CHECK(sigma_ppt_max(wider, p1, p2, c, 0.45) > base);
  CHECK(sigma_ppt_max(z, {1e-4, 2e-5}, p2, c, 0.45) > base);
  CHECK(sigma_ppt_max(z, p1, p2, c, 0.6) > base);

  // Signs of the coefficients do not matter.
  const WitnessCoefficients flipped{-0.1, 0.4, 0.2, -0.05, 0.07};
  CHECK(sigma_ppt_max(z, p1, p2, flipped, 0.45) == doctest::Approx(base).epsilon(1e-14));

  CHECK_THROWS_AS(sigma_ppt_max(z, {0.3, 0.0}, {0.25, 0.0}, c, 0.45), DomainError);
}

TEST_CASE("violation significance") {
  CHECK(violation_k(0.0253, 7e-4, 0.0071, 2.2e-3) == doctest::Approx((0.0253 - 0.0071) / 2.9e-3));
  CHECK(violation_k(0.01, 1e-3, 0.02, 1e-3) == -violation_k(0.02, 1e-3, 0.01, 1e-3));
  CHECK_THROWS_AS(violation_k(0.1, 0.0, 0.0, 0.0), NumericalError);
}

TEST_CASE("sampling is deterministic per seed") {
  const JointClickProbabilities jp{0.26, 0.25, 0.24, 0.25};
  CHECK(sample_counts(jp, 100000, 9) == sample_counts(jp, 100000, 9));
  CHECK_FALSE(sample_counts(jp, 100000, 9) == sample_counts(jp, 100000, 10));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));

  const CountRecord certain = sample_counts({1.0, 0.0, 0.0, 0.0}, 1000, 3);
  CHECK(certain == CountRecord{1000, 0, 0, 0});
  const CountRecord doubles = sample_counts({0.0, 0.0, 0.0, 1.0}, 1000, 3);
  CHECK(doubles == CountRecord{1000, 0, 0, 1000});
}

TEST_CASE("batch equals sequential draws") {
  const JointClickProbabilities jp{0.7, 0.1, 0.15, 0.05};
  const auto batch = sample_counts_batch(jp, 5000, 77, 64);
  REQUIRE(batch.size() == 64);
  for (std::size_t i = 0; i < batch.size(); ++i) CHECK(batch[i] == sample_counts(jp, 5000, derive_seed(77, i)));
}

TEST_CASE("sample moments match the multinomial") {
  const JointClickProbabilities jp{0.2715, 0.2504, 0.2393, 0.2388};
  constexpr std::uint64_t n = 100000;
  constexpr std::size_t trials = 2000;
  const auto batch = sample_counts_batch(jp, n, 2024, trials);
  double mean = 0.0;
  double mean_sq = 0.0;
  std::size_t covered = 0;
  for (const CountRecord& c : batch) {
    const double f = static_cast<double>(c.n_d) / n;
    mean += f;
    mean_sq += f * f;
    const ClickEstimates e = estimate_probabilities(c);
    if (std::abs(e.c_c.value - jp.c_c) <= e.c_c.sigma) ++covered;
  }
  mean /= trials;
  const double var = mean_sq / trials - mean * mean;
  const double sigma = std::sqrt(jp.c_c * (1.0 - jp.c_c) / n);
  CHECK(std::abs(mean - jp.c_c) < 4.0 * sigma / std::sqrt(static_cast<double>(trials)));
  CHECK(std::sqrt(var) == doctest::Approx(sigma).epsilon(0.06));
  // One-sigma coverage of a normal estimator is 68.3%.
  CHECK(std::abs(static_cast<double>(covered) / trials - 0.683) < 0.04);
}

}  // TEST_SUITE
