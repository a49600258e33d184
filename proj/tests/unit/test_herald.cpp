#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "pathent/herald.hpp"
#include "pathent/measurement.hpp"
#include "herald_oracle.hpp"
#include "support.hpp"

using namespace pathent;
using namespace testing_support;

namespace {

PhaseConfig random_phases(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

double fidelity_with_pure(const Matrix& rho, const Vector& psi) { return (psi.adjoint() * rho * psi)(0, 0).real(); }

}  // namespace

TEST_SUITE("herald") {

TEST_CASE("heralded state matches the brute-force four-mode oracle") {
  std::mt19937_64 rng(101);
  const FockTruncation t(kOracleNmax);
  const SourceParams cases[] = {
      {0.05, 1.0, 1.0, 1.0, 1.0, 0.0},
      {0.1, 0.7, 0.4, 0.3, 0.8, 0.0},
      {0.2, 0.5, 0.9, 0.6, 0.45, 0.3},
  };
  for (const SourceParams& src : cases) {
    const PhaseConfig ph = random_phases(rng);
    const HeraldedState hs = simulate_heralded_state(src, ph, t);
    const Oracle o = brute_force(src, ph, t, false);
    CHECK(max_abs(hs.rho.matrix() - o.signal_state) < 1e-10);
    CHECK(true_herald_probability(src, t) == doctest::Approx(o.true_herald).epsilon(1e-10));
    const double expected_herald = std::min(1.0, o.true_herald / (1.0 - src.false_herald_probability));
    CHECK(hs.herald_probability == doctest::Approx(expected_herald).epsilon(1e-10));
  }
}

TEST_CASE("signal loss commutes with herald conditioning") {
  std::mt19937_64 rng(103);
  const FockTruncation t(kOracleNmax);
  const SourceParams src{0.15, 0.35, 0.8, 0.5, 0.7, 0.0};
  const PhaseConfig ph = random_phases(rng);
  const Oracle before = brute_force(src, ph, t, true);
  const Oracle after = brute_force(src, ph, t, false);
  CHECK(max_abs(before.signal_state - after.signal_state) < 1e-10);
  CHECK(max_abs(simulate_heralded_state(src, ph, t).rho.matrix() - before.signal_state) < 1e-10);
}

TEST_CASE("weak pumping approaches the single-photon path-entangled state") {
  const FockTruncation t(kOracleNmax);
  const SourceParams src{1e-6, 1.0, 1.0, 1.0, 1.0, 0.0};
  const HeraldedState hs = simulate_heralded_state(src, PhaseConfig{}, t);
  Vector psi = Vector::Zero(16);
  psi(1 * 4 + 0) = std::sqrt(0.5);
  psi(0 * 4 + 1) = std::sqrt(0.5);
  CHECK(fidelity_with_pure(hs.rho.matrix(), psi) >= 0.999);

  std::mt19937_64 rng(107);
  const PhaseConfig ph = random_phases(rng);
  const HeraldedState phased = simulate_heralded_state(src, ph, t);
  psi(1 * 4 + 0) = std::polar(std::sqrt(0.5), ph.photon_phase(Side::alice));
  psi(0 * 4 + 1) = std::polar(std::sqrt(0.5), ph.photon_phase(Side::bob));
  CHECK(fidelity_with_pure(phased.rho.matrix(), psi) >= 0.999);
}

TEST_CASE("double-pair admixture is of order the pair probability") {
  const double p = 3e-3;
  const HeraldedState hs = simulate_heralded_state({p, 1.0, 1.0, 1.0, 1.0, 0.0}, PhaseConfig{}, FockTruncation(4));
  const std::array<int, 2> n11{1, 1};
  const std::array<int, 2> n10{1, 0};
  const std::array<int, 2> n01{0, 1};
  const double ratio = hs.rho.population(n11) / (hs.rho.population(n10) + hs.rho.population(n01));
  CHECK(ratio >= p / 4.0);
  CHECK(ratio <= 4.0 * p);
}

TEST_CASE("pure noise heralds of an idle source leave vacuum") {
  const HeraldedState hs = simulate_heralded_state({0.0, 1.0, 1.0, 1.0, 1.0, 1.0}, PhaseConfig{}, FockTruncation(3));
  Matrix vac = Matrix::Zero(16, 16);
  vac(0, 0) = 1.0;
  CHECK(max_abs(hs.rho.matrix() - vac) < 1e-15);
  CHECK(hs.herald_probability == 1.0);
  CHECK_THROWS_AS(simulate_heralded_state({0.0, 1.0, 1.0, 1.0, 1.0, 0.0}, PhaseConfig{}, FockTruncation(3)),
                  NumericalError);
}

TEST_CASE("heralded state is normalized for random parameters") {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SourceParams src{0.3 * u(rng), u(rng), u(rng), 0.05 + 0.95 * u(rng), 0.05 + 0.95 * u(rng), 0.9 * u(rng)};
    const HeraldedState hs = simulate_heralded_state(src, random_phases(rng), FockTruncation(4));
    CHECK(std::abs(hs.rho.trace() - 1.0) < 1e-12);
    CHECK(hs.herald_probability >= 0.0);
    CHECK(hs.herald_probability <= 1.0);
    CHECK(hs.rho.min_eigenvalue() > -1e-12);
  }
}

TEST_CASE("shifting the idler phase rotates the single-photon coherence") {
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const SourceParams src{2e-3, 0.6, 0.7, 0.5, 0.4, 0.1};
  const FockTruncation t(4);
  const PhaseConfig base = random_phases(rng);
  const Complex c0 = simulate_heralded_state(src, base, t).rho.matrix()(0 * 5 + 1, 1 * 5 + 0);
  for (int trial = 0; trial < 5; ++trial) {
    const double delta = u(rng);
    PhaseConfig shifted = base;
    shifted.chi_a += delta;
    const Complex c1 = simulate_heralded_state(src, shifted, t).rho.matrix()(0 * 5 + 1, 1 * 5 + 0);
    CHECK(std::abs(c1 - c0 * std::polar(1.0, -delta)) < 1e-13);
  }
}

TEST_CASE("pump phase cancels from the click statistics") {
  std::mt19937_64 rng(127);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const SourceParams src{3e-3, 0.5, 0.6, 0.3, 0.35, 0.05};
  const FockTruncation t(6);
  const PhaseConfig base = random_phases(rng);
  const DetectorModel det{0.8};
  const auto probabilities = [&](const PhaseConfig& ph) {
    const HeraldedState hs = simulate_heralded_state(src, ph, t);
    return joint_click_probabilities(hs.rho, phased_setting(0.8, 0.8, 0.8, Side::alice, ph),
                                     phased_setting(0.75, 0.75, 0.75, Side::bob, ph), det, det);
  };
  const JointClickProbabilities ref = probabilities(base);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    PhaseConfig shifted = base;
    shifted.phi_a += u(rng);
    const JointClickProbabilities jp = probabilities(shifted);
    worst = std::max({worst, std::abs(jp.nc_nc - ref.nc_nc), std::abs(jp.nc_c - ref.nc_c),
                      std::abs(jp.c_nc - ref.c_nc), std::abs(jp.c_c - ref.c_c)});
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("click probabilities converge in the truncation") {
  const SourceParams src{3e-3, 0.6, 0.6, 0.3, 0.3, 0.05};
  const DetectorModel det{0.9};
  const auto probabilities = [&](int n_max) {
    const HeraldedState hs = simulate_heralded_state(src, PhaseConfig{}, FockTruncation(n_max));
    return joint_click_probabilities(hs.rho, DisplacementSetting::point(0.85), DisplacementSetting::point(0.85, 0.4),
                                     det, det);
  };
  const JointClickProbabilities lo = probabilities(8);
  const JointClickProbabilities hi = probabilities(12);
  CHECK(std::abs(lo.nc_nc - hi.nc_nc) < 1e-6);
  CHECK(std::abs(lo.nc_c - hi.nc_c) < 1e-6);
  CHECK(std::abs(lo.c_nc - hi.c_nc) < 1e-6);
  CHECK(std::abs(lo.c_c - hi.c_c) < 1e-6);
}

TEST_CASE("ideal lossy state") {
  const FockTruncation t(3);
  const DensityOperator pure = ideal_lossy_state(1.0, 0.0, t);
  Vector psi = Vector::Zero(16);
  psi(4) = std::sqrt(0.5);
  psi(1) = std::sqrt(0.5);
  CHECK(max_abs(pure.matrix() - psi * psi.adjoint()) < 1e-15);

  Matrix vac = Matrix::Zero(16, 16);
  vac(0, 0) = 1.0;
  CHECK(max_abs(ideal_lossy_state(0.0, 1.0, t).matrix() - vac) < 1e-15);

  for (double eta : {0.1, 0.5, 0.77}) {
    const DensityOperator rho = ideal_lossy_state(eta, 0.3, t);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-15);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
    int rank = 0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) rank += solver.eigenvalues()(i) > 1e-12;
    CHECK(rank <= 2);
  }
}

TEST_CASE("heralding rate") {
  CHECK(heralding_rate(2.1e-5, 76e6, 1.0) == doctest::Approx(1596.0));
  CHECK(heralding_rate(0.0, 76e6, 0.5) == 0.0);
  CHECK(heralding_rate(1.0, 76e6, 1.0) == 76e6);
  CHECK_THROWS_AS(heralding_rate(0.1, 76e6, 1.5), ValidationError);
}

TEST_CASE("source parameters are range checked") {
  CHECK(SourceParams::false_herald_from_snr(4.0) == doctest::Approx(0.2));
  CHECK_THROWS_AS(SourceParams::false_herald_from_snr(-1.0), ValidationError);
  CHECK_THROWS_AS(simulate_heralded_state({0.5, 1, 1, 1, 1, 0}, PhaseConfig{}, FockTruncation(3)), ValidationError);
  CHECK_THROWS_AS(simulate_heralded_state({0.1, 1.2, 1, 1, 1, 0}, PhaseConfig{}, FockTruncation(3)), ValidationError);
  CHECK_THROWS_AS(simulate_heralded_state({0.1, 1, 1, 1, 1, 0}, PhaseConfig{}, FockTruncation(2)), ValidationError);
}

}  // TEST_SUITE
