#include <array>
#include <cmath>
#include <random>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "pathent/fock.hpp"
#include "support.hpp"

using namespace pathent;
using namespace testing_support;

namespace {

Matrix ket_projector(int dim, int n) {
  Matrix p = Matrix::Zero(dim, dim);
  p(n, n) = 1.0;
  return p;
}

// Loss as a beam splitter coupling to a vacuum environment mode, environment
// traced out. Independent of the Kraus construction.
Matrix loss_by_dilation(const Matrix& rho, double eta, FockTruncation trunc) {
  const int d = trunc.dim();
  const Matrix u = beam_splitter_unitary(eta, trunc).matrix();
  const Matrix joint = u * kron(rho, ket_projector(d, 0)) * u.adjoint();
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int e = 0; e < d; ++e) out(i, j) += joint(i * d + e, j * d + e);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("layout ordering puts the first mode most significant") {
  const ModeLayout layout(std::vector<int>{3, 4, 2});
  CHECK(layout.total_dim() == 24);
  CHECK(layout.stride(0) == 8);
  CHECK(layout.stride(2) == 1);
  const std::array<int, 3> digits{2, 1, 1};
  CHECK(layout.index(digits) == 2 * 8 + 1 * 2 + 1);
  for (Eigen::Index i = 0; i < layout.total_dim(); ++i) {
    const auto d = layout.digits(i);
    CHECK(layout.index(d) == i);
  }
}

TEST_CASE("truncation below two photons is rejected") {
  CHECK_THROWS_AS(FockTruncation(1), ValidationError);
  CHECK_NOTHROW(FockTruncation(2));
}

TEST_CASE("exp_i_hermitian agrees with a Pade matrix exponential") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix h = random_hermitian(7, rng);
    const Matrix reference = (Complex(0.0, 1.0) * h).exp();
    CHECK(max_abs(exp_i_hermitian(h) - reference) < 1e-11);
  }
}

TEST_CASE("displacement of zero is the identity") {
  const FockTruncation t(8);
  CHECK(max_abs(displacement_operator(0.0, t).matrix() - Matrix::Identity(9, 9)) < 1e-14);
}

TEST_CASE("displaced vacuum overlaps follow the coherent-state closed form") {
  const Matrix d083 = displacement_operator(0.83, FockTruncation(12)).matrix();
  CHECK(std::abs(d083(0, 0) - std::exp(-0.6889 / 2.0)) < 1e-9);
  CHECK(std::abs(d083(0, 0).real() - 0.7086) < 1e-4);

  const Matrix d1 = displacement_operator(1.0, FockTruncation(20)).matrix();
  CHECK(std::abs(d1(1, 0) - std::exp(-0.5)) < 1e-9);

  const Complex alpha = std::polar(0.6, 0.7);
  const Matrix d = displacement_operator(alpha, FockTruncation(30)).matrix();
  for (int n = 0; n <= 8; ++n) {
    CHECK(std::abs(d(n, 0) - coherent_amplitude(alpha, n)) < 1e-12);
  }
}

TEST_CASE("gates are unitary on the well-resolved subspace") {
  for (int n_max : {10, 12}) {
    const FockTruncation t(n_max);
    const int keep = n_max - 2 + 1;
    for (double a : {0.1, 0.5, 1.0, 1.5}) {
      const Matrix d = displacement_operator(std::polar(a, 0.3), t).matrix();
      const Matrix gram = d.adjoint() * d;
      CHECK(max_abs(gram.topLeftCorner(keep, keep) - Matrix::Identity(keep, keep)) < 1e-8);
    }
    const Matrix u = beam_splitter_unitary(0.37, t).matrix();
    CHECK(max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) < 1e-10);
  }
}

TEST_CASE("beam splitter sign convention and two-photon interference") {
  const FockTruncation t(3);
  const ModeLayout layout(2, t);
  const auto idx = [&](int n0, int n1) {
    const std::array<int, 2> d{n0, n1};
    return layout.index(d);
  };
  CHECK(max_abs(beam_splitter_unitary(1.0, t).matrix() - Matrix::Identity(16, 16)) < 1e-15);

  const double transmission = 0.3;
  const double c = std::sqrt(transmission);
  const double s = std::sqrt(1.0 - transmission);
  const Matrix u = beam_splitter_unitary(transmission, t).matrix();
  CHECK(std::abs(u(idx(1, 0), idx(1, 0)) - c) < 1e-12);
  CHECK(std::abs(u(idx(0, 1), idx(1, 0)) - s) < 1e-12);
  CHECK(std::abs(u(idx(1, 0), idx(0, 1)) + s) < 1e-12);
  CHECK(std::abs(u(idx(0, 1), idx(0, 1)) - c) < 1e-12);

  const Matrix h = beam_splitter_unitary(0.5, t).matrix();
  CHECK(std::abs(h(idx(1, 0), idx(1, 0)) - std::sqrt(0.5)) < 1e-12);
  CHECK(std::abs(h(idx(0, 1), idx(1, 0)) - std::sqrt(0.5)) < 1e-12);
  CHECK(std::norm(h(idx(1, 1), idx(1, 1))) < 1e-24);
  CHECK(std::abs(std::norm(h(idx(2, 0), idx(1, 1))) - 0.5) < 1e-12);

  // Photon number is conserved.
  const Matrix n_total = kron(number_matrix(t), Matrix::Identity(4, 4)) + kron(Matrix::Identity(4, 4), number_matrix(t));
  CHECK(max_abs(h * n_total - n_total * h) < 1e-12);
}

TEST_CASE("loss Kraus operators are complete") {
  const FockTruncation t(7);
  for (double eta : {0.0, 0.2, 0.6, 1.0}) {
    Matrix sum = Matrix::Zero(8, 8);
    for (const Matrix& k : loss_kraus(eta, t)) sum += k.adjoint() * k;
    CHECK(max_abs(sum - Matrix::Identity(8, 8)) < 1e-13);
  }
}

TEST_CASE("loss on a single photon") {
  const FockTruncation t(4);
  const ModeLayout layout(1, t);
  const DensityOperator one(ket_projector(5, 1), layout);
  CHECK(max_abs(loss_channel(one, 0, 1.0).matrix() - one.matrix()) < 1e-15);
  const Matrix out = loss_channel(one, 0, 0.6).matrix();
  Matrix expected = 0.6 * ket_projector(5, 1) + 0.4 * ket_projector(5, 0);
  CHECK(max_abs(out - expected) < 1e-14);
}

TEST_CASE("loss channel matches its beam-splitter dilation") {
  std::mt19937_64 rng(5);
  const FockTruncation t(5);
  for (double eta : {0.1, 0.45, 0.9}) {
    const Matrix rho = random_density(6, rng);
    const Matrix kraus_out = loss_channel(DensityOperator(rho, ModeLayout(1, t)), 0, eta).matrix();
    CHECK(max_abs(kraus_out - loss_by_dilation(rho, eta, t)) < 1e-12);
  }
}

TEST_CASE("loss channel preserves trace and positivity") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FockTruncation t(3);
  const ModeLayout layout(2, t);
  double worst_trace = 0.0;
  double worst_eig = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const DensityOperator rho(random_density(16, rng), layout);
    const DensityOperator out = loss_channel(rho, static_cast<std::size_t>(trial % 2), u(rng));
    worst_trace = std::max(worst_trace, std::abs(out.trace() - 1.0));
    worst_eig = std::min(worst_eig, out.min_eigenvalue());
  }
  CHECK(worst_trace < 1e-12);
  CHECK(worst_eig > -1e-10);
}

TEST_CASE("loss channels compose multiplicatively") {
  std::mt19937_64 rng(23);
  const FockTruncation t(4);
  const ModeLayout layout(2, t);
  for (auto [e1, e2] : {std::pair{0.3, 0.7}, std::pair{0.9, 0.5}, std::pair{0.05, 0.99}}) {
    const DensityOperator rho(random_density(25, rng), layout);
    const Matrix twice = loss_channel(loss_channel(rho, 1, e1), 1, e2).matrix();
    const Matrix once = loss_channel(rho, 1, e1 * e2).matrix();
    CHECK(max_abs(twice - once) < 1e-10);
  }
}

TEST_CASE("adjoint loss is the Heisenberg dual") {
  std::mt19937_64 rng(29);
  const FockTruncation t(5);
  const Matrix rho = random_density(6, rng);
  const Matrix obs = random_hermitian(6, rng);
  const double eta = 0.37;
  const Matrix out = loss_channel(DensityOperator(rho, ModeLayout(1, t)), 0, eta).matrix();
  const Complex schrodinger = (out * obs).trace();
  const Complex heisenberg = (rho * loss_channel_adjoint(obs, eta, t)).trace();
  CHECK(std::abs(schrodinger - heisenberg) < 1e-12);
}

TEST_CASE("two-mode squeezed vacuum") {
  const FockTruncation t(6);
  const Vector vac = two_mode_squeezed_vacuum(0.0, t).amplitudes();
  CHECK(std::abs(vac(0) - 1.0) < 1e-15);
  CHECK(vac.norm() == doctest::Approx(1.0));

  const Vector psi = two_mode_squeezed_vacuum(3e-3, t).amplitudes();
  const double p1 = std::norm(psi(1 * 7 + 1));
  const double p2 = std::norm(psi(2 * 7 + 2));
  CHECK(std::abs(p2 / p1 - 3e-3) < 1e-12);
  for (double p : {0.0, 1e-3, 0.1, 0.4}) {
    CHECK(std::abs(two_mode_squeezed_state(p, t).trace() - 1.0) < 1e-10);
  }
  CHECK_THROWS_AS(two_mode_squeezed_vacuum(0.5, t), ValidationError);
}

TEST_CASE("thermal marginal is one arm of the squeezed vacuum") {
  const FockTruncation t(6);
  const std::array<std::size_t, 1> keep{0};
  const DensityOperator arm = partial_trace(two_mode_squeezed_state(0.2, t), keep);
  CHECK(max_abs(arm.matrix() - thermal_marginal(0.2, t).matrix()) < 1e-14);
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(31);
  const FockTruncation t(3);
  const DensityOperator a(random_density(4, rng), ModeLayout(1, t));
  const DensityOperator b(random_density(4, rng), ModeLayout(1, t));
  const std::array<std::size_t, 1> first{0};
  const std::array<std::size_t, 1> second{1};
  CHECK(max_abs(partial_trace(tensor(a, b), first).matrix() - a.matrix()) < 1e-14);
  CHECK(max_abs(partial_trace(tensor(a, b), second).matrix() - b.matrix()) < 1e-14);

  const ModeLayout two(2, t);
  Vector psi = Vector::Zero(16);
  psi(1 * 4 + 0) = std::sqrt(0.5);
  psi(0 * 4 + 1) = std::sqrt(0.5);
  const DensityOperator bell(PureState(psi, two));
  const Matrix marginal = partial_trace(bell, first).matrix();
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 0.5;
  expected(1, 1) = 0.5;
  CHECK(max_abs(marginal - expected) < 1e-15);
  CHECK(std::abs(partial_trace(bell, second).trace() - 1.0) < 1e-12);

  // Three modes, keep the outer two.
  const DensityOperator c(random_density(4, rng), ModeLayout(1, t));
  const std::array<std::size_t, 2> outer{0, 2};
  CHECK(max_abs(partial_trace(tensor(tensor(a, b), c), outer).matrix() - tensor(a, c).matrix()) < 1e-14);
}

TEST_CASE("expectation values") {
  std::mt19937_64 rng(37);
  const FockTruncation t(3);
  const ModeLayout layout(2, t);
  const DensityOperator rho(random_density(16, rng), layout);
  CHECK(expectation_value(rho, Operator(Matrix::Identity(16, 16), layout)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density operator invariants are enforced") {
  const ModeLayout layout(1, FockTruncation(2));
  Matrix bad = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(DensityOperator(bad, layout), ValidationError);
  Matrix skew = Matrix::Zero(3, 3);
  skew(0, 0) = 1.0;
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityOperator(skew, layout), ValidationError);
}

}  // TEST_SUITE
