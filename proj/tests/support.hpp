#pragma once

// Random-state generators and comparison helpers shared by the test binaries.

#include <cmath>
#include <cstdint>
#include <random>

#include "pathent/fock.hpp"

namespace testing_support {

using pathent::Complex;
using pathent::Matrix;
using pathent::Vector;

inline Vector random_vector(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

// Ginibre-distributed full-rank density matrix.
inline Matrix random_density(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

inline Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint());
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double factorial(int n) { return std::tgamma(n + 1.0); }

// <n|alpha> for a coherent state, from the closed form.
inline Complex coherent_amplitude(Complex alpha, int n) {
  return std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(factorial(n));
}

}  // namespace testing_support
