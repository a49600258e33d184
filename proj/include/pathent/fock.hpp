#pragma once

// Truncated Fock-space linear algebra for a handful of bosonic modes.
//
// Multi-mode operators use row-major tensor ordering: the first mode is the
// most significant index, so |n0 n1 ... > maps to
// ((n0 * d1 + n1) * d2 + n2) ...

#include <cstddef>
#include <span>
#include <vector>

#include "pathent/types.hpp"

namespace pathent {

class FockTruncation {
 public:
  explicit FockTruncation(int n_max);

  int n_max() const { return n_max_; }
  int dim() const { return n_max_ + 1; }

  friend bool operator==(const FockTruncation&, const FockTruncation&) = default;

 private:
  int n_max_;
};

inline constexpr int kDefaultSimulationNmax = 10;
inline constexpr int kOracleNmax = 3;

/// Per-mode dimensions of a tensor-product space.
class ModeLayout {
 public:
  ModeLayout() = default;
  explicit ModeLayout(std::vector<int> dims);
  ModeLayout(int num_modes, FockTruncation trunc);

  std::size_t num_modes() const { return dims_.size(); }
  int dim(std::size_t mode) const { return dims_.at(mode); }
  const std::vector<int>& dims() const { return dims_; }
  Eigen::Index total_dim() const { return total_; }

  // Product of dims of modes after `mode` (index stride of that mode).
  Eigen::Index stride(std::size_t mode) const;

  std::vector<int> digits(Eigen::Index index) const;
  Eigen::Index index(std::span<const int> digits) const;

  friend bool operator==(const ModeLayout&, const ModeLayout&) = default;

 private:
  std::vector<int> dims_;
  Eigen::Index total_ = 1;
};

/// An operator on one or more truncated modes.
class Operator {
 public:
  Operator(Matrix matrix, ModeLayout layout);

  const Matrix& matrix() const { return matrix_; }
  const ModeLayout& layout() const { return layout_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  bool is_hermitian(double tolerance = 1e-10) const;
  Operator adjoint() const { return Operator(matrix_.adjoint(), layout_); }

 private:
  Matrix matrix_;
  ModeLayout layout_;
};

// Single-mode or two-mode operator, as returned by the gate constructors.
using ModeOperator = Operator;

class PureState {
 public:
  PureState(Vector amplitudes, ModeLayout layout);

  const Vector& amplitudes() const { return amplitudes_; }
  const ModeLayout& layout() const { return layout_; }

 private:
  Vector amplitudes_;
  ModeLayout layout_;
};

/// Trace-one Hermitian operator. Positivity is not checked on construction
/// (it needs an eigendecomposition); see min_eigenvalue().
class DensityOperator {
 public:
  DensityOperator(Matrix matrix, ModeLayout layout);
  explicit DensityOperator(const PureState& psi);

  const Matrix& matrix() const { return matrix_; }
  const ModeLayout& layout() const { return layout_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  double trace() const { return matrix_.trace().real(); }
  double min_eigenvalue() const;

  // Probability of the computational basis state with the given photon numbers.
  double population(std::span<const int> photon_numbers) const;

 private:
  Matrix matrix_;
  ModeLayout layout_;
};

Matrix annihilation_matrix(FockTruncation trunc);
Matrix number_matrix(FockTruncation trunc);
Matrix kron(const Matrix& a, const Matrix& b);

// Embeds a single-mode matrix acting on `mode` into the full layout.
Matrix embed(const Matrix& single_mode, std::size_t mode, const ModeLayout& layout);

// exp(i * hermitian) via eigendecomposition; exactly unitary to rounding.
Matrix exp_i_hermitian(const Matrix& hermitian);

/// D(alpha) = exp(alpha a^dag - conj(alpha) a) on the truncated mode.
ModeOperator displacement_operator(Complex alpha, FockTruncation trunc);

/// U = exp(phi (a c^dag - a^dag c)) with transmission = cos^2 phi, giving
/// U|1,0> = cos|1,0> + sin|0,1> and U|0,1> = -sin|1,0> + cos|0,1>.
ModeOperator beam_splitter_unitary(double transmission, FockTruncation trunc);

/// Kraus operators of the pure-loss channel with transmission eta,
/// K_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|.
std::vector<Matrix> loss_kraus(double eta, FockTruncation trunc);

DensityOperator loss_channel(const DensityOperator& rho, std::size_t mode, double eta);

// Heisenberg-picture loss on a single-mode observable: sum_k K_k^dag X K_k.
Matrix loss_channel_adjoint(const Matrix& observable, double eta, FockTruncation trunc);

/// Two-mode squeezed vacuum sum_n lambda^n |n,n>, lambda^2 = pair_probability,
/// renormalized after truncation.
PureState two_mode_squeezed_vacuum(double pair_probability, FockTruncation trunc);
DensityOperator two_mode_squeezed_state(double pair_probability, FockTruncation trunc);

// Diagonal state of one arm of a two-mode squeezed vacuum.
DensityOperator thermal_marginal(double pair_probability, FockTruncation trunc);

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep);

/// tr(rho obs); requires a Hermitian observable of matching dimension.
double expectation_value(const DensityOperator& rho, const Operator& obs);

}  // namespace pathent
