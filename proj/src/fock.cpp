#include "pathent/fock.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <set>
#include <string>

#include "pathent/kernels.hpp"

namespace pathent {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kTraceTolerance = 1e-10;

void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError(std::string(name) + " must lie in [0,1], got " + std::to_string(value));
  }
}

double binomial_coefficient(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

FockTruncation::FockTruncation(int n_max) : n_max_(n_max) {
  if (n_max < 2) {
    throw ValidationError("Fock truncation needs n_max >= 2, got " + std::to_string(n_max));
  }
}

ModeLayout::ModeLayout(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ValidationError("mode layout needs at least one mode");
  for (int d : dims_) {
    if (d < 1) throw ValidationError("mode dimension must be positive");
    total_ *= d;
  }
}

ModeLayout::ModeLayout(int num_modes, FockTruncation trunc)
    : ModeLayout(std::vector<int>(static_cast<std::size_t>(num_modes), trunc.dim())) {}

Eigen::Index ModeLayout::stride(std::size_t mode) const {
  Eigen::Index s = 1;
  for (std::size_t m = mode + 1; m < dims_.size(); ++m) s *= dims_[m];
  return s;
}

std::vector<int> ModeLayout::digits(Eigen::Index index) const {
  std::vector<int> out(dims_.size());
  for (std::size_t m = dims_.size(); m-- > 0;) {
    out[m] = static_cast<int>(index % dims_[m]);
    index /= dims_[m];
  }
  return out;
}

Eigen::Index ModeLayout::index(std::span<const int> digits) const {
  if (digits.size() != dims_.size()) throw ValidationError("digit count does not match layout");
  Eigen::Index idx = 0;
  for (std::size_t m = 0; m < dims_.size(); ++m) {
    if (digits[m] < 0 || digits[m] >= dims_[m]) throw ValidationError("photon number outside truncation");
    idx = idx * dims_[m] + digits[m];
  }
  return idx;
}

Operator::Operator(Matrix matrix, ModeLayout layout) : matrix_(std::move(matrix)), layout_(std::move(layout)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != layout_.total_dim()) {
    throw ValidationError("operator dimensions do not match its mode layout");
  }
}

bool Operator::is_hermitian(double tolerance) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

PureState::PureState(Vector amplitudes, ModeLayout layout)
    : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
  if (amplitudes_.size() != layout_.total_dim()) {
    throw ValidationError("state dimension does not match its mode layout");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) throw ValidationError("pure state is not normalized");
}

DensityOperator::DensityOperator(Matrix matrix, ModeLayout layout)
    : matrix_(std::move(matrix)), layout_(std::move(layout)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != layout_.total_dim()) {
    throw ValidationError("density operator dimensions do not match its mode layout");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw ValidationError("density operator is not Hermitian");
  }
  if (std::abs(trace() - 1.0) > kTraceTolerance) {
    throw ValidationError("density operator trace is " + std::to_string(trace()));
  }
}

DensityOperator::DensityOperator(const PureState& psi)
    : DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint(), psi.layout()) {}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityOperator::population(std::span<const int> photon_numbers) const {
  const auto i = layout_.index(photon_numbers);
  return matrix_(i, i).real();
}

Matrix annihilation_matrix(FockTruncation trunc) {
  const int d = trunc.dim();
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix number_matrix(FockTruncation trunc) {
  const int d = trunc.dim();
  Matrix n = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix embed(const Matrix& single_mode, std::size_t mode, const ModeLayout& layout) {
  if (mode >= layout.num_modes()) throw ValidationError("mode index out of range");
  if (single_mode.rows() != layout.dim(mode)) throw ValidationError("operator does not fit the mode");
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t m = 0; m < layout.num_modes(); ++m) {
    out = kron(out, m == mode ? single_mode : Matrix::Identity(layout.dim(m), layout.dim(m)));
  }
  return out;
}

Matrix exp_i_hermitian(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  const Eigen::VectorXd& w = solver.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::polar(1.0, w(k));
  const Matrix& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

ModeOperator displacement_operator(Complex alpha, FockTruncation trunc) {
  if (std::norm(alpha) > trunc.n_max() / 4.0) {
    std::cerr << "warning: |alpha|^2 = " << std::norm(alpha) << " is large for n_max = " << trunc.n_max()
              << "\n";
  }
  const Matrix a = annihilation_matrix(trunc);
  if (alpha == Complex{0.0, 0.0}) {
    return ModeOperator(Matrix::Identity(trunc.dim(), trunc.dim()), ModeLayout(1, trunc));
  }
  // alpha a^dag - conj(alpha) a = i H with H Hermitian.
  const Matrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  const Matrix h = Complex(0.0, -1.0) * generator;
  return ModeOperator(exp_i_hermitian(h), ModeLayout(1, trunc));
}

ModeOperator beam_splitter_unitary(double transmission, FockTruncation trunc) {
  require_probability(transmission, "beam-splitter transmission");
  const ModeLayout layout(2, trunc);
  const Eigen::Index dim = layout.total_dim();
  if (transmission == 1.0) return ModeOperator(Matrix::Identity(dim, dim), layout);
  const double phi = std::acos(std::sqrt(transmission));
  const Matrix a = annihilation_matrix(trunc);
  const Matrix generator = phi * (kron(a, a.adjoint()) - kron(a.adjoint(), a));
  const Matrix h = Complex(0.0, -1.0) * generator;
  return ModeOperator(exp_i_hermitian(h), layout);
}

std::vector<Matrix> loss_kraus(double eta, FockTruncation trunc) {
  require_probability(eta, "loss transmission");
  const int d = trunc.dim();
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    Matrix op = Matrix::Zero(d, d);
    for (int n = k; n < d; ++n) {
      const double weight = binomial_coefficient(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k);
      op(n - k, n) = std::sqrt(weight);
    }
    kraus.push_back(std::move(op));
  }
  return kraus;
}

DensityOperator loss_channel(const DensityOperator& rho, std::size_t mode, double eta) {
  if (mode >= rho.layout().num_modes()) throw ValidationError("loss channel mode index out of range");
  require_probability(eta, "loss transmission");
  if (eta == 1.0) return rho;
  const FockTruncation trunc(rho.layout().dim(mode) - 1);
  const auto kraus = loss_kraus(eta, trunc);
  Matrix out = kernels::apply_local_channel(rho.matrix(), rho.layout(), mode, kraus);
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityOperator(std::move(out), rho.layout());
}

Matrix loss_channel_adjoint(const Matrix& observable, double eta, FockTruncation trunc) {
  if (observable.rows() != trunc.dim() || observable.cols() != trunc.dim()) {
    throw ValidationError("observable does not match truncation");
  }
  Matrix out = Matrix::Zero(trunc.dim(), trunc.dim());
  for (const Matrix& k : loss_kraus(eta, trunc)) out += k.adjoint() * observable * k;
  return out;
}

PureState two_mode_squeezed_vacuum(double pair_probability, FockTruncation trunc) {
  if (!(pair_probability >= 0.0 && pair_probability < 0.5)) {
    throw ValidationError("pair probability must lie in [0, 0.5), got " + std::to_string(pair_probability));
  }
  const ModeLayout layout(2, trunc);
  Vector psi = Vector::Zero(layout.total_dim());
  const double lambda = std::sqrt(pair_probability);
  double amplitude = 1.0;
  for (int n = 0; n < trunc.dim(); ++n) {
    psi(n * trunc.dim() + n) = amplitude;
    amplitude *= lambda;
  }
  psi.normalize();
  return PureState(std::move(psi), layout);
}

DensityOperator two_mode_squeezed_state(double pair_probability, FockTruncation trunc) {
  return DensityOperator(two_mode_squeezed_vacuum(pair_probability, trunc));
}

DensityOperator thermal_marginal(double pair_probability, FockTruncation trunc) {
  if (!(pair_probability >= 0.0 && pair_probability < 0.5)) {
    throw ValidationError("pair probability must lie in [0, 0.5)");
  }
  Eigen::VectorXd weights(trunc.dim());
  double w = 1.0;
  for (int n = 0; n < trunc.dim(); ++n) {
    weights(n) = w;
    w *= pair_probability;
  }
  weights /= weights.sum();
  Matrix rho = weights.cast<Complex>().asDiagonal();
  return DensityOperator(std::move(rho), ModeLayout(1, trunc));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  std::vector<int> dims = a.layout().dims();
  dims.insert(dims.end(), b.layout().dims().begin(), b.layout().dims().end());
  return DensityOperator(kron(a.matrix(), b.matrix()), ModeLayout(std::move(dims)));
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep) {
  const ModeLayout& layout = rho.layout();
  if (keep.empty()) throw ValidationError("partial trace must keep at least one mode");
  std::set<std::size_t> unique(keep.begin(), keep.end());
  if (unique.size() != keep.size()) throw ValidationError("partial trace keep list has duplicates");
  for (std::size_t m : keep) {
    if (m >= layout.num_modes()) throw ValidationError("partial trace mode index out of range");
  }
  std::vector<std::size_t> traced;
  for (std::size_t m = 0; m < layout.num_modes(); ++m) {
    if (!unique.contains(m)) traced.push_back(m);
  }

  std::vector<int> kept_dims;
  for (std::size_t m : keep) kept_dims.push_back(layout.dim(m));
  ModeLayout kept_layout(kept_dims);
  std::vector<int> traced_dims;
  for (std::size_t m : traced) traced_dims.push_back(layout.dim(m));
  const ModeLayout traced_layout = traced.empty() ? ModeLayout(std::vector<int>{1}) : ModeLayout(traced_dims);

  // Full index for each (kept, traced) pair of sub-indices.
  const Eigen::Index nk = kept_layout.total_dim();
  const Eigen::Index nt = traced_layout.total_dim();
  std::vector<Eigen::Index> full(static_cast<std::size_t>(nk * nt));
  std::vector<int> digits(layout.num_modes());
  for (Eigen::Index ik = 0; ik < nk; ++ik) {
    const auto kd = kept_layout.digits(ik);
    for (std::size_t q = 0; q < keep.size(); ++q) digits[keep[q]] = kd[q];
    for (Eigen::Index it = 0; it < nt; ++it) {
      const auto td = traced_layout.digits(it);
      for (std::size_t q = 0; q < traced.size(); ++q) digits[traced[q]] = td[q];
      full[static_cast<std::size_t>(ik * nt + it)] = layout.index(digits);
    }
  }

  Matrix out = Matrix::Zero(nk, nk);
  for (Eigen::Index i = 0; i < nk; ++i) {
    for (Eigen::Index j = 0; j < nk; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index t = 0; t < nt; ++t) {
        acc += rho.matrix()(full[static_cast<std::size_t>(i * nt + t)], full[static_cast<std::size_t>(j * nt + t)]);
      }
      out(i, j) = acc;
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityOperator(std::move(out), std::move(kept_layout));
}

double expectation_value(const DensityOperator& rho, const Operator& obs) {
  if (obs.dim() != rho.dim()) throw ValidationError("observable dimension does not match the state");
  if (!obs.is_hermitian(1e-10)) throw ValidationError("observable is not Hermitian");
  const Complex value = rho.matrix().cwiseProduct(obs.matrix().transpose()).sum();
  if (std::abs(value.imag()) > 1e-10) {
    throw NumericalError("expectation value has imaginary part " + std::to_string(value.imag()));
  }
  return value.real();
}

}  // namespace pathent
