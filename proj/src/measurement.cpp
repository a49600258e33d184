#include "pathent/measurement.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

namespace pathent {

namespace {

Matrix vacuum_projector(int dim) {
  Matrix p = Matrix::Zero(dim, dim);
  p(0, 0) = 1.0;
  return p;
}

int total_photons(const ModeLayout& layout, Eigen::Index index) {
  int n = 0;
  for (int digit : layout.digits(index)) n += digit;
  return n;
}

double trace_product(const Matrix& rho, const Matrix& obs) {
  return rho.cwiseProduct(obs.transpose()).sum().real();
}

}  // namespace

double PhaseConfig::interferometer_phase(Side side) const {
  return side == Side::alice ? zeta_a + chi_a + xi_a_long - xi_a_short
                             : zeta_b + chi_b + xi_b_long - xi_b_short;
}

double PhaseConfig::photon_phase(Side side) const {
  return side == Side::alice ? phi_a + chi_a + xi_a_long : phi_b + chi_b + xi_b_long;
}

double PhaseConfig::displacement_phase(Side side) const {
  return side == Side::alice ? phi_a - zeta_a + xi_a_short : phi_b - zeta_b + xi_b_short;
}

void PhaseConfig::validate() const {
  for (double v : {phi_a, phi_b, zeta_a, zeta_b, chi_a, chi_b, xi_a_long, xi_a_short, xi_b_long, xi_b_short}) {
    if (!std::isfinite(v)) throw ValidationError("phase values must be finite");
  }
}

void DisplacementSetting::validate() const {
  if (!std::isfinite(alpha_mean) || !std::isfinite(alpha_min) || !std::isfinite(alpha_max) ||
      !std::isfinite(phase)) {
    throw ValidationError("displacement setting must be finite");
  }
  if (!(alpha_min >= 0.0 && alpha_min <= alpha_mean && alpha_mean <= alpha_max)) {
    throw ValidationError("displacement setting needs 0 <= alpha_min <= alpha_mean <= alpha_max");
  }
}

void DetectorModel::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw ValidationError("detector efficiency must lie in [0,1], got " + std::to_string(efficiency));
  }
}

ClickPovm click_povm(Complex alpha, DetectorModel det, FockTruncation trunc) {
  det.validate();
  const int d = trunc.dim();
  const Matrix displacement = displacement_operator(alpha * std::sqrt(det.efficiency), trunc).matrix();
  const Matrix ideal = displacement.adjoint() * vacuum_projector(d) * displacement;
  Matrix no_click = loss_channel_adjoint(ideal, det.efficiency, trunc);
  no_click = 0.5 * (no_click + no_click.adjoint()).eval();
  Matrix click = Matrix::Identity(d, d) - no_click;
  return {std::move(no_click), std::move(click)};
}

ClickPovm click_povm_unfolded(Complex alpha, DetectorModel det, FockTruncation trunc) {
  det.validate();
  const int d = trunc.dim();
  Matrix miss = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) miss(n, n) = std::pow(1.0 - det.efficiency, n);
  const Matrix displacement = displacement_operator(alpha, trunc).matrix();
  Matrix no_click = displacement.adjoint() * miss * displacement;
  no_click = 0.5 * (no_click + no_click.adjoint()).eval();
  Matrix click = Matrix::Identity(d, d) - no_click;
  return {std::move(no_click), std::move(click)};
}

Matrix displaced_parity_observable(Complex alpha, FockTruncation trunc) {
  const ClickPovm povm = click_povm(alpha, DetectorModel{1.0}, trunc);
  return povm.no_click - povm.click;
}

JointClickProbabilities joint_click_probabilities(const DensityOperator& rho,
                                                  const DisplacementSetting& s1,
                                                  const DisplacementSetting& s2, DetectorModel d1,
                                                  DetectorModel d2) {
  if (rho.layout().num_modes() != 2) throw ValidationError("joint click probabilities need a two-mode state");
  s1.validate();
  s2.validate();
  const ClickPovm e1 = click_povm(s1.amplitude(), d1, FockTruncation(rho.layout().dim(0) - 1));
  const ClickPovm e2 = click_povm(s2.amplitude(), d2, FockTruncation(rho.layout().dim(1) - 1));
  const Matrix& r = rho.matrix();
  JointClickProbabilities jp{
      trace_product(r, kron(e1.no_click, e2.no_click)),
      trace_product(r, kron(e1.no_click, e2.click)),
      trace_product(r, kron(e1.click, e2.no_click)),
      trace_product(r, kron(e1.click, e2.click)),
  };
  // A vanishing outcome can come out a few ulps below zero.
  for (double* p : {&jp.nc_nc, &jp.nc_c, &jp.c_nc, &jp.c_c}) {
    if (*p < 0.0 && *p > -1e-12) *p = 0.0;
  }
  jp.validate();
  return jp;
}

Operator phase_average(const Operator& op) {
  const ModeLayout& layout = op.layout();
  const Eigen::Index dim = op.dim();
  std::vector<int> sector(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) sector[static_cast<std::size_t>(i)] = total_photons(layout, i);
  Matrix out = op.matrix();
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (sector[static_cast<std::size_t>(i)] != sector[static_cast<std::size_t>(j)]) out(i, j) = 0.0;
    }
  }
  return Operator(std::move(out), layout);
}

Operator phase_averaged_witness_operator(double alpha1, double alpha2, FockTruncation trunc) {
  if (!(alpha1 >= 0.0 && alpha2 >= 0.0)) throw ValidationError("witness amplitudes must be real and nonnegative");
  const Matrix sigma1 = displaced_parity_observable(alpha1, trunc);
  const Matrix sigma2 = displaced_parity_observable(alpha2, trunc);
  Operator raw(kron(sigma1, sigma2), ModeLayout(2, trunc));
  return phase_average(raw);
}

Matrix qubit_coupling_block(const Operator& two_mode_op) {
  const ModeLayout& layout = two_mode_op.layout();
  if (layout.num_modes() != 2) throw ValidationError("coupling block needs a two-mode operator");
  std::vector<Eigen::Index> qubit;
  std::vector<Eigen::Index> outside;
  for (Eigen::Index i = 0; i < layout.total_dim(); ++i) {
    const auto n = layout.digits(i);
    (n[0] <= 1 && n[1] <= 1 ? qubit : outside).push_back(i);
  }
  Matrix block(static_cast<Eigen::Index>(qubit.size()), static_cast<Eigen::Index>(outside.size()));
  for (std::size_t r = 0; r < qubit.size(); ++r) {
    for (std::size_t c = 0; c < outside.size(); ++c) {
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = two_mode_op.matrix()(qubit[r], outside[c]);
    }
  }
  return block;
}

double multiphoton_coincidence_probability(const DensityOperator& single_mode, DetectorModel det) {
  if (single_mode.layout().num_modes() != 1) throw ValidationError("coincidence probability needs a single-mode state");
  det.validate();
  const FockTruncation trunc(single_mode.layout().dim(0) - 1);
  const int d = trunc.dim();
  Matrix vacuum = Matrix::Zero(d, d);
  vacuum(0, 0) = 1.0;
  const Matrix u = beam_splitter_unitary(0.5, trunc).matrix();
  const Matrix split = u * kron(single_mode.matrix(), vacuum) * u.adjoint();
  Matrix click = Matrix::Identity(d, d);
  for (int n = 0; n < d; ++n) click(n, n) -= std::pow(1.0 - det.efficiency, n);
  return trace_product(split, kron(click, click));
}

double p00_phase_model(double alpha_abs, const PhaseConfig& phases) {
  const double a2 = alpha_abs * alpha_abs;
  const Complex sum = std::polar(1.0, phases.interferometer_phase(Side::alice)) +
                      std::polar(1.0, phases.interferometer_phase(Side::bob));
  return 0.5 * a2 * std::exp(-2.0 * a2) * std::norm(sum);
}

DisplacementSetting phased_setting(double alpha_mean, double alpha_min, double alpha_max, Side side,
                                   const PhaseConfig& phases) {
  DisplacementSetting s{alpha_mean, alpha_min, alpha_max, phases.displacement_phase(side)};
  s.validate();
  return s;
}

}  // namespace pathent
