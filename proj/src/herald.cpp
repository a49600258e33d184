#include "pathent/herald.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace pathent {

namespace {

void require_unit(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError(std::string(name) + " must lie in [0,1], got " + std::to_string(value));
  }
}

struct TrueHerald {
  Matrix rho;  // unnormalized signal-pair state given a genuine click
  double probability;
};

// Signal-pair state conditioned on a click at the second combiner output.
// The four-mode pure state is held as a matrix with signal index (sA, sB) on
// rows and idler index (iA, iB) on columns, so idler operations act from the
// right and tracing the idlers is a Gram product.
TrueHerald condition_on_click(const SourceParams& src, const PhaseConfig& phases, FockTruncation trunc) {
  const int d = trunc.dim();
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  const Vector tmsv = two_mode_squeezed_vacuum(src.pair_probability, trunc).amplitudes();

  Matrix state = Matrix::Zero(d2, d2);
  const double theta_a = phases.photon_phase(Side::alice);
  const double theta_b = phases.photon_phase(Side::bob);
  for (int n = 0; n < d; ++n) {
    const Complex ca = tmsv(n * d + n) * std::polar(1.0, n * theta_a);
    for (int m = 0; m < d; ++m) {
      const Complex cb = tmsv(m * d + m) * std::polar(1.0, m * theta_b);
      state(n * d + m, n * d + m) = ca * cb;
    }
  }

  const auto kraus_a = loss_kraus(src.idler_transmission_a, trunc);
  const auto kraus_b = loss_kraus(src.idler_transmission_b, trunc);
  const Matrix bs_t = beam_splitter_unitary(0.5, trunc).matrix().transpose();

  // Columns where the monitored (second) output holds at least one photon.
  std::vector<Eigen::Index> click_cols;
  for (int i1 = 0; i1 < d; ++i1) {
    for (int i2 = 1; i2 < d; ++i2) click_cols.push_back(static_cast<Eigen::Index>(i1) * d + i2);
  }
  const Eigen::Index nclick = static_cast<Eigen::Index>(click_cols.size());

  const Matrix identity = Matrix::Identity(d, d);
  std::vector<Matrix> partial(static_cast<std::size_t>(d));
#pragma omp parallel for schedule(dynamic)
  for (int ka = 0; ka < d; ++ka) {
    Matrix acc = Matrix::Zero(d2, d2);
    const Matrix after_a = state * kron(kraus_a[static_cast<std::size_t>(ka)], identity).transpose();
    for (int kb = 0; kb < d; ++kb) {
      const Matrix branch =
          after_a * kron(identity, kraus_b[static_cast<std::size_t>(kb)]).transpose() * bs_t;
      Matrix selected(d2, nclick);
      for (Eigen::Index c = 0; c < nclick; ++c) selected.col(c) = branch.col(click_cols[static_cast<std::size_t>(c)]);
      acc.noalias() += selected * selected.adjoint();
    }
    partial[static_cast<std::size_t>(ka)] = std::move(acc);
  }

  Matrix rho = Matrix::Zero(d2, d2);
  for (const Matrix& p : partial) rho += p;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double prob = rho.trace().real();
  return {std::move(rho), prob};
}

}  // namespace

double SourceParams::false_herald_from_snr(double snr) {
  if (!(snr >= 0.0) || std::isinf(snr)) throw ValidationError("SNR must be finite and nonnegative");
  return 1.0 / (1.0 + snr);
}

void SourceParams::validate() const {
  if (!(pair_probability >= 0.0 && pair_probability < 0.5)) {
    throw ValidationError("pair probability must lie in [0, 0.5)");
  }
  require_unit(signal_transmission_a, "signal_transmission_a");
  require_unit(signal_transmission_b, "signal_transmission_b");
  require_unit(idler_transmission_a, "idler_transmission_a");
  require_unit(idler_transmission_b, "idler_transmission_b");
  require_unit(false_herald_probability, "false_herald_probability");
}

double true_herald_probability(const SourceParams& src, FockTruncation trunc) {
  src.validate();
  return condition_on_click(src, PhaseConfig{}, trunc).probability;
}

HeraldedState simulate_heralded_state(const SourceParams& src, const PhaseConfig& phases,
                                      FockTruncation trunc) {
  src.validate();
  phases.validate();
  if (trunc.n_max() < 3) throw ValidationError("heralded-state simulation needs n_max >= 3");

  const TrueHerald genuine = condition_on_click(src, phases, trunc);
  const double f = src.false_herald_probability;
  if (genuine.probability <= 0.0 && f < 1.0) {
    throw NumericalError("herald probability is zero; no conditional state exists");
  }

  const DensityOperator marginal =
      tensor(thermal_marginal(src.pair_probability, trunc), thermal_marginal(src.pair_probability, trunc));
  Matrix rho = f * marginal.matrix();
  if (f < 1.0) rho += (1.0 - f) / genuine.probability * genuine.rho;
  rho /= rho.trace().real();

  DensityOperator state(std::move(rho), ModeLayout(2, trunc));
  state = loss_channel(state, 0, src.signal_transmission_a);
  state = loss_channel(state, 1, src.signal_transmission_b);

  const double herald = f < 1.0 ? std::min(1.0, genuine.probability / (1.0 - f)) : 1.0;
  return {std::move(state), herald};
}

DensityOperator ideal_lossy_state(double eta, double relative_phase, FockTruncation trunc) {
  require_unit(eta, "eta");
  const ModeLayout layout(2, trunc);
  const int d = trunc.dim();
  Vector psi = Vector::Zero(layout.total_dim());
  psi(1 * d + 0) = 1.0 / std::sqrt(2.0);
  psi(0 * d + 1) = std::polar(1.0 / std::sqrt(2.0), relative_phase);
  Matrix rho = eta * psi * psi.adjoint();
  rho(0, 0) += 1.0 - eta;
  return DensityOperator(std::move(rho), layout);
}

double heralding_rate(double herald_probability, double pump_rep_rate_hz, double duty_fraction) {
  if (herald_probability < 0.0 || pump_rep_rate_hz < 0.0 || duty_fraction < 0.0 || duty_fraction > 1.0) {
    throw ValidationError("heralding rate inputs out of range");
  }
  return herald_probability * pump_rep_rate_hz * duty_fraction;
}

}  // namespace pathent
