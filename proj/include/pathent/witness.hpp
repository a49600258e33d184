#pragma once

#include <optional>
#include <string>
#include <utility>

#include "pathent/measurement.hpp"
#include "pathent/stats.hpp"
#include "pathent/types.hpp"

namespace pathent {

/// Photon-number populations of a two-qubit state: pij has i photons in mode 1
/// and j in mode 2.
struct QubitProbs {
  double p00 = 0.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.0;

  // P00 = P_nc,nc, P01 = P_nc,c, P10 = P_c,nc, P11 = P_c,c.
  static QubitProbs from_z_basis(const JointClickProbabilities& jp) {
    return {jp.nc_nc, jp.nc_c, jp.c_nc, jp.c_c};
  }

  void validate() const;
};

/// P_nc,nc + P_c,c - P_c,nc - P_nc,c.
double w_exp(const JointClickProbabilities& jp);

/// Maximal witness value of PPT two-qubit states with the given populations,
/// with the cross term relaxed to sqrt(P00 P11).
double w_ppt_qubit(double alpha1, double alpha2, const QubitProbs& qp);

// Separable bound with the z-basis frequencies substituted and the p* branch
// chosen by the sign of C4 and C5 at (alpha1, alpha2).
double substituted_bound(double alpha1, double alpha2, const JointClickProbabilities& jp_z,
                         const MultiphotonBounds& mb);

/// 2 a1 a2 e^{-a1^2-a2^2} sqrt(2 a1^4 + 2 a2^4): the largest singular value of
/// the block coupling the qubit space to higher photon numbers.
double b_max(double alpha1, double alpha2);

struct FluctuationBound {
  double w_tilde = 0.0;
  WitnessCoefficients coefficients;
  double alpha1 = 0.0;  // maximizer
  double alpha2 = 0.0;
};

/// Maximum of substituted_bound over I1 x I2: a 101 x 101 grid followed by
/// coordinate refinement. The mean point is always a candidate.
FluctuationBound w_ppt_fluctuation_bound(const DisplacementSetting& s1,
                                         const DisplacementSetting& s2,
                                         const JointClickProbabilities& jp_z,
                                         const MultiphotonBounds& mb);

/// Maximum of b_max over I1 x I2.
double beta_bound(const DisplacementSetting& s1, const DisplacementSetting& s2);

/// w_tilde + s + 2 beta sqrt(s (1 - s)), s = p1* + p2*.
double w_ppt_max(double w_tilde, const MultiphotonBounds& mb, double beta);

enum class AlphaCriterion { max_violation, robust };

/// Diagonal displacement amplitudes for the given populations.
/// max_violation maximizes tr(rho W) - w_ppt on the qubit state with
/// populations qp and coherence sqrt(p10 p01); robust finds the amplitude
/// where w_ppt(a, a) is stationary, i.e. insensitive to common amplitude
/// fluctuations. Throws NumericalError when no root exists in (0, 2].
std::pair<double, double> optimal_alpha(const QubitProbs& qp, AlphaCriterion criterion);

// d/da w_ppt(a, a) by central differences with step 1e-4.
double diagonal_slope(double alpha, const QubitProbs& qp);

struct WitnessReport {
  double w_exp = 0.0;
  double w_ppt = 0.0;        // qubit bound at the mean amplitudes
  double w_tilde_ppt = 0.0;  // fluctuation box
  double w_ppt_max = 0.0;    // dimension-free
  double sigma_exp = 0.0;
  double sigma_ppt_max = 0.0;
  double k = 0.0;
  double beta = 0.0;
  WitnessCoefficients coefficients;
  double alpha1_at_max = 0.0;
  double alpha2_at_max = 0.0;
  // w_tilde_ppt - w_ppt: contribution of the amplitude interval alone.
  double alpha_interval_slack = 0.0;
  MultiphotonBounds multiphoton;
  ClickEstimates alpha_estimates;
  ClickEstimates z_estimates;
  ProbEstimate p1_estimate;
  ProbEstimate p2_estimate;

  bool entangled() const { return w_exp > w_ppt_max; }
};

/// Measured data for one certification.
struct CertifyInputs {
  ClickEstimates alpha_basis;
  ClickEstimates z_basis;
  DisplacementSetting setting1;
  DisplacementSetting setting2;
  MultiphotonBounds multiphoton;
  // Standard deviations of p1*, p2*; binomial at the z-basis N when absent.
  std::optional<double> sigma_p1;
  std::optional<double> sigma_p2;
  double n_z = 0.0;
};

WitnessReport certify(const CertifyInputs& in);

/// Count-based form: estimates from the raw tallies of both bases.
WitnessReport certify(const CountRecord& alpha_counts, const CountRecord& z_counts,
                      const DisplacementSetting& s1, const DisplacementSetting& s2,
                      const MultiphotonBounds& mb);

}  // namespace pathent
