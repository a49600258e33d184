#pragma once

#include "pathent/fock.hpp"
#include "pathent/phases.hpp"
#include "pathent/types.hpp"

namespace pathent {

/// Displacement amplitude with the observed fluctuation interval.
struct DisplacementSetting {
  double alpha_mean = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  double phase = 0.0;

  static DisplacementSetting point(double alpha, double phase = 0.0) {
    return {alpha, alpha, alpha, phase};
  }

  Complex amplitude() const { return std::polar(alpha_mean, phase); }
  void validate() const;
};

struct DetectorModel {
  double efficiency = 1.0;
  void validate() const;
};

struct ClickPovm {
  Matrix no_click;
  Matrix click;
};

/// Click/no-click POVM of a displaced detector with the efficiency folded in:
/// E_nc = L_eta^dag[ D^dag(alpha sqrt(eta)) |0><0| D(alpha sqrt(eta)) ].
ClickPovm click_povm(Complex alpha, DetectorModel det, FockTruncation trunc);

/// Same measurement modeled directly: displacement, then a detector that
/// misses each photon with probability 1 - eta,
/// E_nc = D^dag(alpha) (sum_n (1-eta)^n |n><n|) D(alpha).
ClickPovm click_povm_unfolded(Complex alpha, DetectorModel det, FockTruncation trunc);

/// sigma_alpha = D^dag(alpha) (2|0><0| - I) D(alpha).
Matrix displaced_parity_observable(Complex alpha, FockTruncation trunc);

JointClickProbabilities joint_click_probabilities(const DensityOperator& rho,
                                                  const DisplacementSetting& s1,
                                                  const DisplacementSetting& s2, DetectorModel d1,
                                                  DetectorModel d2);

/// Removes every element between different total-photon-number sectors; this
/// is the exact global phase average of a two-mode operator.
Operator phase_average(const Operator& op);

/// Phase-averaged sigma_{alpha1} x sigma_{alpha2} for real amplitudes.
Operator phase_averaged_witness_operator(double alpha1, double alpha2, FockTruncation trunc);

/// Rows: the qubit states |00>,|01>,|10>,|11>; columns: every two-mode state
/// with at least one mode above one photon, in layout order.
Matrix qubit_coupling_block(const Operator& two_mode_op);

/// Probability that both detectors click when the mode is split on a 50/50
/// beam splitter.
double multiphoton_coincidence_probability(const DensityOperator& single_mode, DetectorModel det);

/// Analytic no-click/no-click probability of the ideal heralded state for
/// equal displacement amplitudes.
double p00_phase_model(double alpha_abs, const PhaseConfig& phases);

/// Displacement setting whose phase follows the pump/seed/AMZI bookkeeping.
DisplacementSetting phased_setting(double alpha_mean, double alpha_min, double alpha_max,
                                   Side side, const PhaseConfig& phases);

}  // namespace pathent
