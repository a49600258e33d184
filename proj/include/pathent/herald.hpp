#pragma once

#include "pathent/fock.hpp"
#include "pathent/phases.hpp"

namespace pathent {

/// Two SPDC sources and the links to the central station. Transmissions on
/// the idler side include everything up to and including the heralding
/// detector efficiency.
struct SourceParams {
  double pair_probability = 0.0;
  double signal_transmission_a = 1.0;
  double signal_transmission_b = 1.0;
  double idler_transmission_a = 1.0;
  double idler_transmission_b = 1.0;
  // Fraction of heralds caused by noise rather than an idler photon.
  double false_herald_probability = 0.0;

  static double false_herald_from_snr(double snr);

  void validate() const;
};

struct HeraldedState {
  DensityOperator rho;        // signal modes (A, B)
  double herald_probability;  // per pump pulse, noise heralds included
};

/// Heralded signal-pair state: both sources, idler phases and loss, the 50/50
/// combiner and a non-number-resolving click on its second output port (the
/// first port is traced out), mixed with the unheralded signal marginal at
/// weight false_herald_probability. Signal loss is applied to the result.
HeraldedState simulate_heralded_state(const SourceParams& src, const PhaseConfig& phases,
                                      FockTruncation trunc);

// Probability of a genuine (idler-caused) herald click per pulse.
double true_herald_probability(const SourceParams& src, FockTruncation trunc);

/// (1 - eta)|00><00| + eta |psi><psi|, |psi> = (|10> + e^{i phase}|01>)/sqrt2.
DensityOperator ideal_lossy_state(double eta, double relative_phase,
                                  FockTruncation trunc = FockTruncation{kDefaultSimulationNmax});

double heralding_rate(double herald_probability, double pump_rep_rate_hz, double duty_fraction);

}  // namespace pathent
