#pragma once

namespace pathent {

enum class Side { alice, bob };

/// Optical phases of the two-source setup, in radians.
///   phi    pump phase before the crystal
///   zeta   seed-laser phase before the crystal
///   chi    idler phase from the crystal to the central station
///   xi_*   crystal-to-detector phase through the long/short AMZI arm
struct PhaseConfig {
  double phi_a = 0.0;
  double phi_b = 0.0;
  double zeta_a = 0.0;
  double zeta_b = 0.0;
  double chi_a = 0.0;
  double chi_b = 0.0;
  double xi_a_long = 0.0;
  double xi_a_short = 0.0;
  double xi_b_long = 0.0;
  double xi_b_short = 0.0;

  // zeta + chi + xi_long - xi_short on one side.
  double interferometer_phase(Side side) const;

  // interferometer_phase(alice) - interferometer_phase(bob); P00 is maximal at 0
  // and vanishes at pi.
  double delta() const { return interferometer_phase(Side::alice) - interferometer_phase(Side::bob); }

  // Phase carried by the single-photon amplitude on `side` in the heralded
  // state: phi + chi + xi_long.
  double photon_phase(Side side) const;

  // Argument of the displacement amplitude: phi - zeta + xi_short.
  double displacement_phase(Side side) const;

  // Throws ValidationError on non-finite entries.
  void validate() const;
};

}  // namespace pathent
