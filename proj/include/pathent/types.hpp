#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pathent {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Input outside the documented range of an operation.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that cannot produce a finite, meaningful result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Multiphoton bounds outside the domain of the linearized square-root bound.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Joint click/no-click outcome probabilities of the two local detectors for
/// one pair of displacement settings. "nc_c" is no-click on mode 1, click on
/// mode 2.
struct JointClickProbabilities {
  double nc_nc = 0.0;
  double nc_c = 0.0;
  double c_nc = 0.0;
  double c_c = 0.0;

  double sum() const { return nc_nc + nc_c + c_nc + c_c; }

  // Throws ValidationError unless each entry is in [0,1] and they sum to 1.
  void validate(double tolerance = 1e-9) const;
};

// Sum tolerance for measured frequencies, which are often quoted rounded.
inline constexpr double kMeasuredSumTolerance = 5e-4;

/// Coefficients of the substituted separable bound, evaluated at the
/// displacement amplitudes that maximize it.
struct WitnessCoefficients {
  double c1 = 0.0;  // P_nc,nc  (P00)
  double c2 = 0.0;  // sqrt(P_nc,nc P_c,c)
  double c3 = 0.0;  // P_c,c    (P11)
  double c4 = 0.0;  // P_c,nc   (P10)
  double c5 = 0.0;  // P_nc,c   (P01)

  static WitnessCoefficients at(double alpha1, double alpha2);
};

/// Upper bounds on the probability of more than one photon in each mode.
struct MultiphotonBounds {
  double p1_star = 0.0;
  double p2_star = 0.0;

  double total() const { return p1_star + p2_star; }

  // ValidationError for negative entries, DomainError for a sum above 1/2.
  void validate() const;
};

}  // namespace pathent
