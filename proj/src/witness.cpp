#include "pathent/witness.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>

#include "pathent/kernels.hpp"

namespace pathent {

namespace {

constexpr std::size_t kBoxGrid = 101;
constexpr double kFiniteDifferenceStep = 1e-4;

struct BoxMaximum {
  double value;
  double x1;
  double x2;
};

// Grid search followed by compass refinement inside the box. The refinement
// only accepts strict improvements, so the result is never below the grid
// maximum or any seeded candidate.
BoxMaximum maximize_on_box(const kernels::Objective2d& f, const kernels::Box& box,
                           std::initializer_list<std::pair<double, double>> candidates = {}) {
  const kernels::GridMaximum grid = kernels::grid_maximize(f, box, kBoxGrid, kBoxGrid);
  if (std::isnan(grid.value)) throw NumericalError("objective is NaN everywhere on the box");
  BoxMaximum best{grid.value, grid.x1, grid.x2};
  for (const auto& [c1, c2] : candidates) {
    const double v = f(c1, c2);
    if (v > best.value) best = {v, c1, c2};
  }

  double step1 = (box.hi1 - box.lo1) / static_cast<double>(kBoxGrid - 1);
  double step2 = (box.hi2 - box.lo2) / static_cast<double>(kBoxGrid - 1);
  for (int iter = 0; iter < 10000 && (step1 > 1e-13 || step2 > 1e-13); ++iter) {
    bool improved = false;
    const std::pair<double, double> moves[] = {{step1, 0.0}, {-step1, 0.0}, {0.0, step2}, {0.0, -step2}};
    for (const auto& [m1, m2] : moves) {
      if (m1 == 0.0 && m2 == 0.0) continue;
      const double x1 = std::clamp(best.x1 + m1, box.lo1, box.hi1);
      const double x2 = std::clamp(best.x2 + m2, box.lo2, box.hi2);
      const double v = f(x1, x2);
      if (v > best.value + 1e-15) {
        best = {v, x1, x2};
        improved = true;
      }
    }
    if (!improved) {
      step1 *= 0.5;
      step2 *= 0.5;
    }
  }
  return best;
}

kernels::Box box_of(const DisplacementSetting& s1, const DisplacementSetting& s2) {
  s1.validate();
  s2.validate();
  return {s1.alpha_min, s1.alpha_max, s2.alpha_min, s2.alpha_max};
}

}  // namespace

void JointClickProbabilities::validate(double tolerance) const {
  for (double p : {nc_nc, nc_c, c_nc, c_c}) {
    if (!(p >= -tolerance && p <= 1.0 + tolerance)) {
      throw ValidationError("joint click probability outside [0,1]: " + std::to_string(p));
    }
  }
  if (std::abs(sum() - 1.0) > tolerance) {
    throw ValidationError("joint click probabilities sum to " + std::to_string(sum()));
  }
}

WitnessCoefficients WitnessCoefficients::at(double alpha1, double alpha2) {
  const double a1 = alpha1 * alpha1;
  const double a2 = alpha2 * alpha2;
  const double e1 = std::exp(-a1);
  const double e2 = std::exp(-a2);
  return {
      (2.0 * e1 - 1.0) * (2.0 * e2 - 1.0),
      8.0 * alpha1 * alpha2 * e1 * e2,
      (2.0 * a1 * e1 - 1.0) * (2.0 * a2 * e2 - 1.0),
      (2.0 * a1 * e1 - 1.0) * (2.0 * e2 - 1.0),
      (2.0 * e1 - 1.0) * (2.0 * a2 * e2 - 1.0),
  };
}

void MultiphotonBounds::validate() const {
  if (!(p1_star >= 0.0 && p2_star >= 0.0) || !std::isfinite(p1_star) || !std::isfinite(p2_star)) {
    throw ValidationError("multiphoton bounds must be finite and nonnegative");
  }
  if (total() > 0.5) {
    throw DomainError("p1* + p2* = " + std::to_string(total()) + " exceeds 1/2");
  }
}

void QubitProbs::validate() const {
  for (double p : {p00, p01, p10, p11}) {
    if (!(p >= 0.0)) throw ValidationError("qubit populations must be nonnegative");
  }
  if (p00 + p01 + p10 + p11 > 1.0 + kMeasuredSumTolerance) throw ValidationError("qubit populations exceed 1");
}

double w_exp(const JointClickProbabilities& jp) { return jp.nc_nc + jp.c_c - jp.c_nc - jp.nc_c; }

double w_ppt_qubit(double alpha1, double alpha2, const QubitProbs& qp) {
  const WitnessCoefficients c = WitnessCoefficients::at(alpha1, alpha2);
  return c.c1 * qp.p00 + c.c2 * std::sqrt(qp.p00 * qp.p11) + c.c3 * qp.p11 + c.c4 * qp.p10 + c.c5 * qp.p01;
}

double substituted_bound(double alpha1, double alpha2, const JointClickProbabilities& jp_z,
                         const MultiphotonBounds& mb) {
  const WitnessCoefficients c = WitnessCoefficients::at(alpha1, alpha2);
  return c.c1 * jp_z.nc_nc + c.c2 * std::sqrt(jp_z.nc_nc * jp_z.c_c) + c.c3 * jp_z.c_c +
         std::max(c.c4 * (jp_z.c_nc - mb.p1_star), c.c4 * jp_z.c_nc) +
         std::max(c.c5 * (jp_z.nc_c - mb.p2_star), c.c5 * jp_z.nc_c);
}

double b_max(double alpha1, double alpha2) {
  const double a1 = alpha1 * alpha1;
  const double a2 = alpha2 * alpha2;
  return 2.0 * alpha1 * alpha2 * std::exp(-a1 - a2) * std::sqrt(2.0 * a1 * a1 + 2.0 * a2 * a2);
}

FluctuationBound w_ppt_fluctuation_bound(const DisplacementSetting& s1,
                                         const DisplacementSetting& s2,
                                         const JointClickProbabilities& jp_z,
                                         const MultiphotonBounds& mb) {
  const kernels::Box box = box_of(s1, s2);
  jp_z.validate(kMeasuredSumTolerance);
  mb.validate();
  const auto objective = [&](double a1, double a2) { return substituted_bound(a1, a2, jp_z, mb); };
  const BoxMaximum best = maximize_on_box(objective, box, {{s1.alpha_mean, s2.alpha_mean}});
  return {best.value, WitnessCoefficients::at(best.x1, best.x2), best.x1, best.x2};
}

double beta_bound(const DisplacementSetting& s1, const DisplacementSetting& s2) {
  const kernels::Box box = box_of(s1, s2);
  return maximize_on_box(b_max, box, {{s1.alpha_mean, s2.alpha_mean}}).value;
}

double w_ppt_max(double w_tilde, const MultiphotonBounds& mb, double beta) {
  mb.validate();
  const double s = mb.total();
  return w_tilde + s + 2.0 * beta * std::sqrt(s * (1.0 - s));
}

double diagonal_slope(double alpha, const QubitProbs& qp) {
  const double h = kFiniteDifferenceStep;
  return (w_ppt_qubit(alpha + h, alpha + h, qp) - w_ppt_qubit(alpha - h, alpha - h, qp)) / (2.0 * h);
}

std::pair<double, double> optimal_alpha(const QubitProbs& qp, AlphaCriterion criterion) {
  qp.validate();
  if (criterion == AlphaCriterion::max_violation) {
    const double coherence_gap = std::sqrt(qp.p10 * qp.p01) - std::sqrt(qp.p00 * qp.p11);
    if (!(coherence_gap > 0.0)) throw NumericalError("populations admit no violating displacement");
    const auto violation = [&](double a1, double a2) {
      return WitnessCoefficients::at(a1, a2).c2 * coherence_gap;
    };
    const BoxMaximum best = maximize_on_box(violation, {1e-6, 2.0, 1e-6, 2.0});
    // The objective is symmetric whenever it is maximal on the diagonal;
    // average away the refinement's last-bit asymmetry.
    if (std::abs(best.x1 - best.x2) < 1e-6) {
      const double a = 0.5 * (best.x1 + best.x2);
      return {a, a};
    }
    return {best.x1, best.x2};
  }

  constexpr double kScanStep = 0.01;
  double lo = kScanStep;
  double slope_lo = diagonal_slope(lo, qp);
  for (double hi = lo + kScanStep; hi <= 2.0 + 1e-12; hi += kScanStep) {
    const double slope_hi = diagonal_slope(hi, qp);
    if (slope_lo < 0.0 && slope_hi >= 0.0) {
      for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (diagonal_slope(mid, qp) < 0.0 ? lo : hi) = mid;
      }
      const double root = 0.5 * (lo + hi);
      return {root, root};
    }
    lo = hi;
    slope_lo = slope_hi;
  }
  throw NumericalError("no stationary amplitude of w_ppt in (0, 2]");
}

WitnessReport certify(const CertifyInputs& in) {
  in.multiphoton.validate();
  const JointClickProbabilities jp_alpha = in.alpha_basis.values();
  const JointClickProbabilities jp_z = in.z_basis.values();
  jp_alpha.validate(kMeasuredSumTolerance);
  jp_z.validate(kMeasuredSumTolerance);

  WitnessReport r;
  r.multiphoton = in.multiphoton;
  r.alpha_estimates = in.alpha_basis;
  r.z_estimates = in.z_basis;
  r.w_exp = w_exp(jp_alpha);
  r.w_ppt = w_ppt_qubit(in.setting1.alpha_mean, in.setting2.alpha_mean, QubitProbs::from_z_basis(jp_z));

  const FluctuationBound fb = w_ppt_fluctuation_bound(in.setting1, in.setting2, jp_z, in.multiphoton);
  r.w_tilde_ppt = fb.w_tilde;
  r.coefficients = fb.coefficients;
  r.alpha1_at_max = fb.alpha1;
  r.alpha2_at_max = fb.alpha2;
  r.alpha_interval_slack = r.w_tilde_ppt - r.w_ppt;
  r.beta = beta_bound(in.setting1, in.setting2);
  r.w_ppt_max = w_ppt_max(r.w_tilde_ppt, in.multiphoton, r.beta);

  r.p1_estimate = in.sigma_p1 ? ProbEstimate{in.multiphoton.p1_star, *in.sigma_p1}
                              : binomial_estimate(in.multiphoton.p1_star, in.n_z);
  r.p2_estimate = in.sigma_p2 ? ProbEstimate{in.multiphoton.p2_star, *in.sigma_p2}
                              : binomial_estimate(in.multiphoton.p2_star, in.n_z);
  r.sigma_exp = sigma_w_exp(in.alpha_basis);
  r.sigma_ppt_max = sigma_ppt_max(in.z_basis, r.p1_estimate, r.p2_estimate, r.coefficients, r.beta);

  const double spread = r.sigma_exp + r.sigma_ppt_max;
  if (spread > 0.0) {
    r.k = violation_k(r.w_exp, r.sigma_exp, r.w_ppt_max, r.sigma_ppt_max);
  } else if (r.w_exp <= r.w_ppt_max) {
    // Noise-free tallies that do not violate: no significance to report.
    r.k = 0.0;
  } else {
    throw NumericalError("violation with zero statistical spread has unbounded significance");
  }
  return r;
}

WitnessReport certify(const CountRecord& alpha_counts, const CountRecord& z_counts,
                      const DisplacementSetting& s1, const DisplacementSetting& s2,
                      const MultiphotonBounds& mb) {
  CertifyInputs in;
  in.alpha_basis = estimate_probabilities(alpha_counts);
  in.z_basis = estimate_probabilities(z_counts);
  in.setting1 = s1;
  in.setting2 = s2;
  in.multiphoton = mb;
  in.n_z = static_cast<double>(z_counts.n_total);
  return certify(in);
}

}  // namespace pathent
