#ifndef BPSIM_CONTROLLER_HPP_
#define BPSIM_CONTROLLER_HPP_

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "bpsim/lti.hpp"
#include "bpsim/polynomial.hpp"

namespace bpsim {

/// Numerator/denominator family of the internal-model filter F(p) feeding
/// u = -k F(p) xi_1.
enum class FilterForm {
  // alpha(p)(p+1)^3 / (p (p^2 + w^2)). Matches the characteristic polynomial
  // gamma(p) = a p (p^2+w^2) + k b alpha (p+1)^3 that gates the design; the
  // default, and the only family of the three that stabilizes the
  // ball-and-plate loop with the tuned gains.
  kIntegratorCube,
  // alpha(p)(p+1)^2 / (p^2 + w^2). Kept for comparison.
  kResonatorSquare,
  // alpha(p)(p+1)^2 / (p (p^2 + w^2)). Kept for comparison; closed loop is
  // unstable on the ball-and-plate plant with the tuned gains.
  kIntegratorSquare,
};

struct CompensatorConfig {
  double k = 1.0;       // filter gain, > 0
  double sigma = 10.0;  // observer speed, > k
  std::vector<double> observer_gains;  // k_1 .. k_{rho-1}; empty when rho = 1
  Polynomial alpha = Polynomial{1.0};  // Hurwitz, degree rho - 1
  double internal_model_freq = 1.0;    // current omega_bar, rad/s
  int rho = 1;                         // relative degree, >= 1
  double omega_min = 0.1;
  double omega_max = 100.0;
  FilterForm filter_form = FilterForm::kIntegratorCube;

  void validate() const;  // throws std::invalid_argument listing the violation
};

struct ObserverMatrices {
  Eigen::MatrixXd Gamma;  // (rho-1) x (rho-1) companion, Hurwitz
  Eigen::VectorXd d;      // (0, ..., 0, k_1)^T
  Eigen::VectorXd h;      // (1, 0, ..., 0)^T
};

// Companion-form observer matrices for xi' = sigma (Gamma xi + d y). Asserts
// the structural identity d = -Gamma h. Requires rho >= 2; throws
// "bad observer gains" when Gamma is not Hurwitz.
ObserverMatrices build_observer_matrices(const CompensatorConfig& config);

/// The internal-model filter, split into a strictly proper realization and a
/// polynomial quotient acting on exact derivatives of xi_1.
struct InternalModelFilter {
  Polynomial num, den;            // full F(p) = num/den (improper in general)
  StateSpaceModel proper;         // realization of (num mod den) / den
  std::vector<double> quotient;   // ascending; empty when F is strictly proper
  double omega = 0.0;

  std::complex<double> eval(std::complex<double> s) const {
    return num.eval(s) / den.eval(s);
  }
};

InternalModelFilter build_internal_model_filter(const CompensatorConfig& config);

/// Output-feedback consecutive compensator: high-gain observer chain xi plus
/// the internal-model filter. State layout: [xi (rho-1) | filter (deg den)].
///
/// Two usage modes share the same math: span-based derivatives()/output()
/// for a monolithic simulation state, and observer_step()/control_output()
/// advancing the internally owned state for component-level use.
class Compensator {
 public:
  explicit Compensator(CompensatorConfig config);

  int observer_dim() const { return config_.rho - 1; }
  int filter_dim() const { return filter_.proper.order(); }
  int state_dim() const { return observer_dim() + filter_dim(); }

  const CompensatorConfig& config() const { return config_; }
  const InternalModelFilter& filter() const { return filter_; }
  double internal_model_freq() const { return filter_.omega; }

  // Time derivative of [xi | filter] given the measured output y.
  void derivatives(std::span<const double> state, double y,
                   std::span<double> dstate) const;

  // u(t) = -k [ quotient(d/dt) xi_1 + proper-filter output ], cross-faded
  // over the retune window when one is active.
  double output(std::span<const double> state, double y, double t) const;

  // Retunes the internal model to new_omega (clamped to [omega_min,
  // omega_max]; clamping sets clamped_last_retune()). The filter state is
  // preserved across the rebuild and u is cross-faded from u_now over
  // fade_duration seconds. Returns the frequency actually applied.
  double retune_internal_model(double new_omega, double t, double u_now,
                               double fade_duration);
  bool clamped_last_retune() const { return clamped_last_retune_; }

  // Internally-owned-state interface.
  std::span<double> state() { return state_; }
  std::span<const double> state() const { return state_; }
  double xi1(double y) const;  // xi_1, or y itself when rho = 1
  void observer_step(double y, double dt);          // advances xi only (RK4)
  double control_output(double y, double dt);       // advances filter, returns u

 private:
  std::vector<double> xi1_derivatives(std::span<const double> state, double y,
                                      std::size_t count) const;

  CompensatorConfig config_;
  ObserverMatrices observer_;  // empty matrices when rho = 1
  InternalModelFilter filter_;
  std::vector<double> state_;
  double clock_ = 0.0;  // advanced by the convenience stepping interface
  double fade_from_ = 0.0;
  double fade_t0_ = -1.0;
  double fade_len_ = 0.0;
  bool clamped_last_retune_ = false;
};

}  // namespace bpsim

#endif  // BPSIM_CONTROLLER_HPP_
