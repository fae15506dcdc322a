#ifndef BPSIM_ESTIMATOR_HPP_
#define BPSIM_ESTIMATOR_HPP_

#include <optional>

#include "bpsim/signals.hpp"

namespace bpsim {

struct EstimatorConfig {
  double gain_K = 1.0;       // adaptation gain, > 0
  double tau = 0.1;          // regression delay, s
  double theta0 = 1.0;       // initial guess theta_hat(0)
  double warmup = 2.0;       // estimator gated off before this time, s
  double w_threshold = 0.9;  // expose theta_F only once w < threshold
  double omega_min = 0.1;    // rad/s
  double omega_max = 10.0;   // rad/s

  void validate() const;  // enforces tau * omega_max < pi, thresholds, signs
};

struct EstimatorState {
  double theta_hat = 0.0;  // gradient estimate
  double w = 1.0;          // normalization state, w(0) = 1
  bool active = false;     // true once warmup + history requirements are met
};

struct RegressionPair {
  double z;    // (y(t) + y(t - 2 tau)) / 2
  double phi;  // y(t - tau)
};

// Delay-based linear regression z = phi * cos(omega tau) of a sinusoidal
// output. Throws std::out_of_range while the buffer lacks 2*tau of history.
RegressionPair regression_pair(const DelayBuffer& buf, double t, double tau);

// Raw right-hand sides: dtheta = K phi (z - phi theta), dw = -K phi^2 w.
void estimator_derivatives(double theta, double w, double z, double phi,
                           double K, double& dtheta, double& dw);

// One RK4 step of the estimator pair with z, phi held constant.
void estimator_step(EstimatorState& state, double z, double phi, double dt,
                    const EstimatorConfig& config);

// Finite-time estimate theta_F = (theta_hat - w theta0) / (1 - w), exposed
// only once w has decayed below the threshold; std::nullopt means not-ready.
std::optional<double> finite_time_estimate(const EstimatorState& state,
                                           const EstimatorConfig& config);

// omega = arccos(theta_F) / tau with theta_F clamped to the
// [cos(omega_max tau), cos(omega_min tau)] branch. Sets *clamped (when
// given) if the raw value fell outside the branch.
double recover_frequency(double theta_F, double tau,
                         const EstimatorConfig& config,
                         bool* clamped = nullptr);

}  // namespace bpsim

#endif  // BPSIM_ESTIMATOR_HPP_
