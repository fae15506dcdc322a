#include "bpsim/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bpsim {

void EstimatorConfig::validate() const {
  if (!(gain_K > 0.0)) throw std::invalid_argument("estimator: K must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("estimator: tau must be positive");
  if (!(omega_min > 0.0) || !(omega_max > omega_min))
    throw std::invalid_argument("estimator: need 0 < omega_min < omega_max");
  if (!(tau * omega_max < std::numbers::pi))
    throw std::invalid_argument("estimator: tau * omega_max must stay below pi");
  if (!(w_threshold > 0.0 && w_threshold < 1.0))
    throw std::invalid_argument("estimator: w_threshold must lie in (0, 1)");
  if (warmup < 0.0) throw std::invalid_argument("estimator: warmup must be >= 0");
}

RegressionPair regression_pair(const DelayBuffer& buf, double t, double tau) {
  const double y = buf.sample(t);
  const double y1 = buf.sample(t - tau);
  const double y2 = buf.sample(t - 2.0 * tau);
  return {0.5 * (y + y2), y1};
}

void estimator_derivatives(double theta, double w, double z, double phi,
                           double K, double& dtheta, double& dw) {
  dtheta = K * phi * (z - phi * theta);
  dw = -K * phi * phi * w;
}

void estimator_step(EstimatorState& state, double z, double phi, double dt,
                    const EstimatorConfig& config) {
  const double K = config.gain_K;
  auto f = [&](double th, double w, double& dth, double& dw) {
    estimator_derivatives(th, w, z, phi, K, dth, dw);
  };
  double dth1, dw1, dth2, dw2, dth3, dw3, dth4, dw4;
  f(state.theta_hat, state.w, dth1, dw1);
  f(state.theta_hat + 0.5 * dt * dth1, state.w + 0.5 * dt * dw1, dth2, dw2);
  f(state.theta_hat + 0.5 * dt * dth2, state.w + 0.5 * dt * dw2, dth3, dw3);
  f(state.theta_hat + dt * dth3, state.w + dt * dw3, dth4, dw4);
  state.theta_hat += dt / 6.0 * (dth1 + 2 * dth2 + 2 * dth3 + dth4);
  state.w += dt / 6.0 * (dw1 + 2 * dw2 + 2 * dw3 + dw4);
}

std::optional<double> finite_time_estimate(const EstimatorState& state,
                                           const EstimatorConfig& config) {
  if (!(state.w < config.w_threshold)) return std::nullopt;
  return (state.theta_hat - state.w * config.theta0) / (1.0 - state.w);
}

double recover_frequency(double theta_F, double tau,
                         const EstimatorConfig& config, bool* clamped) {
  const double lo = std::cos(config.omega_max * tau);
  const double hi = std::cos(config.omega_min * tau);
  const double c = std::clamp(theta_F, lo, hi);
  if (clamped) *clamped = (c != theta_F);
  return std::acos(c) / tau;
}

}  // namespace bpsim
