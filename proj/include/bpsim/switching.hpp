#ifndef BPSIM_SWITCHING_HPP_
#define BPSIM_SWITCHING_HPP_

#include <deque>
#include <optional>

#include "bpsim/estimator.hpp"

namespace bpsim {

struct SwitchingConfig {
  double dwell_window = 0.5;    // s, spread-check window over theta_F
  double stability_tol = 1e-4;  // max allowed max-min spread of theta_F
  double t_min_switch = 0.0;    // earliest allowed switch time, s

  void validate() const;
};

/// Single-switch trigger: hold omega_bar = omega_min until theta_F has been
/// available and stable across the dwell window, then substitute the
/// recovered frequency once and never again.
class SwitchLogic {
 public:
  explicit SwitchLogic(SwitchingConfig config);

  // Feed the current finite-time estimate (nullopt while not-ready). Resets
  // the dwell history on not-ready samples.
  void record(double t, std::optional<double> theta_F);

  bool should_switch(double t) const;

  // Marks the single switch and returns the recovered frequency for the
  // caller to hand to Compensator::retune_internal_model. Throws
  // "single-switch violated" on a second call.
  double apply_switch(const EstimatorState& est, const EstimatorConfig& est_config,
                      double t);

  bool switched() const { return switched_; }
  std::optional<double> switch_time() const { return switch_time_; }
  std::optional<double> theta_F_at_switch() const { return theta_F_at_switch_; }

 private:
  SwitchingConfig config_;
  bool switched_ = false;
  std::optional<double> switch_time_;
  std::optional<double> theta_F_at_switch_;
  std::deque<std::pair<double, double>> history_;  // (t, theta_F)
};

}  // namespace bpsim

#endif  // BPSIM_SWITCHING_HPP_
