#include "bpsim/switching.hpp"

#include <algorithm>
#include <stdexcept>

namespace bpsim {

void SwitchingConfig::validate() const {
  if (!(dwell_window > 0.0))
    throw std::invalid_argument("switching: dwell_window must be positive");
  if (!(stability_tol > 0.0))
    throw std::invalid_argument("switching: stability_tol must be positive");
}

SwitchLogic::SwitchLogic(SwitchingConfig config) : config_(config) {
  config_.validate();
}

void SwitchLogic::record(double t, std::optional<double> theta_F) {
  if (!theta_F.has_value()) {
    history_.clear();
    return;
  }
  history_.emplace_back(t, *theta_F);
  // Keep one sample at or before t - dwell_window so coverage is checkable.
  while (history_.size() > 1 && history_[1].first <= t - config_.dwell_window)
    history_.pop_front();
}

bool SwitchLogic::should_switch(double t) const {
  if (switched_ || t < config_.t_min_switch || history_.empty()) return false;
  // The spread test needs theta_F coverage of the full dwell window.
  if (history_.front().first > t - config_.dwell_window) return false;
  double lo = history_.front().second, hi = lo;
  for (const auto& [ht, v] : history_) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo <= config_.stability_tol;
}

double SwitchLogic::apply_switch(const EstimatorState& est,
                                 const EstimatorConfig& est_config, double t) {
  if (switched_) throw std::logic_error("single-switch violated");
  const auto theta_F = finite_time_estimate(est, est_config);
  if (!theta_F.has_value())
    throw std::logic_error("apply_switch: estimate not ready");
  switched_ = true;
  switch_time_ = t;
  theta_F_at_switch_ = *theta_F;
  return recover_frequency(*theta_F, est_config.tau, est_config);
}

}  // namespace bpsim
