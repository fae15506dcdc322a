#ifndef BPSIM_SIMCORE_HPP_
#define BPSIM_SIMCORE_HPP_

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bpsim/scenario.hpp"

namespace bpsim {

// dx/dt = f(t, x) written into dxdt; dxdt.size() == x.size().
using VectorField =
    std::function<void(double, std::span<const double>, std::span<double>)>;

// In-place classic RK4 update of x from t to t + h. Throws
// std::runtime_error("divergence") if the updated state is non-finite.
void rk4_step(const VectorField& f, std::span<double> x, double t, double h);

/// Column-oriented trace with a fixed channel schema. Values are serialized
/// with 17 significant digits so a read-back reproduces the run bit-exactly.
class TraceLog {
 public:
  explicit TraceLog(std::vector<std::string> names);

  struct SwitchEvent {
    double t = 0.0;
    double omega_hat = 0.0;
    double theta_F = 0.0;
  };

  const std::vector<std::string>& names() const { return names_; }
  std::size_t rows() const { return rows_; }
  std::size_t num_channels() const { return names_.size(); }

  void add_row(std::span<const double> values);
  const std::vector<double>& column(const std::string& name) const;
  double value(const std::string& name, std::size_t row) const;

  void set_switch_event(SwitchEvent e) { switch_event_ = e; }
  const std::optional<SwitchEvent>& switch_event() const { return switch_event_; }

  void write_csv(std::ostream& out) const;
  static TraceLog read_csv(std::istream& in);

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::size_t rows_ = 0;
  std::optional<SwitchEvent> switch_event_;
};

// Channel schema shared by both run modes: t, y, u, delta, xi1, theta_hat,
// w, theta_F, omega_hat, omega_bar, switched. Not-ready / not-applicable
// entries are NaN.
const std::vector<std::string>& trace_channels();

enum class RunStatus { kOk, kDiverged, kBallLeftPlate };

struct RunSummary {
  std::optional<double> omega_hat;          // recovered frequency at switch
  std::optional<double> switch_time;
  std::optional<double> theta_F_at_switch;
  std::optional<double> settling_time;      // |y| stays < 1% of pre-switch peak
  double pre_switch_peak_y = 0.0;
  double peak_abs_y = 0.0;
  double peak_abs_u = 0.0;
  double final_abs_y = 0.0;
  bool estimator_ready = false;             // theta_F available at end of run
  bool omega_clamped = false;               // recovery hit the branch clamp
};

struct RunResult {
  RunStatus status = RunStatus::kOk;
  std::string message;  // diagnostic for non-kOk statuses
  TraceLog trace;
  RunSummary summary;
};

// Open-loop estimation: y = delta(t) (+ noise), no plant or controller in the
// loop; logs the estimator channels against the same schema.
RunResult run_open_loop_estimation(const Scenario& scenario);

// Closed loop: plant (linear companion realization or nonlinear x-axis
// ball-and-plate), consecutive compensator, finite-time estimator, and the
// single-switch internal-model retune, advanced as one monolithic RK4 state.
// Measurement noise is drawn once per step and held through the stages.
RunResult run_closed_loop(const Scenario& scenario);

// Dispatch on scenario.mode.
RunResult run_scenario(const Scenario& scenario);

void write_summary(std::ostream& out, const Scenario& scenario,
                   const RunResult& result);

}  // namespace bpsim

#endif  // BPSIM_SIMCORE_HPP_
