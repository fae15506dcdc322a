#include "bpsim/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bpsim/controller.hpp"
#include "bpsim/estimator.hpp"
#include "bpsim/lti.hpp"
#include "bpsim/plants.hpp"
#include "bpsim/switching.hpp"

namespace bpsim {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDivergeBound = 1e3;  // |y| beyond this counts as divergence

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void rk4_step(const VectorField& f, std::span<double> x, double t, double h) {
  const std::size_t n = x.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  f(t, x, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  f(t + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  f(t + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
  f(t + h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(x[i])) throw std::runtime_error("divergence");
  }
}

TraceLog::TraceLog(std::vector<std::string> names)
    : names_(std::move(names)), columns_(names_.size()) {}

void TraceLog::add_row(std::span<const double> values) {
  if (values.size() != names_.size())
    throw std::invalid_argument("TraceLog::add_row: channel count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    columns_[i].push_back(values[i]);
  ++rows_;
}

const std::vector<double>& TraceLog::column(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return columns_[i];
  throw std::out_of_range("TraceLog: no channel named " + name);
}

double TraceLog::value(const std::string& name, std::size_t row) const {
  return column(name).at(row);
}

void TraceLog::write_csv(std::ostream& out) const {
  if (switch_event_) {
    out << "# switch_event," << fmt17(switch_event_->t) << ','
        << fmt17(switch_event_->omega_hat) << ','
        << fmt17(switch_event_->theta_F) << '\n';
  }
  for (std::size_t i = 0; i < names_.size(); ++i)
    out << (i ? "," : "") << names_[i];
  out << '\n';
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t i = 0; i < names_.size(); ++i)
      out << (i ? "," : "") << fmt17(columns_[i][r]);
    out << '\n';
  }
}

TraceLog TraceLog::read_csv(std::istream& in) {
  std::string line;
  std::optional<SwitchEvent> event;
  // Leading comment lines; "# switch_event,t,omega_hat,theta_F" is metadata.
  while (in.peek() == '#') {
    std::getline(in, line);
    std::istringstream ls(line);
    std::string tag;
    std::getline(ls, tag, ',');
    if (tag == "# switch_event") {
      SwitchEvent e;
      std::string cell;
      std::getline(ls, cell, ',');
      e.t = std::strtod(cell.c_str(), nullptr);
      std::getline(ls, cell, ',');
      e.omega_hat = std::strtod(cell.c_str(), nullptr);
      std::getline(ls, cell, ',');
      e.theta_F = std::strtod(cell.c_str(), nullptr);
      event = e;
    }
  }
  if (!std::getline(in, line))
    throw std::runtime_error("TraceLog::read_csv: missing header");
  std::vector<std::string> names;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) names.push_back(cell);
  }
  TraceLog log(std::move(names));
  if (event) log.set_switch_event(*event);
  std::vector<double> row(log.num_channels());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(ls, cell, ',')) {
      if (i >= row.size())
        throw std::runtime_error("TraceLog::read_csv: too many cells");
      row[i++] = std::strtod(cell.c_str(), nullptr);
    }
    if (i != row.size())
      throw std::runtime_error("TraceLog::read_csv: too few cells");
    log.add_row(row);
  }
  return log;
}

const std::vector<std::string>& trace_channels() {
  static const std::vector<std::string> kChannels = {
      "t", "y",         "u", "delta",     "xi1",       "theta_hat",
      "w", "theta_F",   "omega_hat",      "omega_bar", "switched"};
  return kChannels;
}

namespace {

// Fills summary fields that derive from the completed trace.
void finish_summary(RunResult& result) {
  const auto& t = result.trace.column("t");
  const auto& y = result.trace.column("y");
  const auto& u = result.trace.column("u");
  RunSummary& s = result.summary;
  if (t.empty()) return;
  const double t_cut = result.trace.switch_event()
                           ? result.trace.switch_event()->t
                           : t.back();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double ay = std::abs(y[i]);
    s.peak_abs_y = std::max(s.peak_abs_y, ay);
    if (t[i] <= t_cut) s.pre_switch_peak_y = std::max(s.pre_switch_peak_y, ay);
    if (std::isfinite(u[i])) s.peak_abs_u = std::max(s.peak_abs_u, std::abs(u[i]));
  }
  s.final_abs_y = std::abs(y.back());
  if (s.pre_switch_peak_y > 0.0) {
    const double thr = 0.01 * s.pre_switch_peak_y;
    std::size_t last_bad = t.size();  // sentinel: settled from the start
    for (std::size_t i = t.size(); i-- > 0;) {
      if (std::abs(y[i]) >= thr) {
        last_bad = i;
        break;
      }
    }
    if (last_bad == t.size())
      s.settling_time = t.front();
    else if (last_bad + 1 < t.size())
      s.settling_time = t[last_bad + 1];
    // else: still above the band at the end of the run -> no settling time.
  }
}

}  // namespace

RunResult run_open_loop_estimation(const Scenario& sc) {
  const EstimatorConfig& ec = sc.estimator;
  const double h = sc.sim.step;
  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(sc.sim.duration / h));

  RunResult result{RunStatus::kOk, "", TraceLog(trace_channels()), {}};
  DelayBuffer buf(DelayBuffer::capacity_for(ec.tau, h));
  std::mt19937_64 rng(sc.sim.rng_seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  double theta = ec.theta0, w = 1.0;
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const double nz = sc.sim.noise_std > 0.0 ? sc.sim.noise_std * noise(rng) : 0.0;
    const double delta = sc.disturbance.eval(t);
    const double y = delta + nz;
    buf.push(t, y);

    const bool active = t >= ec.warmup && buf.covers(t - 2.0 * ec.tau);
    EstimatorState est{theta, w, active};
    const auto theta_F = finite_time_estimate(est, ec);
    double omega_hat = kNaN;
    if (theta_F) omega_hat = recover_frequency(*theta_F, ec.tau, ec);

    result.trace.add_row(std::vector<double>{
        t, y, kNaN, delta, kNaN, theta, w, theta_F ? *theta_F : kNaN,
        omega_hat, kNaN, 0.0});

    if (k == n_steps) {
      result.summary.estimator_ready = theta_F.has_value();
      if (theta_F) {
        bool clamped = false;
        result.summary.omega_hat =
            recover_frequency(*theta_F, ec.tau, ec, &clamped);
        result.summary.omega_clamped = clamped;
      }
      break;
    }
    if (active) {
      const auto [z, phi] = regression_pair(buf, t, ec.tau);
      estimator_step(est, z, phi, h, ec);
      theta = est.theta_hat;
      w = est.w;
    }
  }
  finish_summary(result);
  return result;
}

RunResult run_closed_loop(const Scenario& sc) {
  const EstimatorConfig& ec = sc.estimator;
  const BallPlateParams& pp = sc.plant;
  const double h = sc.sim.step;
  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(sc.sim.duration / h));
  const bool nonlinear = sc.plant_model == PlantModel::kNonlinear;

  Compensator comp(sc.controller);
  SwitchLogic logic(sc.switching);
  DelayBuffer buf(DelayBuffer::capacity_for(ec.tau, h));
  std::mt19937_64 rng(sc.sim.rng_seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  // Monolithic state: [plant | compensator | theta_hat | w].
  const StateSpaceModel plant_ss = tf_to_statespace(linearized_tf(pp));
  const std::size_t np = nonlinear ? 3 : static_cast<std::size_t>(plant_ss.order());
  const std::size_t nc = static_cast<std::size_t>(comp.state_dim());
  std::vector<double> x(np + nc + 2, 0.0);
  x[np + nc] = ec.theta0;  // theta_hat(0)
  x[np + nc + 1] = 1.0;    // w(0)

  auto measure = [&](std::span<const double> xs) -> double {
    if (nonlinear) return xs[0];  // [x_b, vx, Qx]
    double y = 0.0;
    for (std::size_t i = 0; i < np; ++i) y += plant_ss.c(static_cast<int>(i)) * xs[i];
    return y;
  };

  RunResult result{RunStatus::kOk, "", TraceLog(trace_channels()), {}};

  // Regressors and measurement noise are frozen across the RK4 stages of a
  // step; est_active gates the estimator part of the vector field.
  double nz = 0.0, z = 0.0, phi = 0.0;
  bool est_active = false;
  const VectorField field = [&](double tt, std::span<const double> xs,
                                std::span<double> dx) {
    const double y_m = measure(xs) + nz;
    const std::span<const double> comp_x = xs.subspan(np, nc);
    const double u = comp.output(comp_x, y_m, tt);
    const double v = u + sc.disturbance.eval(tt);  // matched disturbance
    if (nonlinear) {
      const double Qdot = (pp.K_m * sc.drive_sign * v - xs[2]) / pp.T_m;
      BallPlateState bs;
      bs.x_b = xs[0];
      bs.vx = xs[1];
      bs.Qx = xs[2];
      bs.alpha = servo_to_plate_angle(xs[2], pp);
      PlateRates rates{(pp.d / pp.L) * Qdot, 0.0};
      const auto [ax, ay] = nonlinear_accel(bs, rates, pp);
      dx[0] = xs[1];
      dx[1] = ax;
      dx[2] = Qdot;
    } else {
      for (std::size_t i = 0; i < np; ++i) {
        double s = plant_ss.b(static_cast<int>(i)) * v;
        for (std::size_t j = 0; j < np; ++j)
          s += plant_ss.A(static_cast<int>(i), static_cast<int>(j)) * xs[j];
        dx[i] = s;
      }
    }
    comp.derivatives(comp_x, y_m, dx.subspan(np, nc));
    if (est_active) {
      estimator_derivatives(xs[np + nc], xs[np + nc + 1], z, phi, ec.gain_K,
                            dx[np + nc], dx[np + nc + 1]);
    } else {
      dx[np + nc] = 0.0;
      dx[np + nc + 1] = 0.0;
    }
  };

  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * h;
    nz = sc.sim.noise_std > 0.0 ? sc.sim.noise_std * noise(rng) : 0.0;
    const double y = measure(x);
    const double y_m = y + nz;
    buf.push(t, y_m);

    est_active = t >= ec.warmup && buf.covers(t - 2.0 * ec.tau);
    if (est_active) {
      const auto [zz, pph] = regression_pair(buf, t, ec.tau);
      z = zz;
      phi = pph;
    }

    const std::span<const double> comp_x =
        std::span<const double>(x).subspan(np, nc);
    EstimatorState est{x[np + nc], x[np + nc + 1], est_active};
    const auto theta_F = finite_time_estimate(est, ec);

    logic.record(t, theta_F);
    if (sc.switching_enabled && logic.should_switch(t)) {
      const double u_now = comp.output(comp_x, y_m, t);
      const double omega_raw = logic.apply_switch(est, ec, t);
      const double applied = comp.retune_internal_model(
          omega_raw, t, u_now, sc.crossfade_steps * h);
      bool clamped = false;
      recover_frequency(*theta_F, ec.tau, ec, &clamped);
      result.summary.omega_hat = applied;
      result.summary.switch_time = t;
      result.summary.theta_F_at_switch = *theta_F;
      result.summary.omega_clamped = clamped || comp.clamped_last_retune();
      result.trace.set_switch_event({t, applied, *theta_F});
    }

    const double u = comp.output(comp_x, y_m, t);
    const double xi1 = comp.observer_dim() > 0 ? x[np] : y_m;
    double omega_hat_chan = kNaN;
    if (theta_F) omega_hat_chan = recover_frequency(*theta_F, ec.tau, ec);
    result.trace.add_row(std::vector<double>{
        t, y, u, sc.disturbance.eval(t), xi1, x[np + nc], x[np + nc + 1],
        theta_F ? *theta_F : kNaN, omega_hat_chan, comp.internal_model_freq(),
        logic.switched() ? 1.0 : 0.0});

    if (k == n_steps) {
      result.summary.estimator_ready = theta_F.has_value();
      break;
    }

    try {
      rk4_step(field, x, t, h);
    } catch (const std::runtime_error&) {
      result.status = RunStatus::kDiverged;
      result.message = "divergence: non-finite state at t = " + fmt17(t + h);
      break;
    }
    const double y_next = measure(x);
    if (std::abs(y_next) > kDivergeBound) {
      result.status = RunStatus::kDiverged;
      result.message = "divergence: |y| > " + fmt17(kDivergeBound) +
                       " at t = " + fmt17(t + h);
      break;
    }
    if (nonlinear && std::abs(x[0]) > 0.5 * pp.L) {
      result.status = RunStatus::kBallLeftPlate;
      result.message = "ball left the plate at t = " + fmt17(t + h);
      break;
    }
  }
  finish_summary(result);
  return result;
}

RunResult run_scenario(const Scenario& scenario) {
  return scenario.mode == RunMode::kOpenLoopEstimation
             ? run_open_loop_estimation(scenario)
             : run_closed_loop(scenario);
}

void write_summary(std::ostream& out, const Scenario& sc,
                   const RunResult& result) {
  auto opt = [](const std::optional<double>& v) {
    return v ? fmt17(*v) : std::string("none");
  };
  const char* status = "ok";
  if (result.status == RunStatus::kDiverged) status = "diverged";
  if (result.status == RunStatus::kBallLeftPlate) status = "ball_left_plate";
  out << "scenario = " << sc.name << '\n'
      << "status = " << status << '\n';
  if (!result.message.empty()) out << "message = " << result.message << '\n';
  out << "rows = " << result.trace.rows() << '\n'
      << "recovered_omega = " << opt(result.summary.omega_hat) << '\n'
      << "switch_time = " << opt(result.summary.switch_time) << '\n'
      << "theta_F_at_switch = " << opt(result.summary.theta_F_at_switch) << '\n'
      << "settling_time_1pct = " << opt(result.summary.settling_time) << '\n'
      << "pre_switch_peak_y = " << fmt17(result.summary.pre_switch_peak_y) << '\n'
      << "peak_abs_y = " << fmt17(result.summary.peak_abs_y) << '\n'
      << "peak_abs_u = " << fmt17(result.summary.peak_abs_u) << '\n'
      << "final_abs_y = " << fmt17(result.summary.final_abs_y) << '\n'
      << "estimator_ready = " << (result.summary.estimator_ready ? "true" : "false")
      << '\n'
      << "omega_clamped = " << (result.summary.omega_clamped ? "true" : "false")
      << '\n';
}

}  // namespace bpsim
