#include "bpsim/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bpsim/polynomial.hpp"

namespace bpsim {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, const std::string& origin, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    fail(origin, line, "expected a number, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v, const std::string& origin, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(origin, line, "expected true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, const std::string& origin,
                               int line) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(parse_double(trim(cell), origin, line));
  return out;
}

}  // namespace

ScenarioValidationError::ScenarioValidationError(std::vector<std::string> v)
    : std::runtime_error([&v] {
        std::string msg = "invalid scenario:";
        for (const auto& s : v) msg += "\n  - " + s;
        return msg;
      }()),
      violations(std::move(v)) {}

Scenario parse_scenario(std::istream& in, const std::string& origin) {
  Scenario sc;
  bool theta0_set = false;
  bool imf_set = false;  // controller internal_model_freq given explicitly
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "plant" && section != "disturbance" && section != "controller" &&
          section != "estimator" && section != "switching" && section != "sim")
        fail(origin, lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto num = [&] { return parse_double(val, origin, lineno); };
    auto flag = [&] { return parse_bool(val, origin, lineno); };
    auto list = [&] { return parse_list(val, origin, lineno); };

    if (section.empty()) {
      if (key == "name") sc.name = val;
      else if (key == "description") sc.description = val;
      else if (key == "mode") {
        if (val == "open_loop") sc.mode = RunMode::kOpenLoopEstimation;
        else if (val == "closed_loop") sc.mode = RunMode::kClosedLoop;
        else fail(origin, lineno, "mode must be open_loop or closed_loop");
      } else fail(origin, lineno, "unknown top-level key '" + key + "'");
    } else if (section == "plant") {
      if (key == "model") {
        if (val == "linear") sc.plant_model = PlantModel::kLinear;
        else if (val == "nonlinear") sc.plant_model = PlantModel::kNonlinear;
        else fail(origin, lineno, "model must be linear or nonlinear");
      } else if (key == "profile") {
        if (val != "lab") fail(origin, lineno, "unknown plant profile '" + val + "'");
        sc.plant = BallPlateParams::lab();
      } else if (key == "drive_sign") sc.drive_sign = num();
      else if (key == "m_b") sc.plant.m_b = num();
      else if (key == "r_b") sc.plant.r_b = num();
      else if (key == "I_b") sc.plant.I_b = num();
      else if (key == "g") sc.plant.g = num();
      else if (key == "L") sc.plant.L = num();
      else if (key == "d") sc.plant.d = num();
      else if (key == "K_m") sc.plant.K_m = num();
      else if (key == "T_m") sc.plant.T_m = num();
      else fail(origin, lineno, "unknown [plant] key '" + key + "'");
    } else if (section == "disturbance") {
      if (key == "amplitude") sc.disturbance.amplitude = num();
      else if (key == "frequency") sc.disturbance.frequency = num();
      else if (key == "phase") sc.disturbance.phase = num();
      else if (key == "offset") sc.disturbance.offset = num();
      else fail(origin, lineno, "unknown [disturbance] key '" + key + "'");
    } else if (section == "controller") {
      if (key == "k") sc.controller.k = num();
      else if (key == "sigma") sc.controller.sigma = num();
      else if (key == "observer_gains") sc.controller.observer_gains = list();
      else if (key == "alpha") sc.controller.alpha = Polynomial(list());
      else if (key == "rho") sc.controller.rho = static_cast<int>(num());
      else if (key == "internal_model_freq") {
        sc.controller.internal_model_freq = num();
        imf_set = true;
      } else if (key == "filter_form") {
        if (val == "integrator_cube") sc.controller.filter_form = FilterForm::kIntegratorCube;
        else if (val == "resonator_square") sc.controller.filter_form = FilterForm::kResonatorSquare;
        else if (val == "integrator_square") sc.controller.filter_form = FilterForm::kIntegratorSquare;
        else fail(origin, lineno, "unknown filter_form '" + val + "'");
      } else fail(origin, lineno, "unknown [controller] key '" + key + "'");
    } else if (section == "estimator") {
      if (key == "K") sc.estimator.gain_K = num();
      else if (key == "tau") sc.estimator.tau = num();
      else if (key == "theta0") {
        sc.estimator.theta0 = num();
        theta0_set = true;
      } else if (key == "warmup") sc.estimator.warmup = num();
      else if (key == "w_threshold") sc.estimator.w_threshold = num();
      else if (key == "omega_min") sc.estimator.omega_min = num();
      else if (key == "omega_max") sc.estimator.omega_max = num();
      else fail(origin, lineno, "unknown [estimator] key '" + key + "'");
    } else if (section == "switching") {
      if (key == "enabled") sc.switching_enabled = flag();
      else if (key == "dwell_window") sc.switching.dwell_window = num();
      else if (key == "stability_tol") sc.switching.stability_tol = num();
      else if (key == "t_min_switch") sc.switching.t_min_switch = num();
      else fail(origin, lineno, "unknown [switching] key '" + key + "'");
    } else if (section == "sim") {
      if (key == "step") sc.sim.step = num();
      else if (key == "duration") sc.sim.duration = num();
      else if (key == "noise_std") sc.sim.noise_std = num();
      else if (key == "seed") sc.sim.rng_seed = static_cast<std::uint64_t>(num());
      else if (key == "strict_delay") sc.sim.strict_delay = flag();
      else if (key == "crossfade_steps") sc.crossfade_steps = num();
      else fail(origin, lineno, "unknown [sim] key '" + key + "'");
    }
  }

  // Derived defaults: theta0 = cos(omega_min tau) (the pre-switch guess),
  // omega_bar(0) = omega_min, and the controller mirrors the estimator's
  // frequency bounds so retune clamping and recovery agree.
  if (!theta0_set)
    sc.estimator.theta0 = std::cos(sc.estimator.omega_min * sc.estimator.tau);
  if (!imf_set) sc.controller.internal_model_freq = sc.estimator.omega_min;
  sc.controller.omega_min = sc.estimator.omega_min;
  sc.controller.omega_max = sc.estimator.omega_max;
  return sc;
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  return parse_scenario(in, origin);
}

std::vector<std::string> Scenario::validate() const {
  std::vector<std::string> v;
  auto check = [&v](auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      v.emplace_back(e.what());
    }
  };
  check([&] { plant.validate(); });
  check([&] { estimator.validate(); });
  check([&] { switching.validate(); });
  if (disturbance.amplitude < 0.0)
    v.emplace_back("disturbance: amplitude must be >= 0");
  if (!(sim.step > 0.0)) v.emplace_back("sim: step must be positive");
  if (!(sim.duration > 0.0)) v.emplace_back("sim: duration must be positive");
  if (sim.noise_std < 0.0) v.emplace_back("sim: noise_std must be >= 0");
  if (crossfade_steps < 0.0) v.emplace_back("sim: crossfade_steps must be >= 0");
  if (sim.strict_delay && sim.step > 0.0) {
    const double ratio = estimator.tau / sim.step;
    if (std::abs(ratio - std::llround(ratio)) > 1e-9 * std::max(1.0, ratio))
      v.emplace_back("sim: strict delay mode requires tau to be an integer "
                     "multiple of step");
  }
  if (disturbance.frequency <= estimator.omega_min ||
      disturbance.frequency >= estimator.omega_max)
    v.emplace_back("disturbance: frequency must lie strictly inside "
                   "(omega_min, omega_max)");

  if (mode == RunMode::kClosedLoop) {
    check([&] { controller.validate(); });
    if (switching_enabled &&
        std::abs(controller.internal_model_freq - estimator.omega_min) >
            1e-12 * std::max(1.0, estimator.omega_min))
      v.emplace_back("controller: pre-switch internal_model_freq must equal "
                     "estimator omega_min");
    // Design gate: the closed-loop characteristic polynomial must be Hurwitz
    // at the initial internal-model frequency. Only the default filter family
    // matches the gamma formula, so the gate applies there.
    if (controller.filter_form == FilterForm::kIntegratorCube) {
      try {
        const TransferFunction tf = linearized_tf(plant);
        const Polynomial gamma =
            closed_loop_char_poly(tf.den, tf.num, controller.k,
                                  controller.alpha,
                                  controller.internal_model_freq);
        if (!is_hurwitz(gamma))
          v.emplace_back("design: closed-loop characteristic polynomial "
                         "gamma(p) is not Hurwitz at the initial "
                         "internal-model frequency");
      } catch (const std::exception& e) {
        v.emplace_back(std::string("design: gamma(p) check failed: ") + e.what());
      }
    }
  }
  return v;
}

const std::map<std::string, std::string>& bundled_scenarios() {
  static const std::map<std::string, std::string> kScenarios = {
#include "scenario_data.inc"
  };
  return kScenarios;
}

Scenario load_scenario(const std::string& path_or_name) {
  Scenario sc;
  const auto& bundled = bundled_scenarios();
  if (const auto it = bundled.find(path_or_name); it != bundled.end()) {
    sc = parse_scenario_text(it->second, path_or_name);
  } else {
    std::ifstream in(path_or_name);
    if (!in)
      throw std::runtime_error("cannot open scenario file: " + path_or_name);
    sc = parse_scenario(in, path_or_name);
  }
  if (auto violations = sc.validate(); !violations.empty())
    throw ScenarioValidationError(std::move(violations));
  return sc;
}

}  // namespace bpsim
