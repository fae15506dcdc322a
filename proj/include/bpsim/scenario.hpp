#ifndef BPSIM_SCENARIO_HPP_
#define BPSIM_SCENARIO_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bpsim/controller.hpp"
#include "bpsim/estimator.hpp"
#include "bpsim/plants.hpp"
#include "bpsim/signals.hpp"
#include "bpsim/switching.hpp"

namespace bpsim {

enum class RunMode { kOpenLoopEstimation, kClosedLoop };
enum class PlantModel { kLinear, kNonlinear };

struct SimConfig {
  double step = 1e-3;      // s
  double duration = 30.0;  // s
  double noise_std = 0.0;  // measurement-noise standard deviation
  std::uint64_t rng_seed = 1;
  bool strict_delay = true;  // require tau to be an integer multiple of step
};

/// Declarative experiment description bundling every module configuration.
struct Scenario {
  std::string name;
  std::string description;
  RunMode mode = RunMode::kClosedLoop;
  PlantModel plant_model = PlantModel::kLinear;
  BallPlateParams plant;
  double drive_sign = 1.0;  // servo actuation direction, nonlinear model only
  HarmonicDisturbance disturbance;
  CompensatorConfig controller;
  EstimatorConfig estimator;
  SwitchingConfig switching;
  bool switching_enabled = true;
  double crossfade_steps = 10.0;  // retune fade window, in simulation steps
  SimConfig sim;

  // Every violated invariant, empty when the scenario is valid.
  std::vector<std::string> validate() const;
};

// Parses the nested-section key-value scenario format. Throws
// std::runtime_error with a line reference on parse failures; does not run
// validate().
Scenario parse_scenario(std::istream& in, const std::string& origin = "<stream>");
Scenario parse_scenario_text(const std::string& text, const std::string& origin);

// Loads either a bundled scenario name or a file path, then validates.
// Throws std::runtime_error (parse) or ScenarioValidationError.
Scenario load_scenario(const std::string& path_or_name);

struct ScenarioValidationError : std::runtime_error {
  explicit ScenarioValidationError(std::vector<std::string> violations);
  std::vector<std::string> violations;
};

// Bundled experiment definitions: fig3a, fig3b, fig3c (open-loop
// estimation), fig4 and fig5 (closed loop with switching).
const std::map<std::string, std::string>& bundled_scenarios();

}  // namespace bpsim

#endif  // BPSIM_SCENARIO_HPP_
