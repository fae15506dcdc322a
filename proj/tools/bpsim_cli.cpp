// bpsim: scenario-driven simulation front end.
//
// Exit codes: 0 success, 2 validation/parse failure, 3 divergence,
// 4 I/O error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bpsim/plot.hpp"
#include "bpsim/scenario.hpp"
#include "bpsim/simcore.hpp"

namespace fs = std::filesystem;
using namespace bpsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

std::string default_out_dir() {
  if (const char* env = std::getenv("BPSIM_OUT_DIR")) return env;
  return "bpsim_out";
}

struct LoadOutcome {
  std::optional<Scenario> scenario;
  int exit_code = kExitOk;
};

LoadOutcome load_or_report(const std::string& name) {
  try {
    return {load_scenario(name), kExitOk};
  } catch (const ScenarioValidationError& e) {
    std::cerr << e.what() << '\n';
    return {std::nullopt, kExitValidation};
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return {std::nullopt, kExitValidation};
  }
}

// Runs one scenario and writes trace.csv, summary.txt, and the plot set
// into dir. Partial outputs are retained on divergence.
int run_into(const Scenario& sc, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << dir << ": " << ec.message() << '\n';
    return kExitIo;
  }
  const RunResult result = run_scenario(sc);
  try {
    {
      std::ofstream out(dir / "trace.csv");
      if (!out) throw std::runtime_error("cannot write trace.csv");
      result.trace.write_csv(out);
    }
    {
      std::ofstream out(dir / "summary.txt");
      if (!out) throw std::runtime_error("cannot write summary.txt");
      write_summary(out, sc, result);
    }
    write_standard_plots(dir.string(), sc, result);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  std::ostringstream summary;
  write_summary(summary, sc, result);
  std::cout << summary.str();
  std::cout << "outputs written to " << dir.string() << '\n';
  if (result.status != RunStatus::kOk) {
    std::cerr << "error: " << result.message << '\n';
    return kExitDivergence;
  }
  return kExitOk;
}

bool apply_sweep_param(Scenario& sc, const std::string& param, double value) {
  if (param == "K") sc.estimator.gain_K = value;
  else if (param == "tau") sc.estimator.tau = value;
  else if (param == "sigma") sc.controller.sigma = value;
  else if (param == "k") sc.controller.k = value;
  else if (param == "omega") sc.disturbance.frequency = value;
  else return false;
  return true;
}

std::string value_tag(double v) {
  std::ostringstream s;
  s << v;
  std::string tag = s.str();
  for (char& c : tag)
    if (c == '.' || c == '-' || c == '+') c = '_';
  return tag;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ball-and-plate disturbance-rejection simulator"};
  app.require_subcommand(1);

  std::string scenario_name, out_dir = default_out_dir();
  std::optional<std::uint64_t> seed;

  auto* run_cmd = app.add_subcommand("run", "run a scenario");
  run_cmd->add_option("scenario", scenario_name,
                      "bundled scenario name or path to a .scn file")
      ->required();
  run_cmd->add_option("--out", out_dir, "output directory (default $BPSIM_OUT_DIR)");
  run_cmd->add_option("--seed", seed, "override the RNG seed");

  std::string param;
  std::vector<double> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a one-parameter sweep");
  sweep_cmd->add_option("scenario", scenario_name)->required();
  sweep_cmd->add_option("--param", param, "one of K, tau, sigma, k, omega")
      ->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--out", out_dir, "output directory");

  auto* validate_cmd = app.add_subcommand("validate", "validate a scenario");
  validate_cmd->add_option("scenario", scenario_name)->required();

  auto* list_cmd = app.add_subcommand("list-scenarios", "list bundled scenarios");

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    for (const auto& [name, text] : bundled_scenarios()) {
      const Scenario sc = parse_scenario_text(text, name);
      std::cout << name << "  -  " << sc.description << '\n';
    }
    return kExitOk;
  }

  if (validate_cmd->parsed()) {
    auto [sc, code] = load_or_report(scenario_name);
    if (!sc) return code;
    std::cout << "ok: " << sc->name << " is valid\n";
    return kExitOk;
  }

  if (run_cmd->parsed()) {
    auto [sc, code] = load_or_report(scenario_name);
    if (!sc) return code;
    if (seed) sc->sim.rng_seed = *seed;
    return run_into(*sc, fs::path(out_dir) / sc->name);
  }

  // sweep: per-value failures are recorded and the sweep continues; the
  // exit code is the most severe per-run code.
  auto [base, code] = load_or_report(scenario_name);
  if (!base) return code;
  if (values.empty()) {
    std::cerr << "error: sweep needs at least one value\n";
    return kExitValidation;
  }

  std::error_code ec;
  const fs::path sweep_dir = fs::path(out_dir) / (base->name + "_sweep_" + param);
  fs::create_directories(sweep_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << sweep_dir << '\n';
    return kExitIo;
  }
  std::ofstream agg(sweep_dir / "sweep.csv");
  if (!agg) {
    std::cerr << "error: cannot write sweep.csv\n";
    return kExitIo;
  }
  agg << "param,value,status,recovered_omega,switch_time,settling_time_1pct,"
         "pre_switch_peak_y,peak_abs_y,peak_abs_u,final_abs_y\n";

  int worst = kExitOk;
  for (double v : values) {
    Scenario sc = *base;
    if (!apply_sweep_param(sc, param, v)) {
      std::cerr << "error: unknown sweep parameter '" << param << "'\n";
      return kExitValidation;
    }
    sc.name = base->name + "_" + param + "_" + value_tag(v);
    std::string status;
    RunSummary summary;
    if (auto violations = sc.validate(); !violations.empty()) {
      status = "invalid";
      std::cerr << sc.name << ": " << ScenarioValidationError(violations).what()
                << '\n';
      worst = std::max(worst, kExitValidation);
    } else {
      const int rc = run_into(sc, sweep_dir / sc.name);
      worst = std::max(worst, rc);
      std::ifstream in(sweep_dir / sc.name / "summary.txt");
      std::string line;
      status = rc == kExitOk ? "ok" : (rc == kExitIo ? "io_error" : "failed");
      // Re-read the authoritative numbers from the run's own summary file.
      summary = RunSummary{};
      while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 3);
        auto opt = [&]() -> std::optional<double> {
          if (val == "none") return std::nullopt;
          return std::strtod(val.c_str(), nullptr);
        };
        if (key == "recovered_omega") summary.omega_hat = opt();
        else if (key == "switch_time") summary.switch_time = opt();
        else if (key == "settling_time_1pct") summary.settling_time = opt();
        else if (key == "pre_switch_peak_y")
          summary.pre_switch_peak_y = std::strtod(val.c_str(), nullptr);
        else if (key == "peak_abs_y")
          summary.peak_abs_y = std::strtod(val.c_str(), nullptr);
        else if (key == "peak_abs_u")
          summary.peak_abs_u = std::strtod(val.c_str(), nullptr);
        else if (key == "final_abs_y")
          summary.final_abs_y = std::strtod(val.c_str(), nullptr);
        else if (key == "status" && status == "ok") status = val;
      }
    }
    auto cell = [](const std::optional<double>& o) {
      if (!o) return std::string("none");
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", *o);
      return std::string(buf);
    };
    agg << param << ',' << cell(v) << ',' << status << ','
        << cell(summary.omega_hat) << ',' << cell(summary.switch_time) << ','
        << cell(summary.settling_time) << ','
        << cell(summary.pre_switch_peak_y) << ',' << cell(summary.peak_abs_y)
        << ',' << cell(summary.peak_abs_u) << ',' << cell(summary.final_abs_y)
        << '\n';
  }
  std::cout << "sweep outputs written to " << sweep_dir.string() << '\n';
  return worst;
}
