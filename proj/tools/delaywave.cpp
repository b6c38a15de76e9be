// Command-line driver: run a scenario, sweep mu2, or check a config.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "delaywave/errors.hpp"
#include "delaywave/io.hpp"
#include "delaywave/simulation.hpp"

namespace {

using namespace delaywave;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitBlowup = 2;

struct Source {
  std::string preset;
  std::string config;
};

ScenarioPreset resolve(const Source& src) {
  if (!src.preset.empty()) {
    auto preset = find_preset(src.preset);
    if (!preset) {
      std::string known;
      for (const auto& n : preset_names()) known += " " + n;
      throw ConfigError("unknown preset \"" + src.preset + "\"; known:" + known);
    }
    return *preset;
  }
  return ScenarioPreset{src.config, load_config(src.config), {}};
}

unsigned sweep_threads() {
  const char* env = std::getenv("DELAYWAVE_THREADS");
  if (!env || !*env) return 0;
  try {
    return static_cast<unsigned>(std::stoul(env));
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring DELAYWAVE_THREADS=" << env << '\n';
    return 0;
  }
}

void print_conditions(const ConditionReport& r) {
  std::cout << "mu_condition_holds=" << (r.mu_condition_holds ? "true" : "false") << '\n'
            << "xi_interval="
            << (r.xi_interval ? "(" + format_real(r.xi_interval->first) + ", " +
                                    format_real(r.xi_interval->second) + ")"
                              : std::string("empty"))
            << '\n'
            << "xi_admissible=" << (r.xi_admissible ? "true" : "false") << '\n'
            << "coupling_inside_damping=" << (r.coupling_inside_damping ? "true" : "false")
            << '\n'
            << "cfl=" << format_real(r.cfl) << '\n'
            << "dx=" << format_real(r.dx) << '\n'
            << "delay_steps=" << r.delay_steps << '\n'
            << "total_steps=" << r.total_steps << '\n';
}

void print_warnings(const RunReport& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  if (!r.conditions.dissipation_guaranteed()) {
    std::cerr << "warning: mu2 < mu1 with admissible xi does not hold; energy decay is not "
                 "guaranteed\n";
  }
}

void print_summary(const RunReport& r) {
  std::cout << "classification=" << to_string(r.classification) << '\n'
            << "fitted_rate=" << (r.fitted_rate ? format_real(*r.fitted_rate) : "none") << '\n'
            << "E0=" << format_real(r.energies.front().e_total) << '\n'
            << "E_final=" << format_real(r.energies.back().e_total) << '\n'
            << "max_violation=" << format_real(r.max_violation) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled wave equations with delayed damping: explicit finite differences"};
  app.require_subcommand(1);

  ClassifyOptions classify;
  auto add_classify_flags = [&](CLI::App* cmd) {
    cmd->add_option("--fit-window-start", classify.window_start,
                    "Fit window starts at this fraction of T")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--instability-factor", classify.instability_factor,
                    "Energy above factor * E0 counts as unstable");
    cmd->add_option("--rate-deadband", classify.rate_deadband,
                    "Fitted rates within +-deadband are inconclusive");
  };

  Source run_src;
  std::string run_out = "out";
  std::int64_t run_snapshots = -1;
  bool run_plot = false;
  bool expect_stable = false;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario and write its outputs");
  auto* run_preset = run_cmd->add_option("--preset", run_src.preset, "Named scenario");
  auto* run_config = run_cmd->add_option("--config", run_src.config, "JSON config file")
                         ->check(CLI::ExistingFile);
  run_preset->excludes(run_config);
  run_cmd->add_option("--out", run_out, "Output directory");
  run_cmd->add_option("--snapshots", run_snapshots, "Field snapshot stride (0 = none)")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_flag("--plot", run_plot, "Also write energy.svg");
  run_cmd->add_flag("--expect-stable", expect_stable,
                    "Exit with status 2 if the run blows up");
  add_classify_flags(run_cmd);

  Source sweep_src;
  std::vector<double> mu2_list;
  std::string sweep_out = "out";
  bool sweep_plot = false;
  bool pin_xi = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run one scenario per mu2 value");
  auto* sweep_preset = sweep_cmd->add_option("--preset", sweep_src.preset, "Named scenario");
  auto* sweep_config = sweep_cmd->add_option("--config", sweep_src.config, "JSON config file")
                           ->check(CLI::ExistingFile);
  sweep_preset->excludes(sweep_config);
  sweep_cmd->add_option("--mu2", mu2_list, "Comma-separated mu2 values")->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "Output directory");
  sweep_cmd->add_flag("--plot", sweep_plot, "Also write energy.svg");
  sweep_cmd->add_flag("--pin-xi", pin_xi, "Keep the config's xi instead of mu1 * tau");
  add_classify_flags(sweep_cmd);

  Source validate_src;
  auto* validate_cmd = app.add_subcommand("validate", "Print the condition report of a config");
  auto* validate_preset =
      validate_cmd->add_option("--preset", validate_src.preset, "Named scenario");
  auto* validate_config =
      validate_cmd->add_option("--config", validate_src.config, "JSON config file")
          ->check(CLI::ExistingFile);
  validate_preset->excludes(validate_config);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      if (run_src.preset.empty() && run_src.config.empty()) {
        std::cerr << "run: one of --preset or --config is required\n";
        return kExitInvalid;
      }
      auto scenario = resolve(run_src);
      if (!scenario.mu2_values.empty()) {
        std::cerr << "run: preset " << scenario.name << " is a sweep; use the sweep command\n";
        return kExitInvalid;
      }
      if (run_snapshots >= 0) scenario.config.snapshot_stride = run_snapshots;
      const auto report = run(scenario.config, RunOptions{classify});
      print_warnings(report);
      write_outputs(report, run_out, run_plot);
      print_summary(report);
      if (expect_stable && report.classification == Classification::Diverged) return kExitBlowup;
      return kExitOk;
    }

    if (*sweep_cmd) {
      if (sweep_src.preset.empty() && sweep_src.config.empty()) {
        std::cerr << "sweep: one of --preset or --config is required\n";
        return kExitInvalid;
      }
      const auto scenario = resolve(sweep_src);
      const auto values = mu2_list.empty() ? scenario.mu2_values : mu2_list;
      if (values.empty()) {
        std::cerr << "sweep: no mu2 values (pass --mu2)\n";
        return kExitInvalid;
      }
      SweepOptions options;
      options.pin_xi = pin_xi;
      options.threads = sweep_threads();
      options.run.classify = classify;
      const auto reports = sweep_mu2(scenario.config, values, options);
      write_sweep_outputs(reports, sweep_out, sweep_plot);
      for (const auto& r : reports) {
        std::cout << "mu2=" << format_real(r.config.mu2) << " xi=" << format_real(r.config.xi)
                  << " classification=" << to_string(r.classification) << " fitted_rate="
                  << (r.fitted_rate ? format_real(*r.fitted_rate) : "none") << '\n';
      }
      return kExitOk;
    }

    if (*validate_cmd) {
      if (validate_src.preset.empty() && validate_src.config.empty()) {
        std::cerr << "validate: one of --preset or --config is required\n";
        return kExitInvalid;
      }
      const auto scenario = resolve(validate_src);
      print_conditions(validate(scenario.config));
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}
