#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "delaywave/analysis.hpp"
#include "delaywave/config.hpp"

namespace delaywave {

/// %.17g: round-trips every double and prints identically everywhere.
std::string format_real(double value);

// Config documents. Unknown keys raise ConfigError.
SimulationConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const SimulationConfig& cfg);
SimulationConfig load_config(const std::filesystem::path& path);

nlohmann::json conditions_to_json(const ConditionReport& report);
nlohmann::json summary_json(const RunReport& report);

/// Named reproduction of a published experiment.
struct ScenarioPreset {
  std::string name;
  SimulationConfig config;
  std::vector<double> mu2_values;  ///< non-empty only for sweep presets
};

/// mu1 = 1, mu2 = 0.5, tau = 2, xi = 2, dt = 0.01, T = 500,
/// a = 1 on [0.1, 0.2] u [0.8, 0.9], b = 1 on [0.1, 0.2], polynomial data.
SimulationConfig paper_stable(int N = 9);
/// paper_stable with mu2 = 1.2 and xi = 0.
SimulationConfig paper_unstable(int N = 9);
std::vector<double> paper_sweep_values();

std::optional<ScenarioPreset> find_preset(std::string_view name);
std::vector<std::string> preset_names();

void write_energy_csv(std::ostream& out, const RunReport& report);
void write_snapshot_csv(std::ostream& out, const std::vector<double>& x, const Snapshot& snap);
void write_sweep_summary_csv(std::ostream& out, std::span<const RunReport> reports);

struct EnergyCurve {
  std::string label;
  std::vector<double> t;
  std::vector<double> energy;
};

EnergyCurve energy_curve(const RunReport& report, std::string label);

/// Static plot of log10 E against t, one polyline per curve.
std::string energy_svg(std::span<const EnergyCurve> curves);

/// energy.csv, summary.json, fields_step<NNNNNN>.csv per snapshot and
/// optionally energy.svg. Returns the written paths in that order.
std::vector<std::filesystem::path> write_outputs(const RunReport& report,
                                                 const std::filesystem::path& dir,
                                                 bool plot = false);

/// One run directory per report plus sweep_summary.csv (and energy.svg
/// with every curve when plotting).
std::vector<std::filesystem::path> write_sweep_outputs(std::span<const RunReport> reports,
                                                       const std::filesystem::path& dir,
                                                       bool plot = false);

}  // namespace delaywave
