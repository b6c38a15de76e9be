#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "delaywave/config.hpp"
#include "delaywave/energy.hpp"

namespace delaywave {

enum class Classification { Stable, Unstable, Diverged, Inconclusive };

std::string_view to_string(Classification c);

/// Thresholds for calling a trajectory stable or unstable.
struct ClassifyOptions {
  double window_start = 0.5;        ///< fit window is [window_start * T, T]
  double instability_factor = 10.0; ///< E > factor * E^0 means unstable
  double rate_deadband = 1e-6;      ///< |rate| below this is no trend
  double growth_tolerance = 1e-9;   ///< stable requires max E <= E^0 (1 + tol)
};

struct DecayFit {
  double rate = 0.0;       ///< negated slope of ln E against t
  double intercept = 0.0;  ///< ln E at t = 0
  std::size_t samples = 0;
};

/// Energies at or below this are treated as fully decayed and left out of fits.
inline constexpr double kEnergyFloor = 1e-300;

/// Least squares fit of ln E against t over samples with t in [lo, hi].
/// Throws NonPositiveEnergy if a sample in the window is <= 0, and Error if
/// fewer than two usable samples remain.
DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> energies,
                        std::pair<double, double> window);

struct Verdict {
  Classification classification = Classification::Inconclusive;
  std::optional<DecayFit> fit;  ///< set only when stable
  std::pair<double, double> window{0.0, 0.0};
};

/// `series` holds E^0, E^1, ... at t = n dt; the fit window ends at `horizon`.
Verdict classify(std::span<const EnergyBreakdown> series, double dt, double horizon,
                 const ClassifyOptions& options = {});

struct Snapshot {
  std::int64_t n = 0;
  std::vector<double> u, y;
};

struct RunReport {
  SimulationConfig config;
  ConditionReport conditions;
  std::vector<double> x;
  std::vector<EnergyBreakdown> energies;  ///< E^0 .. E^{M-1}
  std::vector<StepAudit> audits;          ///< transitions 1 .. M-1
  Classification classification = Classification::Inconclusive;
  std::optional<double> fitted_rate;
  std::optional<double> fitted_intercept;
  std::pair<double, double> fit_window{0.0, 0.0};
  double max_violation = 0.0;  ///< worst audit excess, relative to max(1, |E^{n-1}|)
  std::size_t violation_count = 0;
  std::int64_t last_level = 0;  ///< highest field level produced
  std::vector<Snapshot> snapshots;
  std::vector<std::string> warnings;
};

}  // namespace delaywave
