#include "delaywave/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "delaywave/errors.hpp"

namespace delaywave {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Stable: return "stable";
    case Classification::Unstable: return "unstable";
    case Classification::Diverged: return "diverged";
    case Classification::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> energies,
                        std::pair<double, double> window) {
  if (times.size() != energies.size()) throw Error("fit: times and energies differ in length");
  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window.first || times[i] > window.second) continue;
    if (!(energies[i] > 0.0)) {
      throw NonPositiveEnergy("fit: energy " + std::to_string(energies[i]) + " at t = " +
                              std::to_string(times[i]) + " is not positive");
    }
    if (energies[i] <= kEnergyFloor) continue;
    ts.push_back(times[i]);
    ls.push_back(std::log(energies[i]));
  }
  if (ts.size() < 2) throw Error("fit: fewer than two usable samples in the window");

  const double count = static_cast<double>(ts.size());
  double t_mean = 0.0, l_mean = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    t_mean += ts[i];
    l_mean += ls[i];
  }
  t_mean /= count;
  l_mean /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxy += (ts[i] - t_mean) * (ls[i] - l_mean);
    sxx += (ts[i] - t_mean) * (ts[i] - t_mean);
  }
  if (sxx == 0.0) throw Error("fit: all samples share one time");
  const double slope = sxy / sxx;
  return DecayFit{-slope, l_mean - slope * t_mean, ts.size()};
}

Verdict classify(std::span<const EnergyBreakdown> series, double dt, double horizon,
                 const ClassifyOptions& options) {
  Verdict verdict;
  verdict.window = {options.window_start * horizon, horizon};
  if (series.empty()) return verdict;

  const bool finite = std::all_of(series.begin(), series.end(),
                                  [](const auto& e) { return std::isfinite(e.e_total); });
  if (!finite) {
    verdict.classification = Classification::Diverged;
    return verdict;
  }
  const double e0 = series.front().e_total;
  if (!(e0 > 0.0)) return verdict;

  double peak = e0;
  for (const auto& e : series) peak = std::max(peak, e.e_total);
  if (peak > options.instability_factor * e0) {
    verdict.classification = Classification::Unstable;
    return verdict;
  }

  std::vector<double> times(series.size()), energies(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    times[i] = static_cast<double>(series[i].n) * dt;
    energies[i] = series[i].e_total;
  }
  DecayFit fit;
  try {
    fit = fit_decay_rate(times, energies, verdict.window);
  } catch (const Error&) {
    return verdict;
  }
  if (fit.rate < -options.rate_deadband) {
    verdict.classification = Classification::Unstable;
  } else if (fit.rate > options.rate_deadband && peak <= e0 * (1.0 + options.growth_tolerance)) {
    verdict.classification = Classification::Stable;
    verdict.fit = fit;
  }
  return verdict;
}

}  // namespace delaywave
