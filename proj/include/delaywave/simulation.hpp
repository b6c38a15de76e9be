#pragma once

#include <span>
#include <vector>

#include "delaywave/analysis.hpp"
#include "delaywave/config.hpp"

namespace delaywave {

struct RunOptions {
  ClassifyOptions classify;
};

/// Initializes, takes M - 1 steps and audits the energy after each one.
/// A non-finite field stops the run and marks it diverged.
RunReport run(const SimulationConfig& cfg, const RunOptions& options = {});

struct SweepOptions {
  bool pin_xi = false;   ///< keep the base xi instead of using mu1 * tau
  unsigned threads = 0;  ///< 0 runs sequentially
  RunOptions run;
};

/// One independent run per mu2 value, returned in input order.
std::vector<RunReport> sweep_mu2(const SimulationConfig& base, std::span<const double> mu2_values,
                                 const SweepOptions& options = {});

}  // namespace delaywave
