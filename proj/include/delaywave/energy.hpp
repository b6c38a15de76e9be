#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "delaywave/config.hpp"
#include "delaywave/stepper.hpp"

namespace delaywave {

/// The five parts of the discrete energy at level n.
///
/// Sums run over nodes without a dx factor. The potential parts pair the
/// gradients of levels n and n + 1 and may be negative.
struct EnergyBreakdown {
  std::int64_t n = 0;
  double e_kin_u = 0.0;
  double e_pot_u = 0.0;
  double e_kin_y = 0.0;
  double e_pot_y = 0.0;
  double e_delay = 0.0;
  double e_total = 0.0;
};

/// Energy change across one step and the value the scheme predicts for it.
struct StepAudit {
  std::int64_t n = 0;            ///< transition E^{n-1} -> E^n
  double delta = 0.0;            ///< E^n - E^{n-1}
  double identity_rhs = 0.0;     ///< exact algebraic value of delta
  double bound_rhs = 0.0;        ///< upper bound, <= 0 under the dissipation conditions
  double identity_residual = 0.0;
  double scale = 1.0;            ///< max(1, |E^{n-1}|)
  bool violation = false;
};

/// Everything the energy and audit formulas read from the configuration.
struct EnergyModel {
  std::vector<double> a;  ///< damping profile at the nodes
  double dt = 0.0;
  double dx = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double xi = 0.0;
  double tau = 1.0;
  std::int64_t delay_steps = 0;
  bool dissipation_guaranteed = false;
  double tolerance = 1e-10;

  static EnergyModel from(const SimulationConfig& cfg, const Grid& grid);
};

/// E^n for n = ahead.n - 1; `ahead` carries levels n + 1 and n, and the
/// history must still hold the levels the delay term sums over.
EnergyBreakdown energy_at(const FieldState& ahead, const DelayHistory& history,
                          const EnergyModel& model);

/// Checks E^n - E^{n-1} against the identity and, when the dissipation
/// conditions hold, against the decay bound. V and W are the centered
/// velocity (u^{n+1} - u^{n-1}) / (2 dt) and the delayed source of that step.
StepAudit audit_step(const EnergyBreakdown& previous, const EnergyBreakdown& current,
                     std::span<const double> velocity, std::span<const double> delayed,
                     const EnergyModel& model);

/// (u^{n+1} - u^{n-1}) / (2 dt) at every node, read from the history.
std::vector<double> centered_velocity(const DelayHistory& history, std::int64_t n);

}  // namespace delaywave
