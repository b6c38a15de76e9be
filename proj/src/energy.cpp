#include "delaywave/energy.hpp"

#include <algorithm>
#include <cmath>

namespace delaywave {

namespace {

double kinetic(const std::vector<double>& now, const std::vector<double>& next, double dt) {
  double sum = 0.0;
  for (std::size_t j = 1; j + 1 < now.size(); ++j) {
    const double v = (next[j] - now[j]) / dt;
    sum += v * v;
  }
  return 0.5 * sum;
}

double potential(const std::vector<double>& now, const std::vector<double>& next, double dx) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < now.size(); ++j) {
    sum += ((now[j + 1] - now[j]) / dx) * ((next[j + 1] - next[j]) / dx);
  }
  return 0.5 * sum;
}

}  // namespace

EnergyModel EnergyModel::from(const SimulationConfig& cfg, const Grid& grid) {
  EnergyModel m;
  m.a = sample_profile(cfg.a, grid);
  m.dt = grid.dt;
  m.dx = grid.dx;
  m.mu1 = cfg.mu1;
  m.mu2 = cfg.mu2;
  m.xi = cfg.xi;
  m.tau = cfg.tau;
  m.delay_steps = grid.delay_steps;
  m.dissipation_guaranteed = validate(cfg).dissipation_guaranteed();
  return m;
}

EnergyBreakdown energy_at(const FieldState& ahead, const DelayHistory& history,
                          const EnergyModel& model) {
  EnergyBreakdown e;
  e.n = ahead.n - 1;
  const auto n = e.n;
  const auto I = model.delay_steps;
  const double dt = model.dt;

  e.e_kin_u = kinetic(ahead.u_prev, ahead.u_curr, dt);
  e.e_pot_u = potential(ahead.u_prev, ahead.u_curr, model.dx);
  e.e_kin_y = kinetic(ahead.y_prev, ahead.y_curr, dt);
  e.e_pot_y = potential(ahead.y_prev, ahead.y_curr, model.dx);

  // Per-node inner sums over k, each accumulated in increasing k.
  const auto nodes = model.a.size();
  std::vector<double> inner(nodes, 0.0);
  auto add_velocities = [&](std::int64_t k_lo, std::int64_t k_hi, double weight) {
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
      const auto ahead = history.level(k + 1);
      const auto behind = history.level(k - 1);
      for (std::size_t j = 1; j + 1 < nodes; ++j) {
        if (model.a[j] == 0.0) continue;
        const double v = (ahead[j] - behind[j]) / (2.0 * dt);
        inner[j] += weight * v * v;
      }
    }
  };
  if (n < I) {
    for (std::int64_t k = n + 1; k <= I; ++k) {
      const auto f = history.prescribed(k);
      for (std::size_t j = 1; j + 1 < nodes; ++j) {
        if (model.a[j] != 0.0) inner[j] += dt * f[j] * f[j];
      }
    }
    add_velocities(1, n, dt);
  } else {
    add_velocities(n - I + 1, n, 1.0);
  }
  double delay = 0.0;
  for (std::size_t j = 1; j + 1 < nodes; ++j) {
    if (model.a[j] == 0.0) continue;
    delay += n < I ? model.a[j] * inner[j] : model.a[j] * dt * inner[j];
  }
  e.e_delay = 0.5 * (model.xi / model.tau) * delay;
  e.e_total = e.e_kin_u + e.e_pot_u + e.e_kin_y + e.e_pot_y + e.e_delay;
  return e;
}

StepAudit audit_step(const EnergyBreakdown& previous, const EnergyBreakdown& current,
                     std::span<const double> velocity, std::span<const double> delayed,
                     const EnergyModel& model) {
  double sum_vv = 0.0;
  double sum_wv = 0.0;
  double sum_ww = 0.0;
  for (std::size_t j = 1; j + 1 < model.a.size(); ++j) {
    const double a = model.a[j];
    sum_vv += a * velocity[j] * velocity[j];
    sum_wv += a * delayed[j] * velocity[j];
    sum_ww += a * delayed[j] * delayed[j];
  }
  const double dt = model.dt;
  const double w = model.xi / model.tau;

  StepAudit audit;
  audit.n = current.n;
  audit.delta = current.e_total - previous.e_total;
  audit.identity_rhs =
      -dt * model.mu1 * sum_vv - dt * model.mu2 * sum_wv + 0.5 * w * dt * (sum_vv - sum_ww);
  audit.bound_rhs = dt * (-model.mu1 + 0.5 * model.mu2 + 0.5 * w) * sum_vv +
                    dt * (0.5 * model.mu2 - 0.5 * w) * sum_ww;
  audit.identity_residual = std::abs(audit.delta - audit.identity_rhs);
  audit.scale = std::max(1.0, std::abs(previous.e_total));

  const double slack = model.tolerance * audit.scale;
  audit.violation = !(audit.identity_residual <= slack) ||
                    (model.dissipation_guaranteed && audit.delta > audit.bound_rhs + slack);
  return audit;
}

std::vector<double> centered_velocity(const DelayHistory& history, std::int64_t n) {
  const auto ahead = history.level(n + 1);
  const auto behind = history.level(n - 1);
  std::vector<double> v(history.nodes(), 0.0);
  for (std::size_t j = 1; j + 1 < v.size(); ++j) v[j] = (ahead[j] - behind[j]) / (2.0 * history.dt());
  return v;
}

}  // namespace delaywave
