#include "delaywave/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "delaywave/energy.hpp"
#include "delaywave/stepper.hpp"

namespace delaywave {

namespace {

double excess(const StepAudit& audit, bool guaranteed) {
  double worst = audit.identity_residual;
  if (guaranteed) worst = std::max(worst, audit.delta - audit.bound_rhs);
  return worst / audit.scale;
}

}  // namespace

RunReport run(const SimulationConfig& cfg, const RunOptions& options) {
  RunReport report;
  report.config = cfg;
  report.conditions = validate(cfg);
  const auto grid = make_grid(cfg);
  const auto coeff = build_coefficients(cfg, grid);
  const auto model = EnergyModel::from(cfg, grid);
  report.x = grid.x;

  auto [state, history, warnings] = initialize(cfg, grid);
  report.warnings = std::move(warnings);
  const auto stride = cfg.snapshot_stride;
  auto snapshot = [&](std::int64_t n, const std::vector<double>& u, const std::vector<double>& y) {
    if (stride > 0 && n % stride == 0) report.snapshots.push_back(Snapshot{n, u, y});
  };
  snapshot(0, state.u_prev, state.y_prev);
  snapshot(1, state.u_curr, state.y_curr);

  const auto M = grid.total_steps;
  report.energies.reserve(static_cast<std::size_t>(M));
  report.audits.reserve(static_cast<std::size_t>(M));
  report.energies.push_back(energy_at(state, history, model));
  report.last_level = 1;

  bool blew_up = !all_finite(state);
  for (std::int64_t n = 1; n < M && !blew_up; ++n) {
    const auto source = delayed_source(history, n);
    state = advance(state, source, coeff);
    history.push(state.u_curr);
    report.last_level = state.n;
    if (!all_finite(state)) {
      blew_up = true;
      break;
    }
    snapshot(state.n, state.u_curr, state.y_curr);

    const auto energy = energy_at(state, history, model);
    const auto velocity = centered_velocity(history, n);
    const auto audit =
        audit_step(report.energies.back(), energy, velocity, source, model);
    report.energies.push_back(energy);
    report.audits.push_back(audit);
    if (!std::isfinite(energy.e_total)) {
      blew_up = true;
      break;
    }
    if (audit.violation) ++report.violation_count;
    report.max_violation =
        std::max(report.max_violation, excess(audit, model.dissipation_guaranteed));
  }

  const auto verdict = classify(report.energies, cfg.dt, cfg.T, options.classify);
  report.classification = blew_up ? Classification::Diverged : verdict.classification;
  report.fit_window = verdict.window;
  if (report.classification == Classification::Stable && verdict.fit) {
    report.fitted_rate = verdict.fit->rate;
    report.fitted_intercept = verdict.fit->intercept;
  }
  return report;
}

std::vector<RunReport> sweep_mu2(const SimulationConfig& base, std::span<const double> mu2_values,
                                 const SweepOptions& options) {
  std::vector<SimulationConfig> configs;
  configs.reserve(mu2_values.size());
  for (double mu2 : mu2_values) {
    auto cfg = base;
    cfg.mu2 = mu2;
    if (!options.pin_xi) cfg.xi = cfg.mu1 * cfg.tau;
    validate(cfg);
    configs.push_back(std::move(cfg));
  }

  std::vector<RunReport> reports(configs.size());
  if (options.threads == 0 || configs.size() < 2) {
    for (std::size_t i = 0; i < configs.size(); ++i) reports[i] = run(configs[i], options.run);
    return reports;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        reports[i] = run(configs[i], options.run);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    const auto count = std::min<std::size_t>(options.threads, configs.size());
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return reports;
}

}  // namespace delaywave
