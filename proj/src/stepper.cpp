#include "delaywave/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "delaywave/errors.hpp"

namespace delaywave {

DelayHistory::DelayHistory(std::int64_t delay_steps, double dt, std::size_t nodes,
                           std::vector<std::vector<double>> f0_rows)
    : delay_steps_(delay_steps),
      dt_(dt),
      nodes_(nodes),
      capacity_(static_cast<std::size_t>(delay_steps) + 3),
      ring_(capacity_ * nodes, 0.0) {
  if (f0_rows.size() != static_cast<std::size_t>(delay_steps) + 1) {
    throw ConfigError("history table needs I + 1 rows");
  }
  prescribed_.reserve(f0_rows.size() * nodes);
  for (const auto& row : f0_rows) {
    if (row.size() != nodes) throw ConfigError("history row has the wrong number of nodes");
    prescribed_.insert(prescribed_.end(), row.begin(), row.end());
  }
}

std::int64_t DelayHistory::oldest() const {
  return std::max<std::int64_t>(0, count_ - static_cast<std::int64_t>(capacity_));
}

void DelayHistory::push(std::span<const double> u) {
  if (u.size() != nodes_) throw HistoryUnderflow("pushed level has the wrong number of nodes");
  const auto slot = static_cast<std::size_t>(count_ % static_cast<std::int64_t>(capacity_));
  std::copy(u.begin(), u.end(), ring_.begin() + static_cast<std::ptrdiff_t>(slot * nodes_));
  ++count_;
}

std::span<const double> DelayHistory::level(std::int64_t n) const {
  if (!holds(n)) {
    std::ostringstream msg;
    msg << "level " << n << " not in history (holds " << oldest() << ".." << newest() << ")";
    throw HistoryUnderflow(msg.str());
  }
  const auto slot = static_cast<std::size_t>(n % static_cast<std::int64_t>(capacity_));
  return {ring_.data() + slot * nodes_, nodes_};
}

std::span<const double> DelayHistory::prescribed(std::int64_t k) const {
  if (k < 0 || k > delay_steps_) {
    throw HistoryUnderflow("f0 requested outside [-tau, 0] (k = " + std::to_string(k) + ")");
  }
  return {prescribed_.data() + static_cast<std::size_t>(k) * nodes_, nodes_};
}

NodeCoefficients build_coefficients(const SimulationConfig& cfg, const Grid& grid) {
  const auto a = sample_profile(cfg.a, grid);
  const auto b = sample_profile(cfg.b, grid);
  const double dt = grid.dt;
  const auto n = grid.nodes();

  NodeCoefficients k;
  k.lambda = grid.lambda;
  for (auto* v : {&k.c, &k.alpha, &k.beta, &k.gamma, &k.rho, &k.zeta, &k.kappa, &k.r,
                  &k.alpha_t, &k.beta_t, &k.gamma_t, &k.rho_t, &k.zeta_t, &k.kappa_t, &k.r_t,
                  &k.damping_half, &k.coupling_half, &k.delay_gain}) {
    v->assign(n, 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double bdt = b[j] * dt;
    const double c = 1.0 + 0.5 * cfg.mu1 * a[j] * dt + 0.25 * bdt * bdt;
    k.c[j] = c;
    k.alpha[j] = 2.0 / c;
    k.beta[j] = 1.0 / c;
    k.gamma[j] = (c - 2.0) / c;
    k.rho[j] = bdt / c;
    k.zeta[j] = bdt / (2.0 * c);
    k.kappa[j] = bdt / c;
    k.r[j] = cfg.mu2 * a[j] * dt * dt / c;

    k.alpha_t[j] = 2.0 - bdt * bdt / (2.0 * c);
    k.beta_t[j] = 1.0 - bdt * bdt / (4.0 * c);
    k.gamma_t[j] = bdt * bdt / (2.0 * c) - 1.0;
    k.rho_t[j] = bdt / c;
    k.zeta_t[j] = bdt / (2.0 * c);
    k.kappa_t[j] = 0.5 * bdt * ((c - 2.0) / c - 1.0);
    k.r_t[j] = cfg.mu2 * a[j] * b[j] * dt * dt * dt / (2.0 * c);

    k.damping_half[j] = 0.5 * cfg.mu1 * a[j] * dt;
    k.coupling_half[j] = 0.5 * bdt;
    k.delay_gain[j] = cfg.mu2 * a[j] * dt * dt;
  }
  return k;
}

Startup initialize(const SimulationConfig& cfg, const Grid& grid) {
  const auto fields = initial_fields(cfg, grid);
  auto f0 = history_table(cfg, grid);
  const auto a = sample_profile(cfg.a, grid);
  const auto b = sample_profile(cfg.b, grid);
  const double dt = grid.dt;
  const double lam = grid.lambda;
  const auto n = grid.nodes();

  std::vector<std::string> warnings;
  double mismatch = 0.0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    mismatch = std::max(mismatch, std::abs(f0.back()[j] - fields.u1[j]));
  }
  if (mismatch > 1e-9) {
    std::ostringstream msg;
    msg << "f0(x, 0) differs from u1(x) by up to " << mismatch << " at the grid nodes";
    warnings.push_back(msg.str());
  }

  FieldState s;
  s.n = 1;
  s.dt = dt;
  s.u_prev = fields.u0;
  s.y_prev = fields.y0;
  s.u_curr.assign(n, 0.0);
  s.y_curr.assign(n, 0.0);
  const auto& u0 = fields.u0;
  const auto& y0 = fields.y0;
  const auto& oldest = f0.front();  // f0 at -I dt
  for (std::size_t j = 1; j + 1 < n; ++j) {
    s.u_curr[j] = (1.0 - lam) * u0[j] + dt * fields.u1[j] + 0.5 * lam * (u0[j + 1] + u0[j - 1]) -
                  b[j] * 0.5 * dt * dt * fields.y1[j] -
                  a[j] * 0.5 * cfg.mu1 * dt * dt * fields.u1[j] -
                  a[j] * 0.5 * cfg.mu2 * dt * dt * oldest[j];
    s.y_curr[j] = (1.0 - lam) * y0[j] + dt * fields.y1[j] + 0.5 * lam * (y0[j + 1] + y0[j - 1]) +
                  b[j] * 0.5 * dt * dt * fields.u1[j];
  }

  DelayHistory history(grid.delay_steps, dt, n, std::move(f0));
  history.push(s.u_prev);
  history.push(s.u_curr);
  return Startup{std::move(s), std::move(history), std::move(warnings)};
}

std::vector<double> delayed_source(const DelayHistory& history, std::int64_t n) {
  const auto I = history.delay_steps();
  if (n <= I) {
    const auto row = history.prescribed(n);
    std::vector<double> w(row.begin(), row.end());
    w.front() = w.back() = 0.0;
    return w;
  }
  const auto ahead = history.level(n - I + 1);
  const auto behind = history.level(n - I - 1);
  const double inv = 1.0 / (2.0 * history.dt());
  std::vector<double> w(history.nodes(), 0.0);
  for (std::size_t j = 1; j + 1 < w.size(); ++j) w[j] = (ahead[j] - behind[j]) * inv;
  return w;
}

FieldState advance(const FieldState& state, std::span<const double> source,
                   const NodeCoefficients& coeff) {
  const auto n = state.nodes();
  const double lam = coeff.lambda;
  const auto& u = state.u_curr;
  const auto& um = state.u_prev;
  const auto& y = state.y_curr;
  const auto& ym = state.y_prev;

  FieldState next;
  next.n = state.n + 1;
  next.dt = state.dt;
  next.u_curr.assign(n, 0.0);
  next.y_curr.assign(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double q = coeff.coupling_half[j];
    // dt^2 times each difference equation, unknowns moved to the left:
    //   (1 + mu1 a dt/2) u+ + q y+ = ru
    //   y+ - q u+                  = ry
    const double ru = 2.0 * u[j] - um[j] + lam * (u[j + 1] - 2.0 * u[j] + u[j - 1]) +
                      q * ym[j] + coeff.damping_half[j] * um[j] -
                      coeff.delay_gain[j] * source[j];
    const double ry = 2.0 * y[j] - ym[j] + lam * (y[j + 1] - 2.0 * y[j] + y[j - 1]) - q * um[j];
    const double up = (ru - q * ry) / coeff.c[j];
    next.u_curr[j] = up;
    next.y_curr[j] = ry + q * up;
  }
  next.u_prev = u;
  next.y_prev = y;
  return next;
}

FieldState advance_by_weights(const FieldState& state, std::span<const double> source,
                              const NodeCoefficients& k) {
  const auto n = state.nodes();
  const double lam = k.lambda;
  const auto& u = state.u_curr;
  const auto& um = state.u_prev;
  const auto& y = state.y_curr;
  const auto& ym = state.y_prev;

  FieldState next;
  next.n = state.n + 1;
  next.dt = state.dt;
  next.u_curr.assign(n, 0.0);
  next.y_curr.assign(n, 0.0);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    next.u_curr[j] = (1.0 - lam) * k.alpha[j] * u[j] + lam * k.beta[j] * (u[j + 1] + u[j - 1]) +
                     k.gamma[j] * um[j] - (1.0 - lam) * k.rho[j] * y[j] -
                     lam * k.zeta[j] * (y[j + 1] + y[j - 1]) + k.kappa[j] * ym[j] -
                     k.r[j] * source[j];
    next.y_curr[j] = (1.0 - lam) * k.alpha_t[j] * y[j] +
                     lam * k.beta_t[j] * (y[j + 1] + y[j - 1]) + k.gamma_t[j] * ym[j] +
                     (1.0 - lam) * k.rho_t[j] * u[j] + lam * k.zeta_t[j] * (u[j + 1] + u[j - 1]) +
                     k.kappa_t[j] * um[j] - k.r_t[j] * source[j];
  }
  next.u_prev = u;
  next.y_prev = y;
  return next;
}

FieldState step(const FieldState& state, DelayHistory& history, const NodeCoefficients& coeff) {
  if (history.newest() != state.n) {
    throw HistoryUnderflow("history newest level " + std::to_string(history.newest()) +
                           " does not match state level " + std::to_string(state.n));
  }
  const auto w = delayed_source(history, state.n);
  auto next = advance(state, w, coeff);
  history.push(next.u_curr);
  return next;
}

bool all_finite(const FieldState& state) {
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(state.u_curr) && finite(state.y_curr);
}

}  // namespace delaywave
