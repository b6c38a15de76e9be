#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "delaywave/config.hpp"

namespace delaywave {

/// Both displacement fields at levels n and n - 1. End nodes stay zero.
struct FieldState {
  std::vector<double> u_curr, u_prev;
  std::vector<double> y_curr, y_prev;
  std::int64_t n = 0;
  double dt = 0.0;

  double time() const { return static_cast<double>(n) * dt; }
  std::size_t nodes() const { return u_curr.size(); }
};

/// Past u-levels needed by the delayed difference quotient and the delay
/// energy, plus the prescribed velocity history f0 on [-tau, 0].
///
/// Levels are pushed in order starting at 0. After level m has been pushed,
/// levels max(0, m - I - 2)..m are retrievable.
class DelayHistory {
 public:
  /// `f0_rows` holds I + 1 rows; row k is f0 at t = (k - I) dt.
  DelayHistory(std::int64_t delay_steps, double dt, std::size_t nodes,
               std::vector<std::vector<double>> f0_rows);

  void push(std::span<const double> u);

  /// Throws HistoryUnderflow if level n was dropped or not produced yet.
  std::span<const double> level(std::int64_t n) const;
  bool holds(std::int64_t n) const { return n >= oldest() && n <= newest(); }

  /// f0(x_j, (k - I) dt) for k in [0, I].
  std::span<const double> prescribed(std::int64_t k) const;

  std::int64_t newest() const { return count_ - 1; }
  std::int64_t oldest() const;
  std::int64_t delay_steps() const { return delay_steps_; }
  double dt() const { return dt_; }
  std::size_t nodes() const { return nodes_; }
  std::size_t capacity() const { return capacity_; }

 private:
  std::int64_t delay_steps_;
  double dt_;
  std::size_t nodes_;
  std::size_t capacity_;
  std::int64_t count_ = 0;
  std::vector<double> ring_;
  std::vector<double> prescribed_;
};

/// Per-node update weights. The tilde weights drive the y-update.
///
/// kappa is b dt / c: eliminating y^{n+1} from the node's 2x2 system gives
/// that y^{n-1} weight, and it is the only value consistent with kappa_t.
struct NodeCoefficients {
  double lambda = 0.0;
  std::vector<double> c;
  std::vector<double> alpha, beta, gamma, rho, zeta, kappa, r;
  std::vector<double> alpha_t, beta_t, gamma_t, rho_t, zeta_t, kappa_t, r_t;

  // Inputs of the direct elimination solve.
  std::vector<double> damping_half;   ///< mu1 a_j dt / 2
  std::vector<double> coupling_half;  ///< b_j dt / 2
  std::vector<double> delay_gain;     ///< mu2 a_j dt^2
};

NodeCoefficients build_coefficients(const SimulationConfig& cfg, const Grid& grid);

struct Startup {
  FieldState state;  ///< levels 1 and 0
  DelayHistory history;
  std::vector<std::string> warnings;
};

/// Computes level 1 from the initial data through a ghost level at -dt and
/// primes the history with levels 0 and 1.
Startup initialize(const SimulationConfig& cfg, const Grid& grid);

/// Delayed velocity W_j entering the update from level n: f0 at (n - I) dt
/// while n <= I, afterwards (u^{n-I+1} - u^{n-I-1}) / (2 dt).
std::vector<double> delayed_source(const DelayHistory& history, std::int64_t n);

/// One step by solving each node's coupled 2x2 system exactly.
FieldState advance(const FieldState& state, std::span<const double> source,
                   const NodeCoefficients& coeff);

/// Same step through the explicit weight table.
FieldState advance_by_weights(const FieldState& state, std::span<const double> source,
                              const NodeCoefficients& coeff);

/// Advances to level n + 1 and records it in the history.
FieldState step(const FieldState& state, DelayHistory& history, const NodeCoefficients& coeff);

bool all_finite(const FieldState& state);

}  // namespace delaywave
