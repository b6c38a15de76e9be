#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace delaywave {

/// Indicator of the closed interval [lo, hi] scaled by amp.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double amp = 1.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// amp * sin^2(pi x); a smooth profile used for convergence studies.
struct SineSquared {
  double amp = 1.0;
  friend bool operator==(const SineSquared&, const SineSquared&) = default;
};

using ProfileTerm = std::variant<Interval, SineSquared>;

/// A spatial coefficient on [0, 1] written as a sum of terms.
/// Overlapping terms add up.
struct Profile {
  std::vector<ProfileTerm> terms;

  static Profile indicator(std::initializer_list<std::pair<double, double>> intervals,
                           double amp = 1.0);
  static Profile sine_squared(double amp = 1.0);

  bool empty() const { return terms.empty(); }
  friend bool operator==(const Profile&, const Profile&) = default;
};

/// Damping amplitudes must be positive; coupling amplitudes only nonzero.
enum class ProfileRole { Damping, Coupling };

double evaluate_profile(const Profile& profile, double x);

/// Throws InvalidProfile when an interval is empty, leaves [0, 1], or has an
/// amplitude not allowed for the role.
void check_profile(const Profile& profile, ProfileRole role);

/// Explicit node values, each of length N + 2 with zero end values.
struct NodalFields {
  std::vector<double> u0, u1, y0, y1;
  friend bool operator==(const NodalFields&, const NodalFields&) = default;
};

/// Initial state and the velocity history on (-tau, 0).
///
/// An empty `fields` selects u0 = u1 = x(x-1), y0 = y1 = -x(x-1).
/// An empty `history` selects f0(x, t) = x(x-1) e^{-t}. An explicit history is
/// a table with I + 1 rows of N + 2 node values; row k holds f0 at t = (k - I) dt.
struct InitialData {
  std::optional<NodalFields> fields;
  std::optional<std::vector<std::vector<double>>> history;

  bool is_paper_preset() const { return !fields && !history; }
  friend bool operator==(const InitialData&, const InitialData&) = default;
};

struct SimulationConfig {
  double mu1 = 1.0;  ///< instantaneous damping gain
  double mu2 = 0.5;  ///< delayed damping gain
  double tau = 2.0;  ///< delay
  double xi = 2.0;   ///< weight of the delay-history energy
  int N = 9;         ///< interior nodes; dx = 1 / (N + 1)
  double dt = 0.01;
  double T = 500.0;
  Profile a;
  Profile b;
  InitialData init;
  std::int64_t snapshot_stride = 0;

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// Stability and grid diagnostics for a configuration. The mu/xi conditions
/// are reported only; unstable regimes are legitimate simulation targets.
struct ConditionReport {
  bool mu_condition_holds = false;                        ///< mu2 < mu1
  std::optional<std::pair<double, double>> xi_interval;   ///< (tau mu2, tau (2 mu1 - mu2))
  bool xi_admissible = false;
  bool coupling_inside_damping = false;
  double cfl = 0.0;                                       ///< dt^2 / dx^2
  double dx = 0.0;
  std::int64_t delay_steps = 0;
  std::int64_t total_steps = 0;

  bool dissipation_guaranteed() const { return mu_condition_holds && xi_admissible; }
};

/// Discretization derived from a validated config.
struct Grid {
  int N = 0;
  double dx = 0.0;
  double dt = 0.0;
  double lambda = 0.0;
  std::int64_t delay_steps = 0;  ///< I = tau / dt
  std::int64_t total_steps = 0;  ///< M = T / dt
  std::vector<double> x;         ///< x_j = j / (N + 1), j = 0..N+1

  std::size_t nodes() const { return x.size(); }
};

/// Throws GridIncompatibility, InvalidProfile or ConfigError on hard errors.
ConditionReport validate(const SimulationConfig& cfg);

/// I = tau / dt, exact up to 1e-9 dt.
std::int64_t delay_steps(const SimulationConfig& cfg);

/// M = T / dt, exact up to 1e-9 dt.
std::int64_t total_steps(const SimulationConfig& cfg);

Grid make_grid(const SimulationConfig& cfg);

/// Profile sampled at the grid nodes.
std::vector<double> sample_profile(const Profile& profile, const Grid& grid);

/// Resolves the built-in presets into explicit node values.
NodalFields initial_fields(const SimulationConfig& cfg, const Grid& grid);
std::vector<std::vector<double>> history_table(const SimulationConfig& cfg, const Grid& grid);

}  // namespace delaywave
