#include "delaywave/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "delaywave/errors.hpp"

namespace delaywave {

namespace {

constexpr double kIntegerTolerance = 1e-9;

std::int64_t exact_multiple(double value, double dt, const char* name) {
  const double k = std::round(value / dt);
  if (!std::isfinite(k) || std::abs(value - k * dt) > kIntegerTolerance * dt) {
    throw GridIncompatibility(std::string(name) + " = " + std::to_string(value) +
                              " is not an integer multiple of dt = " + std::to_string(dt));
  }
  return static_cast<std::int64_t>(k);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_node_series(const std::vector<double>& values, int N, const char* name) {
  require(values.size() == static_cast<std::size_t>(N) + 2,
          std::string(name) + " must have N + 2 = " + std::to_string(N + 2) + " values");
  require(values.front() == 0.0 && values.back() == 0.0,
          std::string(name) + " must vanish at both end nodes");
  for (double v : values) require(std::isfinite(v), std::string(name) + " has a non-finite value");
}

// Closed intervals merged into disjoint segments.
std::vector<std::pair<double, double>> merged_support(const Profile& p) {
  std::vector<std::pair<double, double>> segs;
  for (const auto& term : p.terms) {
    if (const auto* iv = std::get_if<Interval>(&term)) segs.emplace_back(iv->lo, iv->hi);
    else segs.emplace_back(0.0, 1.0);
  }
  std::sort(segs.begin(), segs.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& s : segs) {
    if (!out.empty() && s.first <= out.back().second) {
      out.back().second = std::max(out.back().second, s.second);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

bool coupling_inside_damping(const Profile& a, const Profile& b) {
  const auto support = merged_support(a);
  auto covered = [&](double lo, double hi) {
    return std::any_of(support.begin(), support.end(),
                       [&](const auto& s) { return s.first <= lo && hi <= s.second; });
  };
  return std::all_of(b.terms.begin(), b.terms.end(), [&](const ProfileTerm& term) {
    if (const auto* iv = std::get_if<Interval>(&term)) return covered(iv->lo, iv->hi);
    return covered(0.0, 1.0);
  });
}

double poly_profile(double x) { return x * (x - 1.0); }

}  // namespace

Profile Profile::indicator(std::initializer_list<std::pair<double, double>> intervals,
                           double amp) {
  Profile p;
  for (const auto& [lo, hi] : intervals) p.terms.emplace_back(Interval{lo, hi, amp});
  return p;
}

Profile Profile::sine_squared(double amp) {
  Profile p;
  p.terms.emplace_back(SineSquared{amp});
  return p;
}

double evaluate_profile(const Profile& profile, double x) {
  double value = 0.0;
  for (const auto& term : profile.terms) {
    if (const auto* iv = std::get_if<Interval>(&term)) {
      if (iv->lo <= x && x <= iv->hi) value += iv->amp;
    } else {
      const double s = std::sin(std::numbers::pi * x);
      value += std::get<SineSquared>(term).amp * s * s;
    }
  }
  return value;
}

void check_profile(const Profile& profile, ProfileRole role) {
  const char* what = role == ProfileRole::Damping ? "damping profile" : "coupling profile";
  auto check_amp = [&](double amp) {
    if (!std::isfinite(amp) || amp == 0.0 || (role == ProfileRole::Damping && amp < 0.0)) {
      throw InvalidProfile(std::string(what) + ": amplitude " + std::to_string(amp) +
                           (role == ProfileRole::Damping ? " must be > 0" : " must be nonzero"));
    }
  };
  for (const auto& term : profile.terms) {
    if (const auto* iv = std::get_if<Interval>(&term)) {
      if (!(0.0 <= iv->lo && iv->lo < iv->hi && iv->hi <= 1.0)) {
        throw InvalidProfile(std::string(what) + ": interval [" + std::to_string(iv->lo) + ", " +
                             std::to_string(iv->hi) + "] must satisfy 0 <= lo < hi <= 1");
      }
      check_amp(iv->amp);
    } else {
      check_amp(std::get<SineSquared>(term).amp);
    }
  }
}

std::int64_t delay_steps(const SimulationConfig& cfg) {
  require(cfg.dt > 0.0 && std::isfinite(cfg.dt), "dt must be positive");
  require(cfg.tau > 0.0 && std::isfinite(cfg.tau), "tau must be positive");
  const auto I = exact_multiple(cfg.tau, cfg.dt, "tau");
  if (I < 1) throw GridIncompatibility("tau / dt must be at least 1");
  return I;
}

std::int64_t total_steps(const SimulationConfig& cfg) {
  require(cfg.dt > 0.0 && std::isfinite(cfg.dt), "dt must be positive");
  require(cfg.T > 0.0 && std::isfinite(cfg.T), "T must be positive");
  return exact_multiple(cfg.T, cfg.dt, "T");
}

ConditionReport validate(const SimulationConfig& cfg) {
  require(std::isfinite(cfg.mu1) && cfg.mu1 >= 0.0, "mu1 must be >= 0");
  require(std::isfinite(cfg.mu2) && cfg.mu2 >= 0.0, "mu2 must be >= 0");
  require(std::isfinite(cfg.xi) && cfg.xi >= 0.0, "xi must be >= 0");
  require(cfg.N >= 1, "N must be >= 1");
  require(cfg.snapshot_stride >= 0, "snapshot_stride must be >= 0");
  check_profile(cfg.a, ProfileRole::Damping);
  check_profile(cfg.b, ProfileRole::Coupling);

  ConditionReport report;
  report.delay_steps = delay_steps(cfg);
  report.total_steps = total_steps(cfg);
  if (report.total_steps < report.delay_steps) {
    throw GridIncompatibility("T / dt = " + std::to_string(report.total_steps) +
                              " must be >= tau / dt = " + std::to_string(report.delay_steps));
  }
  report.dx = 1.0 / (cfg.N + 1);
  report.cfl = (cfg.dt * cfg.dt) / (report.dx * report.dx);
  if (report.cfl > 1.0) {
    throw GridIncompatibility("CFL number dt^2/dx^2 = " + std::to_string(report.cfl) +
                              " exceeds 1");
  }

  if (cfg.init.fields) {
    check_node_series(cfg.init.fields->u0, cfg.N, "u0");
    check_node_series(cfg.init.fields->u1, cfg.N, "u1");
    check_node_series(cfg.init.fields->y0, cfg.N, "y0");
    check_node_series(cfg.init.fields->y1, cfg.N, "y1");
  }
  if (cfg.init.history) {
    const auto& rows = *cfg.init.history;
    require(rows.size() == static_cast<std::size_t>(report.delay_steps) + 1,
            "f0 table must have I + 1 = " + std::to_string(report.delay_steps + 1) + " rows");
    for (const auto& row : rows) {
      require(row.size() == static_cast<std::size_t>(cfg.N) + 2,
              "every f0 row must have N + 2 values");
      for (double v : row) require(std::isfinite(v), "f0 has a non-finite value");
    }
  }

  report.mu_condition_holds = cfg.mu2 < cfg.mu1;
  if (report.mu_condition_holds) {
    report.xi_interval = std::make_pair(cfg.tau * cfg.mu2, cfg.tau * (2.0 * cfg.mu1 - cfg.mu2));
    report.xi_admissible =
        report.xi_interval->first < cfg.xi && cfg.xi < report.xi_interval->second;
  }
  report.coupling_inside_damping = coupling_inside_damping(cfg.a, cfg.b);
  return report;
}

Grid make_grid(const SimulationConfig& cfg) {
  const auto report = validate(cfg);
  Grid grid;
  grid.N = cfg.N;
  grid.dx = report.dx;
  grid.dt = cfg.dt;
  grid.lambda = report.cfl;
  grid.delay_steps = report.delay_steps;
  grid.total_steps = report.total_steps;
  grid.x.resize(static_cast<std::size_t>(cfg.N) + 2);
  // j / (N + 1) rather than j * dx keeps nodes such as 0.1 bit-identical to
  // the literal, which matters for closed-interval membership.
  for (std::size_t j = 0; j < grid.x.size(); ++j) {
    grid.x[j] = static_cast<double>(j) / static_cast<double>(cfg.N + 1);
  }
  return grid;
}

std::vector<double> sample_profile(const Profile& profile, const Grid& grid) {
  std::vector<double> out(grid.nodes());
  std::transform(grid.x.begin(), grid.x.end(), out.begin(),
                 [&](double x) { return evaluate_profile(profile, x); });
  return out;
}

NodalFields initial_fields(const SimulationConfig& cfg, const Grid& grid) {
  if (cfg.init.fields) return *cfg.init.fields;
  NodalFields f;
  const auto n = grid.nodes();
  f.u0.resize(n);
  f.u1.resize(n);
  f.y0.resize(n);
  f.y1.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double v = (j == 0 || j + 1 == n) ? 0.0 : poly_profile(grid.x[j]);
    f.u0[j] = f.u1[j] = v;
    f.y0[j] = f.y1[j] = -v;
  }
  return f;
}

std::vector<std::vector<double>> history_table(const SimulationConfig& cfg, const Grid& grid) {
  if (cfg.init.history) return *cfg.init.history;
  const auto I = grid.delay_steps;
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(I) + 1,
                                        std::vector<double>(grid.nodes(), 0.0));
  for (std::int64_t k = 0; k <= I; ++k) {
    const double t = static_cast<double>(k - I) * grid.dt;
    auto& row = rows[static_cast<std::size_t>(k)];
    for (std::size_t j = 1; j + 1 < grid.nodes(); ++j) {
      row[j] = poly_profile(grid.x[j]) * std::exp(-t);
    }
  }
  return rows;
}

}  // namespace delaywave
