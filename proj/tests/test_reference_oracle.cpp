#include <doctest.h>

#include <cmath>

#include "delaywave/stepper.hpp"
#include "reference_oracle.hpp"
#include "test_support.hpp"

using namespace delaywave;
using namespace delaywave::testing;

namespace {

Eigen::VectorXd interior(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size() - 2));
  for (std::size_t j = 1; j + 1 < v.size(); ++j) out(static_cast<Eigen::Index>(j - 1)) = v[j];
  return out;
}

Eigen::VectorXd stack(const FieldState& s) {
  const auto N = static_cast<Eigen::Index>(s.nodes() - 2);
  Eigen::VectorXd out(4 * N);
  out << interior(s.u_curr), interior(s.u_prev), interior(s.y_curr), interior(s.y_prev);
  return out;
}

}  // namespace

TEST_SUITE("reference_oracle") {

TEST_CASE("zero trajectory has zero residuals") {
  const auto cfg = short_paper(5.0);
  const std::vector<double> z(11, 0.0);
  const oracle::Levels lv{z, z, z, z, z, z};
  const auto r = oracle::residuals(lv, z, cfg);
  CHECK(r.max_abs == 0.0);
  CHECK(r.res_u.size() == 9);
}

TEST_CASE("residual responds linearly to a perturbation of u^{n+1}") {
  const auto cfg = short_delay(0.2, 2.0);
  const auto grid = make_grid(cfg);
  const auto coeff = build_coefficients(cfg, grid);
  auto [state, history, _] = initialize(cfg, grid);
  const auto w = delayed_source(history, 1);
  const auto next = step(state, history, coeff);

  const double eps = 1e-6;
  for (std::size_t j : {1u, 5u}) {
    auto bumped = next.u_curr;
    bumped[j] += eps;
    const oracle::Levels base{next.u_curr, state.u_curr, state.u_prev,
                              next.y_curr, state.y_curr, state.y_prev};
    const oracle::Levels moved{bumped, state.u_curr, state.u_prev,
                               next.y_curr, state.y_curr, state.y_prev};
    const auto r0 = oracle::residuals(base, w, cfg);
    const auto r1 = oracle::residuals(moved, w, cfg);
    const double a = evaluate_profile(cfg.a, grid.x[j]);
    const double b = evaluate_profile(cfg.b, grid.x[j]);
    const double du = r1.res_u[j - 1] - r0.res_u[j - 1];
    const double dy = r1.res_y[j - 1] - r0.res_y[j - 1];
    CHECK(du == doctest::Approx(eps * (1.0 / (cfg.dt * cfg.dt) + a * cfg.mu1 / (2.0 * cfg.dt)))
                    .epsilon(1e-6));
    CHECK(dy == doctest::Approx(-eps * b / (2.0 * cfg.dt)).epsilon(1e-6));
  }
}

TEST_CASE("dense map has the block leapfrog pattern without damping or coupling") {
  auto cfg = short_paper(5.0);
  cfg.a = Profile{};
  cfg.b = Profile{};
  const oracle::DenseReference dense(cfg);
  const int N = dense.interior();
  const auto& A = dense.matrix();
  const double lam = 0.01;
  for (int r = 0; r < 4 * N; ++r) {
    for (int c = 0; c < 4 * N; ++c) {
      const int rb = r / N, cb = c / N, ri = r % N, ci = c % N;
      double expected = 0.0;
      if ((rb == 0 && cb == 0) || (rb == 2 && cb == 2)) {
        if (ri == ci) expected = 2.0 - 2.0 * lam;
        else if (std::abs(ri - ci) == 1) expected = lam;
      } else if ((rb == 0 && cb == 1) || (rb == 2 && cb == 3)) {
        expected = ri == ci ? -1.0 : 0.0;
      } else if ((rb == 1 && cb == 0) || (rb == 3 && cb == 2)) {
        expected = ri == ci ? 1.0 : 0.0;
      }
      if (expected == 0.0) {
        CHECK(A(r, c) == 0.0);
      } else {
        CHECK(A(r, c) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
  CHECK(dense.source_matrix().norm() == 0.0);
}

TEST_CASE("dense map is affine") {
  const auto cfg = short_paper(5.0);
  const oracle::DenseReference dense(cfg);
  const int N = dense.interior();
  const Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(4 * N, -1.0, 2.0);
  const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(N, 0.5, -0.5);
  const Eigen::VectorXd source_part = dense.source_matrix() * w;
  const Eigen::VectorXd lhs = dense.step(2.0 * s, w);
  const Eigen::VectorXd rhs = 2.0 * (dense.step(s, w) - source_part) + source_part;
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-12 * rhs.lpNorm<Eigen::Infinity>());
}

TEST_CASE("dense reference is limited to small grids") {
  auto cfg = short_paper(5.0);
  cfg.N = 65;
  cfg.dt = 0.001;
  CHECK_THROWS_AS(oracle::DenseReference{cfg}, std::invalid_argument);
}

TEST_CASE("stepper agrees with the dense map for 1000 steps") {
  const auto cfg = short_delay(0.5, 10.01);  // I = 50, M = 1001
  const auto grid = make_grid(cfg);
  const auto coeff = build_coefficients(cfg, grid);
  const oracle::DenseReference dense(cfg);
  auto [state, history, _] = initialize(cfg, grid);
  Eigen::VectorXd free_running = stack(state);
  double per_step = 0.0;
  double drift = 0.0;
  for (std::int64_t n = 1; n <= 1000; ++n) {
    const auto w = interior(delayed_source(history, n));
    const Eigen::VectorXd from_ours = dense.step(stack(state), w);
    free_running = dense.step(free_running, w);
    state = step(state, history, coeff);
    const Eigen::VectorXd ours = stack(state);
    const double norm = ours.lpNorm<Eigen::Infinity>();
    per_step = std::max(per_step, (ours - from_ours).lpNorm<Eigen::Infinity>() / norm);
    drift = std::max(drift, (ours - free_running).lpNorm<Eigen::Infinity>() / norm);
  }
  CHECK(per_step <= 1e-13);
  // rounding differences grow roughly like n * eps / dt along a free trajectory
  CHECK(drift <= 1e-9);
}

}  // TEST_SUITE
