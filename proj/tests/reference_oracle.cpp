#include "reference_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace delaywave::oracle {

namespace {

double node_x(int j, int N) { return static_cast<double>(j) / static_cast<double>(N + 1); }

}  // namespace

ResidualVector residuals(const Levels& lv, std::span<const double> delayed,
                         const SimulationConfig& cfg) {
  const int N = cfg.N;
  const double dt = cfg.dt;
  const double dx = 1.0 / (N + 1);
  ResidualVector out;
  out.res_u.resize(static_cast<std::size_t>(N));
  out.res_y.resize(static_cast<std::size_t>(N));
  for (auto level : {lv.u_next, lv.u_curr, lv.u_prev, lv.y_next, lv.y_curr, lv.y_prev}) {
    for (double v : level) out.field_scale = std::max(out.field_scale, std::abs(v));
  }
  for (int j = 1; j <= N; ++j) {
    const double a = evaluate_profile(cfg.a, node_x(j, N));
    const double b = evaluate_profile(cfg.b, node_x(j, N));
    const auto& u1 = lv.u_next;
    const auto& u0 = lv.u_curr;
    const auto& um = lv.u_prev;
    const auto& y1 = lv.y_next;
    const auto& y0 = lv.y_curr;
    const auto& ym = lv.y_prev;
    const double ru = (u1[j] - 2.0 * u0[j] + um[j]) / (dt * dt) -
                      (u0[j + 1] - 2.0 * u0[j] + u0[j - 1]) / (dx * dx) +
                      b * (y1[j] - ym[j]) / (2.0 * dt) + a * cfg.mu1 * (u1[j] - um[j]) / (2.0 * dt) +
                      a * cfg.mu2 * delayed[j];
    const double ry = (y1[j] - 2.0 * y0[j] + ym[j]) / (dt * dt) -
                      (y0[j + 1] - 2.0 * y0[j] + y0[j - 1]) / (dx * dx) -
                      b * (u1[j] - um[j]) / (2.0 * dt);
    out.res_u[j - 1] = ru;
    out.res_y[j - 1] = ry;
    out.max_abs = std::max({out.max_abs, std::abs(ru), std::abs(ry)});
  }
  return out;
}

DenseReference::DenseReference(const SimulationConfig& cfg) : n_(cfg.N) {
  if (n_ > 64) throw std::invalid_argument("dense reference is limited to N <= 64");
  const int N = n_;
  const double dt = cfg.dt;
  const double dx = 1.0 / (N + 1);
  const double inv_dt2 = 1.0 / (dt * dt);
  const double inv_dx2 = 1.0 / (dx * dx);

  // Unknowns [u+ (0..N-1), y+ (N..2N-1)]; state blocks u, u-, y, y-.
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(2 * N, 4 * N);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * N, N);
  const int U = 0, UM = N, Y = 2 * N, YM = 3 * N;
  for (int i = 0; i < N; ++i) {
    const double a = evaluate_profile(cfg.a, node_x(i + 1, N));
    const double b = evaluate_profile(cfg.b, node_x(i + 1, N));
    const int ru = i, ry = N + i;

    L(ru, i) = inv_dt2 + a * cfg.mu1 / (2.0 * dt);
    L(ru, N + i) = b / (2.0 * dt);
    R(ru, U + i) = 2.0 * inv_dt2 - 2.0 * inv_dx2;
    if (i > 0) R(ru, U + i - 1) = inv_dx2;
    if (i + 1 < N) R(ru, U + i + 1) = inv_dx2;
    R(ru, UM + i) = -inv_dt2 + a * cfg.mu1 / (2.0 * dt);
    R(ru, YM + i) = b / (2.0 * dt);
    G(ru, i) = -a * cfg.mu2;

    L(ry, N + i) = inv_dt2;
    L(ry, i) = -b / (2.0 * dt);
    R(ry, Y + i) = 2.0 * inv_dt2 - 2.0 * inv_dx2;
    if (i > 0) R(ry, Y + i - 1) = inv_dx2;
    if (i + 1 < N) R(ry, Y + i + 1) = inv_dx2;
    R(ry, YM + i) = -inv_dt2;
    R(ry, UM + i) = -b / (2.0 * dt);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(L);
  const Eigen::MatrixXd next = lu.solve(R);
  const Eigen::MatrixXd next_source = lu.solve(G);

  transition_ = Eigen::MatrixXd::Zero(4 * N, 4 * N);
  source_ = Eigen::MatrixXd::Zero(4 * N, N);
  transition_.block(0, 0, N, 4 * N) = next.topRows(N);
  transition_.block(2 * N, 0, N, 4 * N) = next.bottomRows(N);
  transition_.block(N, U, N, N) = Eigen::MatrixXd::Identity(N, N);
  transition_.block(3 * N, Y, N, N) = Eigen::MatrixXd::Identity(N, N);
  source_.topRows(N) = next_source.topRows(N);
  source_.block(2 * N, 0, N, N) = next_source.bottomRows(N);
}

Eigen::VectorXd DenseReference::step(const Eigen::VectorXd& state,
                                     const Eigen::VectorXd& delayed) const {
  return transition_ * state + source_ * delayed;
}

}  // namespace delaywave::oracle
