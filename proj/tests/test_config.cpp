#include <doctest.h>

#include <random>

#include "delaywave/config.hpp"
#include "delaywave/errors.hpp"
#include "delaywave/io.hpp"

using namespace delaywave;

TEST_SUITE("model_config") {

TEST_CASE("evaluate_profile on indicator profiles") {
  const auto a = Profile::indicator({{0.1, 0.2}, {0.8, 0.9}});
  CHECK(evaluate_profile(a, 0.15) == 1.0);
  CHECK(evaluate_profile(a, 0.85) == 1.0);
  CHECK(evaluate_profile(a, 0.5) == 0.0);
  CHECK(evaluate_profile(a, 0.0) == 0.0);
  CHECK(evaluate_profile(a, 1.0) == 0.0);

  SUBCASE("closed endpoints count") {
    CHECK(evaluate_profile(a, 0.1) == 1.0);
    CHECK(evaluate_profile(a, 0.2) == 1.0);
    CHECK(evaluate_profile(a, 0.9) == 1.0);
  }
  SUBCASE("overlaps add up") {
    const auto p = Profile::indicator({{0.2, 0.6}, {0.4, 0.8}});
    CHECK(evaluate_profile(p, 0.5) == 2.0);
    CHECK(evaluate_profile(p, 0.3) == 1.0);
  }
  SUBCASE("sine squared") {
    CHECK(evaluate_profile(Profile::sine_squared(2.0), 0.5) == doctest::Approx(2.0));
    CHECK(evaluate_profile(Profile::sine_squared(), 0.0) == 0.0);
  }
}

TEST_CASE("profile values are constant inside each cell of the interval arrangement") {
  const auto p = Profile::indicator({{0.1, 0.45}, {0.3, 0.7}, {0.65, 0.9}});
  const double cuts[] = {0.0, 0.1, 0.3, 0.45, 0.65, 0.7, 0.9, 1.0};
  std::mt19937 rng(7);
  for (std::size_t c = 0; c + 1 < std::size(cuts); ++c) {
    std::uniform_real_distribution<double> in_cell(cuts[c], cuts[c + 1]);
    const double mid = evaluate_profile(p, 0.5 * (cuts[c] + cuts[c + 1]));
    for (int i = 0; i < 50; ++i) {
      const double x = in_cell(rng);
      if (x == cuts[c] || x == cuts[c + 1]) continue;
      CHECK(evaluate_profile(p, x) == mid);
    }
  }
}

TEST_CASE("check_profile rejects malformed intervals") {
  CHECK_THROWS_AS(check_profile(Profile::indicator({{0.3, 0.3}}), ProfileRole::Damping),
                  InvalidProfile);
  CHECK_THROWS_AS(check_profile(Profile::indicator({{0.5, 0.2}}), ProfileRole::Damping),
                  InvalidProfile);
  CHECK_THROWS_AS(check_profile(Profile::indicator({{-0.1, 0.2}}), ProfileRole::Coupling),
                  InvalidProfile);
  CHECK_THROWS_AS(check_profile(Profile::indicator({{0.1, 0.2}}, -1.0), ProfileRole::Damping),
                  InvalidProfile);
  CHECK_THROWS_AS(check_profile(Profile::indicator({{0.1, 0.2}}, 0.0), ProfileRole::Coupling),
                  InvalidProfile);
  CHECK_NOTHROW(check_profile(Profile::indicator({{0.1, 0.2}}, -1.0), ProfileRole::Coupling));
}

TEST_CASE("validate reports the mu and xi conditions") {
  SUBCASE("admissible preset choice") {
    auto cfg = paper_stable();
    cfg.mu2 = 0.5;
    const auto r = validate(cfg);
    CHECK(r.mu_condition_holds);
    REQUIRE(r.xi_interval);
    CHECK(r.xi_interval->first == doctest::Approx(1.0));
    CHECK(r.xi_interval->second == doctest::Approx(3.0));
    CHECK(r.xi_admissible);
    CHECK(r.dissipation_guaranteed());
    CHECK(r.coupling_inside_damping);
  }
  SUBCASE("mu2 above mu1 is reported, not rejected") {
    const auto r = validate(paper_unstable());
    CHECK_FALSE(r.mu_condition_holds);
    CHECK_FALSE(r.xi_interval);
    CHECK_FALSE(r.xi_admissible);
  }
  SUBCASE("xi outside the interval") {
    auto cfg = paper_stable();
    cfg.xi = 0.5;
    const auto r = validate(cfg);
    CHECK(r.mu_condition_holds);
    CHECK_FALSE(r.xi_admissible);
  }
  SUBCASE("coupling outside damping") {
    auto cfg = paper_stable();
    cfg.b = Profile::indicator({{0.15, 0.3}});
    CHECK_FALSE(validate(cfg).coupling_inside_damping);
    cfg.b = Profile::indicator({{0.8, 0.85}, {0.1, 0.2}});
    CHECK(validate(cfg).coupling_inside_damping);
    cfg.a = Profile::indicator({{0.1, 0.5}, {0.5, 0.9}});
    cfg.b = Profile::indicator({{0.3, 0.7}});
    CHECK(validate(cfg).coupling_inside_damping);
  }
}

TEST_CASE("validate computes the CFL number from dx = 1/(N+1)") {
  auto cfg = paper_stable(10);
  const auto r = validate(cfg);
  CHECK(r.dx == doctest::Approx(1.0 / 11.0));
  CHECK(r.cfl == doctest::Approx(0.0121).epsilon(1e-12));
  CHECK(validate(paper_stable(9)).cfl == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("validate rejects grid incompatibilities") {
  auto cfg = paper_stable();
  SUBCASE("tau not a multiple of dt") {
    cfg.tau = 2.005;
    cfg.dt = 0.01;
    CHECK_THROWS_AS(validate(cfg), GridIncompatibility);
  }
  SUBCASE("T not a multiple of dt") {
    cfg.T = 500.003;
    CHECK_THROWS_AS(validate(cfg), GridIncompatibility);
  }
  SUBCASE("horizon shorter than the delay") {
    cfg.T = 1.0;
    CHECK_THROWS_AS(validate(cfg), GridIncompatibility);
  }
  SUBCASE("CFL above one") {
    cfg.N = 9;
    cfg.dt = 0.2;
    cfg.tau = 2.0;
    CHECK_THROWS_AS(validate(cfg), GridIncompatibility);
  }
  SUBCASE("CFL exactly one is accepted") {
    cfg.dt = 0.1;
    CHECK(validate(cfg).cfl == doctest::Approx(1.0));
  }
  SUBCASE("bad profile") {
    cfg.a = Profile::indicator({{0.4, 0.2}});
    CHECK_THROWS_AS(validate(cfg), InvalidProfile);
  }
  SUBCASE("bad parameter") {
    cfg.mu1 = -1.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
  SUBCASE("explicit initial data must have N + 2 values with zero ends") {
    NodalFields f;
    f.u0 = f.u1 = f.y0 = f.y1 = std::vector<double>(11, 0.0);
    f.u0[5] = 1.0;
    cfg.init.fields = f;
    CHECK_NOTHROW(validate(cfg));
    cfg.init.fields->u1[0] = 0.5;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.init.fields->u1 = std::vector<double>(10, 0.0);
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
}

TEST_CASE("delay_steps is tau / dt exactly") {
  auto cfg = paper_stable();
  CHECK(delay_steps(cfg) == 200);
  cfg.tau = cfg.dt;
  CHECK(delay_steps(cfg) == 1);
  cfg.tau = 0.5;
  cfg.dt = 0.02;
  CHECK(delay_steps(cfg) == 25);
  cfg.tau = 0.51;
  cfg.dt = 0.02;
  CHECK_THROWS_AS(delay_steps(cfg), GridIncompatibility);
  CHECK(total_steps(paper_stable()) == 50000);
}

TEST_CASE("xi = mu1 tau is admissible whenever mu2 < mu1") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> mu(0.0, 5.0);
  std::uniform_int_distribution<int> delay(1, 400);
  for (int trial = 0; trial < 500; ++trial) {
    auto cfg = paper_stable();
    cfg.mu1 = mu(rng);
    cfg.mu2 = mu(rng);
    cfg.tau = delay(rng) * cfg.dt;
    cfg.T = cfg.tau;
    cfg.xi = cfg.mu1 * cfg.tau;
    const auto r = validate(cfg);
    CHECK(r.xi_interval.has_value() == r.mu_condition_holds);
    if (r.xi_admissible) CHECK(r.mu_condition_holds);
    if (r.mu_condition_holds) {
      const double mid = 0.5 * (r.xi_interval->first + r.xi_interval->second);
      CHECK(mid == doctest::Approx(cfg.mu1 * cfg.tau));
      CHECK(r.xi_admissible);
    }
  }
}

TEST_CASE("validate is deterministic") {
  const auto cfg = paper_stable(10);
  const auto r1 = validate(cfg);
  const auto r2 = validate(cfg);
  CHECK(r1.mu_condition_holds == r2.mu_condition_holds);
  CHECK(r1.xi_interval == r2.xi_interval);
  CHECK(r1.cfl == r2.cfl);
  CHECK(r1.coupling_inside_damping == r2.coupling_inside_damping);
}

TEST_CASE("grid nodes hit the interval endpoints exactly for N = 9") {
  const auto grid = make_grid(paper_stable(9));
  const auto a = sample_profile(paper_stable(9).a, grid);
  const std::vector<double> expected = {0, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0};
  CHECK(a == expected);
  const auto grid10 = make_grid(paper_stable(10));
  const auto a10 = sample_profile(paper_stable(10).a, grid10);
  const std::vector<double> expected10 = {0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0};
  CHECK(a10 == expected10);
}

}  // TEST_SUITE
