#include "doctest.h"
#include "netdiff/compartmental.hpp"
#include <stdexcept>

#include <cmath>

using namespace netdiff;

TEST_CASE("one hand-stepped recursion step") {
  auto traj = simulate_sir({0.5, 0.25}, 1000, 1, 3);
  CHECK(traj.S[1] == doctest::Approx(998.5005));
  CHECK(traj.I[1] == doctest::Approx(1.2495));
  CHECK(traj.R[1] == doctest::Approx(0.25));
  CHECK(traj.clamp_events == 0);
}

TEST_CASE("degenerate rates") {
  auto no_removal = simulate_sir({0.5, 0.0}, 1000, 1, 10);
  for (double r : no_removal.R) CHECK(r == 0.0);
  auto no_spread = simulate_sir({0.0, 0.3}, 1000, 2, 10);
  for (std::uint32_t t = 0; t <= 10; ++t)
    CHECK(no_spread.I[t] == doctest::Approx(2.0 * std::pow(0.7, t)));
}

TEST_CASE("conservation and monotonicity") {
  // s <= 1 keeps every compartment in [0, n], so the sum is conserved exactly
  auto traj = simulate_sir({0.9, 0.4}, 500, 5, 40);
  CHECK(traj.clamp_events == 0);
  for (std::uint32_t t = 0; t <= 40; ++t)
    CHECK(traj.S[t] + traj.I[t] + traj.R[t] == doctest::Approx(500.0));
  for (std::uint32_t t = 1; t <= 40; ++t) {
    CHECK(traj.R[t] >= traj.R[t - 1]);
    CHECK(traj.S[t] <= traj.S[t - 1]);
  }
  // s > 1 can push S below zero within a step; clamps are counted
  CHECK(simulate_sir({2.0, 0.4}, 500, 5, 40).clamp_events > 0);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(simulate_sir({-1.0, 0.5}, 100, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(simulate_sir({1.0, 1.5}, 100, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(simulate_sir({1.0, 0.5}, 100, 0, 5), std::invalid_argument);
  CHECK_THROWS_AS(simulate_sir({1.0, 0.5}, 100, 200, 5), std::invalid_argument);
}

TEST_CASE("self-fit recovers the generating parameters") {
  const SirParams truth{0.5, 0.25};
  auto traj = simulate_sir(truth, 1000, 1, 30);
  SirSeries obs;
  obs.I = traj.I;
  obs.R = traj.R;
  auto fit = fit_gmm(obs, 1000, 1, 30);
  CHECK(std::abs(fit.params.s - truth.s) / truth.s < 1e-3);
  CHECK(std::abs(fit.params.r - truth.r) / truth.r < 1e-3);
  CHECK(std::abs(fit.r0 - 2.0) / 2.0 < 1e-3);
  CHECK(fit.objective < 1e-6);
  CHECK_FALSE(fit.clamped);
}

TEST_CASE("degenerate series is rejected") {
  SirSeries obs;
  obs.I.assign(20, 0.0);
  obs.R.assign(20, 0.0);
  CHECK_THROWS_AS(fit_gmm(obs, 100, 1, 10), std::runtime_error);
  CHECK_THROWS_AS(fit_gmm(obs, 100, 1, 1), std::invalid_argument);
}

TEST_CASE("ratio of parameters") {
  CHECK(r0_from_params({0.5, 0.25}) == doctest::Approx(2.0));
  CHECK(r0_from_params({0.0, 0.3}) == 0.0);
  CHECK_THROWS_AS(r0_from_params({0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("trace conversion and RMSE windows") {
  DiffusionTrace t;
  t.new_by_step = {1, 2, 3, 0};
  t.activation_time = {};
  t.horizon = 3;
  auto obs = trace_to_sir_series(t);
  CHECK(obs.I == std::vector<double>{1, 2, 3, 0});
  CHECK(obs.R == std::vector<double>{0, 1, 3, 6});

  auto model = simulate_sir({0.0, 1.0}, 10, 1, 3);
  // I_model = [1,0,0,0], R_model = [0,1,1,1]
  double rmse = sir_rmse(model, obs, 1, 1);
  CHECK(rmse == doctest::Approx(std::sqrt((4.0 + 0.0) / 2.0)));
  CHECK_THROWS_AS(sir_rmse(model, obs, 1, 9), std::invalid_argument);
}
