// Copyright 2026 The DSS Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "dss/cartpole.hpp"
#include "dss/experiment.hpp"
#include "dss/types.hpp"

namespace dss {

namespace {

CartPoleState make_state(double theta, double x_c, double theta_dot, double xc_dot) {
  CartPoleState s;
  s.theta = theta;
  s.x_c = x_c;
  s.theta_dot = theta_dot;
  s.xc_dot = xc_dot;
  return s;
}

// Integrates with a fixed step count so arbitrary step sizes are exact.
CartPoleState integrate(CartPoleState state, double u, SimParams params, double horizon,
                        Eigen::Index steps) {
  params.dt = horizon / static_cast<double>(steps);
  for (Eigen::Index k = 0; k < steps; ++k) state = step(state, u, params);
  return state;
}

double state_error(const CartPoleState& a, const CartPoleState& b) {
  return std::sqrt(std::pow(wrap_angle(a.theta - b.theta), 2) + std::pow(a.x_c - b.x_c, 2) +
                   std::pow(a.theta_dot - b.theta_dot, 2) + std::pow(a.xc_dot - b.xc_dot, 2));
}

}  // namespace

TEST_CASE("wrap_angle maps into the half-open interval") {
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(1.5 * kPi) == doctest::Approx(-0.5 * kPi));
  CHECK(wrap_angle(-7.0 * kPi) == doctest::Approx(kPi));
}

TEST_CASE("equilibria are fixed points of the step map") {
  SimParams params;

  CartPoleState upright = make_state(0.0, 0.0, 0.0, 0.0);
  for (int k = 0; k < 100; ++k) upright = step(upright, 0.0, params);
  CHECK(upright.theta == 0.0);
  CHECK(upright.theta_dot == 0.0);
  CHECK(upright.x_c == 0.0);

  CartPoleState hanging = make_state(kPi, 0.0, 0.0, 0.0);
  for (int k = 0; k < 100; ++k) hanging = step(hanging, 0.0, params);
  CHECK(hanging.theta == doctest::Approx(kPi));
  CHECK(hanging.theta_dot == doctest::Approx(0.0));
}

TEST_CASE("undamped unforced swings conserve energy") {
  SimParams params;
  params.damping = 0.0;
  CartPoleState state = make_state(2.0, 0.0, 0.0, 0.0);
  const double e0 = total_energy(state, params);

  const auto steps = static_cast<Eigen::Index>(std::llround(30.0 / params.dt));
  double worst = 0.0;
  for (Eigen::Index k = 0; k < steps; ++k) {
    state = step(state, 0.0, params);
    worst = std::max(worst, std::abs(total_energy(state, params) - e0));
  }
  CHECK(worst / std::abs(e0) < 1e-6);
}

TEST_CASE("integration error falls like a fourth-order method") {
  SimParams params;
  params.damping = 0.0;
  const CartPoleState start = make_state(1.0, 0.0, 0.0, 0.0);
  const double horizon = 2.0;

  const CartPoleState reference = integrate(start, 0.0, params, horizon, 20000);
  const CartPoleState coarse = integrate(start, 0.0, params, horizon, 100);
  const CartPoleState fine = integrate(start, 0.0, params, horizon, 200);

  const double ratio = state_error(coarse, reference) / state_error(fine, reference);
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 32.0);
}

TEST_CASE("step clamps the input at the saturation band") {
  SimParams params;
  const CartPoleState state = make_state(0.5, 0.0, 0.0, 0.0);

  bool clamped = false;
  const CartPoleState hit = step(state, 100.0, params, &clamped);
  CHECK(clamped);
  const CartPoleState at_limit = step(state, params.u_sat, params, &clamped);
  CHECK(!clamped);
  CHECK(hit.theta == at_limit.theta);
  CHECK(hit.xc_dot == at_limit.xc_dot);

  CHECK_THROWS_AS(step(state, std::numeric_limits<double>::quiet_NaN(), params),
                  std::invalid_argument);
}

TEST_CASE("total_energy matches the closed form") {
  SimParams params;
  CHECK(total_energy(make_state(0.0, 0.0, 1.0, 0.0), params) == doctest::Approx(10.31));
  CHECK(total_energy(make_state(kPi, 0.0, 0.0, 0.0), params) == doctest::Approx(-9.81));
}

TEST_CASE("the controller is silent exactly at the goal") {
  SimParams params;
  ControlGoal goal;
  const OptimalController controller(params, goal);
  const double u = controller.control(make_state(goal.theta, goal.x_c, 0.0, 0.0));
  CHECK(u == 0.0);
}

TEST_CASE("lqr regulates a small perturbation to the goal") {
  SimParams params;
  ControlGoal goal;
  const OptimalController controller(params, goal);

  CartPoleState state = make_state(0.2, goal.x_c - 0.1, 0.0, 0.0);
  const auto steps = static_cast<Eigen::Index>(std::llround(10.0 / params.dt));
  for (Eigen::Index k = 0; k < steps; ++k) {
    state = step(state, controller.control(state), params);
  }
  CHECK(std::abs(state.theta) < 1e-3);
  CHECK(std::abs(state.x_c - goal.x_c) < 1e-2);
  CHECK(std::abs(state.theta_dot) < 1e-3);
}

TEST_CASE("lqr_gain rejects bad inputs") {
  SimParams params;
  CHECK_THROWS_AS(lqr_gain(params, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lqr_gain(params, -1.0), std::invalid_argument);
}

TEST_CASE("swing-up starts with the rest kick and ends inverted") {
  SimParams params;
  ControlGoal goal;
  const OptimalController controller(params, goal);

  CartPoleState state = make_state(kPi, 0.0, 0.0, 0.0);
  // Energy pump is zero at rest; kick 8.0 plus cart recenter 0.6 toward x = 1.
  CHECK(controller.control(state) == doctest::Approx(8.6).epsilon(1e-12));

  const auto steps = static_cast<Eigen::Index>(std::llround(30.0 / params.dt));
  for (Eigen::Index k = 0; k < steps; ++k) {
    state = step(state, controller.control(state), params);
  }
  CHECK(std::abs(state.theta) < 0.1);
  CHECK(std::abs(state.theta_dot) < 0.5);
}

TEST_CASE("assistance_filter gates on agreement only") {
  CHECK(assistance_filter(2.0, 1.0) == 2.0);
  CHECK(assistance_filter(-1.0, -2.0) == -1.0);
  CHECK(assistance_filter(-2.0, 1.0) == 0.0);
  CHECK(assistance_filter(3.0, -0.5) == 0.0);
  CHECK(assistance_filter(0.0, 5.0) == 0.0);
  CHECK(assistance_filter(3.0, 0.0) == 0.0);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(assistance_filter(nan, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(assistance_filter(1.0, nan), std::invalid_argument);
}

TEST_CASE("a zero-skill subject reproduces the optimal policy") {
  SimParams params;
  const OptimalController controller(params, ControlGoal{});
  SyntheticSubject subject(controller, SyntheticSubject::Skill{}, Rng(3), params.u_sat);

  CartPoleState state = make_state(kPi - 0.3, 0.0, 0.0, 0.0);
  for (int k = 0; k < 200; ++k) {
    const double u_opt = controller.control(state);
    CHECK(subject.control(state) == u_opt);
    state = step(state, u_opt, params);
  }
}

TEST_CASE("subject delay reacts to the state seen delay_samples ago") {
  SimParams params;
  const OptimalController controller(params, ControlGoal{});
  SyntheticSubject::Skill skill;
  skill.delay_samples = 2;
  SyntheticSubject subject(controller, skill, Rng(5), params.u_sat);

  std::vector<CartPoleState> states;
  for (int k = 0; k < 5; ++k) {
    states.push_back(make_state(kPi - 0.2 * k, 0.1 * k, 0.05 * k, 0.0));
  }

  // The buffer starts empty, so early calls see the oldest available state.
  CHECK(subject.control(states[0]) == controller.control(states[0]));
  CHECK(subject.control(states[1]) == controller.control(states[0]));
  CHECK(subject.control(states[2]) == controller.control(states[0]));
  CHECK(subject.control(states[3]) == controller.control(states[1]));
  CHECK(subject.control(states[4]) == controller.control(states[2]));
}

TEST_CASE("subject noise is seed-deterministic and saturated") {
  SimParams params;
  const OptimalController controller(params, ControlGoal{});
  SyntheticSubject::Skill skill;
  skill.gain_error = 0.2;
  skill.noise_sigma = 3.0;

  SyntheticSubject first(controller, skill, Rng(7), 1.0);
  SyntheticSubject second(controller, skill, Rng(7), 1.0);
  const CartPoleState state = make_state(2.0, 0.0, 1.0, 0.0);
  for (int k = 0; k < 50; ++k) {
    const double u = first.control(state);
    CHECK(u == second.control(state));
    CHECK(std::abs(u) <= 1.0);
  }
}

TEST_CASE("subject construction validates its arguments") {
  SimParams params;
  const OptimalController controller(params, ControlGoal{});
  SyntheticSubject::Skill bad;
  bad.delay_samples = -1;
  CHECK_THROWS_AS(SyntheticSubject(controller, bad, Rng(1), params.u_sat),
                  std::invalid_argument);
  bad.delay_samples = 0;
  bad.noise_sigma = -0.5;
  CHECK_THROWS_AS(SyntheticSubject(controller, bad, Rng(1), params.u_sat),
                  std::invalid_argument);
  CHECK_THROWS_AS(SyntheticSubject(controller, SyntheticSubject::Skill{}, Rng(1), 0.0),
                  std::invalid_argument);
}

TEST_CASE("run_trial records aligned states and saturated inputs") {
  TrialOptions options;
  const OptimalController controller(options.params, ControlGoal{});
  const ControlPolicy policy = [&](const CartPoleState& s) { return controller.control(s); };

  const Trajectory trajectory = run_trial(policy, options, 99, "t0");
  CHECK(trajectory.size() == 1801);
  CHECK(trajectory.trial_id == "t0");
  CHECK(trajectory.agent_tag == "optimal");
  CHECK(trajectory.seed == 99);
  CHECK(trajectory.dt == options.params.dt);

  for (Eigen::Index k = 0; k < trajectory.size(); k += 97) {
    CartPoleState s;
    s.theta = trajectory.states(k, 0);
    s.x_c = trajectory.states(k, 1);
    s.theta_dot = trajectory.states(k, 2);
    s.xc_dot = trajectory.states(k, 3);
    const double want =
        std::clamp(policy(s), -options.params.u_sat, options.params.u_sat);
    CHECK(trajectory.controls(k) == want);
  }

  const Trajectory again = run_trial(policy, options, 99, "t0");
  CHECK(trajectory.states == again.states);
  CHECK(trajectory.controls == again.controls);

  const Trajectory other = run_trial(policy, options, 100, "t1");
  CHECK(trajectory.states(0, 0) != other.states(0, 0));
}

TEST_CASE("run_trial rejects fractional step counts") {
  TrialOptions options;
  options.duration = 0.25;
  options.params.dt = 0.1;
  CHECK_THROWS_AS(run_trial([](const CartPoleState&) { return 0.0; }, options, 1, "t"),
                  std::invalid_argument);
  options.duration = -1.0;
  options.params.dt = 1.0 / 60.0;
  CHECK_THROWS_AS(run_trial([](const CartPoleState&) { return 0.0; }, options, 1, "t"),
                  std::invalid_argument);
}

TEST_CASE("generate_trials names and seeds each trial deterministically") {
  TrialOptions options;
  options.duration = 1.0;
  options.trial_prefix = "probe";
  const auto make_policy = [](std::uint64_t) -> ControlPolicy {
    return [](const CartPoleState&) { return 0.0; };
  };

  const std::vector<Trajectory> first = generate_trials(make_policy, 3, options, 11);
  const std::vector<Trajectory> second = generate_trials(make_policy, 3, options, 11);

  REQUIRE(first.size() == 3);
  CHECK(first[0].trial_id == "probe-0");
  CHECK(first[2].trial_id == "probe-2");
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(first[t].states == second[t].states);
    CHECK(first[t].seed == second[t].seed);
  }
  CHECK(first[0].seed != first[1].seed);

  CHECK_THROWS_AS(generate_trials(make_policy, 0, options, 11), std::invalid_argument);
}

TEST_CASE("inversion_success_rate inspects the final ten seconds") {
  Trajectory good;
  good.dt = 1.0 / 60.0;
  good.states = RowMatrix::Zero(1801, 4);
  good.controls = Eigen::VectorXd::Zero(1801);

  Trajectory bad = good;
  bad.states.col(0).setConstant(kPi);

  // Early excursions outside the window do not count against the trial.
  Trajectory late_catch = good;
  for (Eigen::Index k = 0; k < 1200; ++k) late_catch.states(k, 0) = kPi;

  CHECK(inversion_success_rate({good}) == 1.0);
  CHECK(inversion_success_rate({bad}) == 0.0);
  CHECK(inversion_success_rate({good, bad}) == 0.5);
  CHECK(inversion_success_rate({late_catch}) == 1.0);
}

}  // namespace dss
